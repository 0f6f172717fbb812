"""The twelve logics between IL- and IL, their frame classes and axiom schemata."""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    BOT,
    Box,
    Formula,
    Imp,
    Rhd,
    big_conj,
    boxdot,
    conj,
    dia,
    disj,
    iff,
    neg,
    sorted_formulas,
    subformulas,
)
from .semantics import Frame, FrameProperty, check_frame_property

P = FrameProperty


@dataclass(frozen=True)
class Logic:
    name: str
    schemata: frozenset[str]
    frame_props: frozenset[FrameProperty]

    def __str__(self) -> str:
        return self.name

    @property
    def closed_props(self) -> frozenset[FrameProperty]:
        """Frame properties with the implied J4+ made explicit and Base dropped."""
        props = set(self.frame_props) - {P.BASE}
        if P.J2PLUS in props:
            props.add(P.J4PLUS)
        return frozenset(props)


_BASE_SCHEMATA = frozenset({"G2", "G3", "J3", "J6"})
_PROP_SCHEMA = {P.J1: "J1", P.J2PLUS: "J2plus", P.J4PLUS: "J4plus", P.J5: "J5"}


def _logic(name: str, *props: FrameProperty) -> Logic:
    props = frozenset(props) or frozenset({P.BASE})
    schemata = _BASE_SCHEMATA | {_PROP_SCHEMA[p] for p in props if p in _PROP_SCHEMA}
    return Logic(name, schemata, props)


LOGICS: dict[str, Logic] = {
    lg.name: lg
    for lg in (
        _logic("IL-"),
        _logic("IL-(J1)", P.J1),
        _logic("IL-(J5)", P.J5),
        _logic("IL-(J1,J5)", P.J1, P.J5),
        _logic("IL-(J4+)", P.J4PLUS),
        _logic("IL-(J1,J4+)", P.J1, P.J4PLUS),
        _logic("IL-(J2+)", P.J2PLUS),
        _logic("CL", P.J1, P.J2PLUS),
        _logic("IL-(J4+,J5)", P.J4PLUS, P.J5),
        _logic("IL-(J1,J4+,J5)", P.J1, P.J4PLUS, P.J5),
        _logic("IL-(J2+,J5)", P.J2PLUS, P.J5),
        _logic("IL", P.J1, P.J2PLUS, P.J5),
    )
}


class UnknownLogic(KeyError):
    pass


def lookup(name: str) -> Logic:
    key = name.replace(" ", "").replace("⁻", "-")
    try:
        return LOGICS[key]
    except KeyError:
        raise UnknownLogic(f"unknown logic {name!r}; known: {', '.join(LOGICS)}") from None


def frame_class_check(L: Logic, fr: Frame) -> bool:
    return all(check_frame_property(fr, p) for p in L.frame_props)


def extends(L1: Logic, L2: Logic) -> bool:
    """``L2`` contains ``L1``."""
    return L1.closed_props <= L2.closed_props


# -- schemata ------------------------------------------------------------------

def _j1(a, b):
    return Imp(Box(Imp(a, b)), Rhd(a, b))


def _j2(a, b, c):
    return Imp(conj(Rhd(a, b), Rhd(b, c)), Rhd(a, c))


def _j2plus(a, b, c):
    return Imp(conj(Rhd(a, disj(b, c)), Rhd(b, c)), Rhd(a, c))


def _j3(a, b, c):
    return Imp(conj(Rhd(a, c), Rhd(b, c)), Rhd(disj(a, b), c))


def _j4(a, b):
    return Imp(Rhd(a, b), Imp(dia(a), dia(b)))


def _j4plus(a, b, c):
    return Imp(Box(Imp(a, b)), Imp(Rhd(c, a), Rhd(c, b)))


def _j5(a):
    return Rhd(dia(a), a)


def _j6(a):
    return iff(Box(a), Rhd(neg(a), BOT))


def _g2(a, b):
    return Imp(Box(Imp(a, b)), Imp(Box(a), Box(b)))


def _g3(a):
    return Imp(Box(Imp(Box(a), a)), Box(a))


SCHEMATA = {
    "G2": (2, _g2),
    "G3": (1, _g3),
    "J1": (2, _j1),
    "J2": (3, _j2),
    "J2plus": (3, _j2plus),
    "J3": (3, _j3),
    "J4": (2, _j4),
    "J4plus": (3, _j4plus),
    "J5": (1, _j5),
    "J6": (1, _j6),
}

_ALIASES = {"J2+": "J2plus", "J4+": "J4plus"}


def schema_arity(schema: str) -> int:
    return SCHEMATA[_ALIASES.get(schema, schema)][0]


def axiom_instance(schema: str, args: list[Formula]) -> Formula:
    key = _ALIASES.get(schema, schema)
    if key not in SCHEMATA:
        raise KeyError(f"unknown schema {schema!r}")
    arity, build = SCHEMATA[key]
    if len(args) != arity:
        raise ValueError(f"{schema} takes {arity} arguments, got {len(args)}")
    return build(*args)


def embed_il(a: Formula) -> Formula:
    """``boxdot(/\\ {B |> B : B proper subformula of a}) -> a``."""
    parts = [Rhd(b, b) for b in sorted_formulas(subformulas(a, proper=True))]
    return Imp(boxdot(big_conj(parts)), a)
