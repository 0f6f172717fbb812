"""Explicit fixed points of modalized formulas and their bounded verification.

Three primitive solutions handle formulas whose root is modal:

* ``[]A(p)``            ->  ``[]A(true)``
* ``A(p) |> B(p)``      ->  ``A(true) |> B([]~A(true))``
* ``A(p) |> B`` (p not in B, left-modalized)  ->  ``A([]~A(true)) |> B``

Other formulas are reduced to these by factoring out maximal modal
subformulas one at a time and composing the partial solutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    TOP,
    Box,
    Formula,
    Imp,
    Rhd,
    Var,
    boxdot,
    conj,
    formula_key,
    iff,
    is_modalized,
    neg,
    render,
    substitute,
    variables,
)
from .logics import Logic, extends, frame_class_check, lookup
from .search import Report, SearchBudget, Status, Witness, search
from .semantics import Model, refuting_valuation

FRESH_PREFIX = "_r"


class FixpointError(ValueError):
    """A precondition of a fixed-point construction does not hold."""


class VariableConditionError(ValueError):
    """A claimed fixed point mentions a variable it must avoid."""


@dataclass
class FixedPointResult:
    input: Formula
    variable: str
    fixpoint: Formula
    trace: list[tuple[str, str]] = field(default_factory=list)


def _require_var_condition(a: Formula, p: str, f: Formula) -> None:
    extra = variables(f) - (variables(a) - {p})
    if extra:
        raise VariableConditionError(
            f"fixed point {render(f)} mentions {sorted(extra)} outside v(A) minus {p}"
        )


def fp_primitive_box(a: Formula, p: str) -> Formula:
    """Fixed point of ``[]a`` in ``p``: ``[]a(true)``."""
    if not is_modalized(Box(a), p, left_only=True):
        raise FixpointError(f"[]({render(a)}) is not left-modalized in {p}")
    return Box(substitute(a, p, TOP))


def fp_primitive_rhd(a: Formula, b: Formula, p: str) -> Formula:
    """Fixed point of ``a |> b`` in ``p``: ``a(true) |> b([]~a(true))``."""
    a_top = substitute(a, p, TOP)
    return Rhd(a_top, substitute(b, p, Box(neg(a_top))))


def fp_primitive_left(a: Formula, b: Formula, p: str) -> Formula:
    """Fixed point of ``a |> b`` with ``p`` absent from ``b``: ``a([]~a(true)) |> b``."""
    if p in variables(b):
        raise FixpointError(f"{p} occurs on the right of |>")
    if not is_modalized(Rhd(a, b), p, left_only=True):
        raise FixpointError(f"{render(Rhd(a, b))} is not left-modalized in {p}")
    return Rhd(substitute(a, p, Box(neg(substitute(a, p, TOP)))), b)


GENERAL = lookup("IL-(J2+,J5)")
LEFT = lookup("IL-(J4+,J5)")


def _mode(L: Logic, a: Formula, p: str) -> str:
    if extends(GENERAL, L):
        return "general"
    if extends(LEFT, L):
        if is_modalized(a, p, left_only=True):
            return "left"
        raise FixpointError(
            f"{L.name} only supports left-modalized formulas; {render(a)} is not left-modalized in {p}"
        )
    raise FixpointError(f"no fixed-point construction is available over {L.name}")


def _maximal_modal(a: Formula, p: str) -> list[Formula]:
    """Distinct maximal subformulas with modal root that contain ``p``."""
    found: set[Formula] = set()

    def go(g: Formula) -> None:
        if p not in variables(g):
            return
        if isinstance(g, (Box, Rhd)):
            found.add(g)
        elif isinstance(g, Imp):
            go(g.lhs)
            go(g.rhs)

    go(a)
    return sorted(found, key=formula_key)


def _replace(a: Formula, target: Formula, r: Formula) -> Formula:
    if a == target:
        return r
    if isinstance(a, Imp):
        return Imp(_replace(a.lhs, target, r), _replace(a.rhs, target, r))
    return a


class _Fresh:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)
        self.k = 0

    def __call__(self) -> str:
        while f"{FRESH_PREFIX}{self.k}" in self.taken:
            self.k += 1
        name = f"{FRESH_PREFIX}{self.k}"
        self.taken.add(name)
        return name


def _solve(a: Formula, p: str, mode: str, fresh: _Fresh, trace: list) -> Formula:
    if p not in variables(a):
        trace.append((render(a), "constant"))
        return a
    if isinstance(a, Box):
        if is_modalized(a, p, left_only=True):
            trace.append((render(a), "box"))
        elif mode == "general":
            trace.append((render(a), "box via J6"))
        else:
            raise FixpointError(f"{render(a)} is not left-modalized in {p}")
        return Box(substitute(a.arg, p, TOP))
    if isinstance(a, Rhd):
        if mode == "general":
            trace.append((render(a), "rhd"))
            return fp_primitive_rhd(a.lhs, a.rhs, p)
        trace.append((render(a), "left rhd"))
        return fp_primitive_left(a.lhs, a.rhs, p)
    ds = _maximal_modal(a, p)
    if not ds:
        raise FixpointError(f"{render(a)} is not modalized in {p}")
    d = ds[-1]
    r = fresh()
    reduced = _replace(a, d, Var(r))
    trace.append((render(a), f"factor {render(d)} as {r}"))
    f1 = _solve(reduced, p, mode, fresh, trace)
    g = _solve(substitute(d, p, f1), r, mode, fresh, trace)
    return substitute(f1, r, g)


def fixed_point(L: Logic, a: Formula, p: str) -> FixedPointResult:
    if not is_modalized(a, p):
        raise FixpointError(f"{render(a)} is not modalized in {p}")
    mode = _mode(L, a, p)
    trace: list[tuple[str, str]] = []
    f = _solve(a, p, mode, _Fresh(variables(a)), trace)
    _require_var_condition(a, p, f)
    return FixedPointResult(a, p, f, trace)


def fixed_point_equation(a: Formula, p: str, f: Formula) -> Formula:
    return iff(f, substitute(a, p, f))


def _check_extra(L: Logic, target: Formula, models, rep: Report) -> None:
    for m in models:
        fr = m.frame if isinstance(m, Model) else m
        if not frame_class_check(L, fr):
            rep.notes.append("injected frame outside the class skipped")
            continue
        hit = refuting_valuation(fr, target)
        if hit is not None:
            rep.status = Status.REFUTED
            rep.witness = Witness(*hit)
            rep.notes.append("refuted on an injected frame")
            return


def verify_fixed_point(
    L: Logic,
    a: Formula,
    p: str,
    f: Formula,
    max_size: int,
    budget: SearchBudget | None = None,
    extra_models=(),
) -> Report:
    """Bounded check of ``f <-> a(f)`` over the class of ``L``.

    The variable condition is checked first and raises
    ``VariableConditionError``; injected frames are checked before the search.
    """
    _require_var_condition(a, p, f)
    target = fixed_point_equation(a, p, f)
    if extra_models:
        rep = Report(Status.VERIFIED, max_size)
        _check_extra(L, target, extra_models, rep)
        if rep.refuted:
            return rep
    budget = budget or SearchBudget(max_size)
    return search(L, target, budget)


def fresh_partner(a: Formula, p: str) -> str:
    taken = variables(a) | {p}
    if "q" not in taken:
        return "q"
    k = 0
    while f"q{k}" in taken:
        k += 1
    return f"q{k}"


def ufp_formula(a: Formula, p: str, q: str | None = None) -> Formula:
    """``boxdot(p <-> a(p)) & boxdot(q <-> a(q)) -> (p <-> q)``."""
    q = q or fresh_partner(a, p)
    if q in variables(a) or q == p:
        raise FixpointError(f"{q} is not fresh for {render(a)}")
    pv, qv = Var(p), Var(q)
    return Imp(
        conj(boxdot(iff(pv, a)), boxdot(iff(qv, substitute(a, p, qv)))),
        iff(pv, qv),
    )


def ufp_check(L: Logic, a: Formula, p: str, max_size: int, budget: SearchBudget | None = None) -> Report:
    if not is_modalized(a, p):
        raise FixpointError(f"{render(a)} is not modalized in {p}")
    return search(L, ufp_formula(a, p), budget or SearchBudget(max_size))
