"""Formulas of interpretability logic.

The core syntax has five constructors: ``Bot``, ``Var``, ``Imp``, ``Box`` and
``Rhd`` (the binary modality).  Everything else (``true``, negation,
conjunction, disjunction, equivalence, diamond) is expanded while parsing, so
two formulas are equal exactly when their core trees are equal.

Surface grammar, tightest binding first::

    unary  ~ ! [] <>
    |>                 (right associative)
    &                  (left associative)
    |                  (left associative)
    ->                 (right associative)
    <->                (left associative)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping


class Formula:
    """Base class of the five core constructors."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    def __repr__(self) -> str:
        return "Bot()"


@dataclass(frozen=True, slots=True)
class Var(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Imp(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Box(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Rhd(Formula):
    lhs: Formula
    rhs: Formula


BOT = Bot()
TOP = Imp(BOT, BOT)


# -- abbreviations -----------------------------------------------------------

def neg(a: Formula) -> Formula:
    return Imp(a, BOT)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(Imp(a, neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Imp(neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Imp(a, b), Imp(b, a))


def dia(a: Formula) -> Formula:
    return neg(Box(neg(a)))


def boxdot(a: Formula) -> Formula:
    """``a & []a`` in core form."""
    return conj(a, Box(a))


def big_conj(items: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``true``."""
    items = list(items)
    if not items:
        return TOP
    out = items[-1]
    for a in reversed(items[:-1]):
        out = conj(a, out)
    return out


def big_disj(items: Iterable[Formula]) -> Formula:
    items = list(items)
    if not items:
        return BOT
    out = items[-1]
    for a in reversed(items[:-1]):
        out = disj(a, out)
    return out


# -- syntactic analyses ------------------------------------------------------

def formula_key(f: Formula) -> tuple:
    """Structural sort key: constructor rank first, then children."""
    if isinstance(f, Bot):
        return (0,)
    if isinstance(f, Var):
        return (1, f.name)
    if isinstance(f, Imp):
        return (2, formula_key(f.lhs), formula_key(f.rhs))
    if isinstance(f, Box):
        return (3, formula_key(f.arg))
    return (4, formula_key(f.lhs), formula_key(f.rhs))


def sorted_formulas(fs: Iterable[Formula]) -> list[Formula]:
    return sorted(fs, key=formula_key)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Imp, Rhd)):
        return (f.lhs, f.rhs)
    if isinstance(f, Box):
        return (f.arg,)
    return ()


def variables(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        else:
            stack.extend(children(g))
    return frozenset(out)


def subformulas(f: Formula, proper: bool = False) -> frozenset[Formula]:
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g not in out:
            out.add(g)
            stack.extend(children(g))
    if proper:
        out.discard(f)
    return frozenset(out)


def depth(f: Formula) -> int:
    """Height of the core tree; atoms and ``false`` have depth 0."""
    kids = children(f)
    return 1 + max(depth(k) for k in kids) if kids else 0


def size(f: Formula) -> int:
    return 1 + sum(size(k) for k in children(f))


def substitute(f: Formula, p: str, g: Formula) -> Formula:
    return substitute_many(f, {p: g})


def substitute_many(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution of formulas for variables."""
    if not mapping:
        return f
    cache: dict[Formula, Formula] = {}

    def go(h: Formula) -> Formula:
        if h in cache:
            return cache[h]
        if isinstance(h, Var):
            out = mapping.get(h.name, h)
        elif isinstance(h, Imp):
            out = Imp(go(h.lhs), go(h.rhs))
        elif isinstance(h, Box):
            out = Box(go(h.arg))
        elif isinstance(h, Rhd):
            out = Rhd(go(h.lhs), go(h.rhs))
        else:
            out = h
        cache[h] = out
        return out

    return go(f)


def is_modalized(f: Formula, p: str, left_only: bool = False) -> bool:
    """Every occurrence of ``p`` lies under a box or a rhd.

    With ``left_only`` the formula must additionally have no subformula
    ``B |> C`` with ``p`` occurring in ``C`` (left-modalized).
    """

    def go(h: Formula, guarded: bool) -> bool:
        if isinstance(h, Var):
            return guarded or h.name != p
        if isinstance(h, Imp):
            return go(h.lhs, guarded) and go(h.rhs, guarded)
        if isinstance(h, Box):
            return go(h.arg, True)
        if isinstance(h, Rhd):
            if left_only and p in variables(h.rhs):
                return False
            return go(h.lhs, True) and go(h.rhs, True)
        return True

    return go(f, False)


def is_negation(f: Formula) -> bool:
    return isinstance(f, Imp) and f.rhs == BOT


def neg_tilde(f: Formula) -> Formula:
    """``B`` if ``f`` is ``B -> false``, otherwise ``f -> false``."""
    if is_negation(f):
        return f.lhs
    return neg(f)


def rhd_operands(phi: Iterable[Formula]) -> set[Formula]:
    out: set[Formula] = set()
    for f in phi:
        if isinstance(f, Rhd):
            out.add(f.lhs)
            out.add(f.rhs)
    return out


def adequate_closure(xs: Iterable[Formula]) -> frozenset[Formula]:
    """Smallest adequate set containing ``xs``.

    Adequate: closed under subformulas and ``neg_tilde``; ``false`` is a
    rhd-operand; ``A |> B`` is present for all rhd-operands ``A, B``; and
    ``[]~A`` is present for every rhd-operand ``A``.
    """
    phi: set[Formula] = set()
    work = list(xs)
    ops_done: set[Formula] = set()
    while True:
        while work:
            f = work.pop()
            if f in phi:
                continue
            phi.add(f)
            work.extend(children(f))
            work.append(neg_tilde(f))
        ops = rhd_operands(phi) | {BOT}
        if ops <= ops_done:
            return frozenset(phi)
        ops_done |= ops
        for a in ops:
            work.append(Box(neg_tilde(a)))
            for b in ops:
                work.append(Rhd(a, b))


# -- parsing -----------------------------------------------------------------

VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|\|>|\[\]|<>|[~!&|()])|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
)


class ParseError(ValueError):
    """Syntax error with the byte offset and the set of acceptable tokens."""

    def __init__(self, text: str, pos: int, expected: Iterable[str]):
        self.text = text
        self.offset = len(text[:pos].encode("utf-8"))
        self.expected = frozenset(expected)
        found = text[pos:pos + 8] or "end of input"
        super().__init__(
            f"syntax error at byte {self.offset}: expected one of "
            f"{', '.join(sorted(self.expected))}; found {found!r}"
        )


_ATOM_START = {"variable", "true", "false", "(", "~", "!", "[]", "<>"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                rest = text[pos:]
                if rest.strip():
                    start = pos + len(rest) - len(rest.lstrip())
                    raise ParseError(text, start, _ATOM_START | {"->", "<->", "&", "|", "|>", ")"})
                break
            if m.group("op"):
                self.toks.append(("op", m.group("op"), m.start("op")))
            else:
                name = m.group("name")
                start = m.start("name")
                if name in ("true", "false"):
                    self.toks.append(("op", name, start))
                elif VAR_RE.fullmatch(name):
                    self.toks.append(("var", name, start))
                else:
                    raise ParseError(text, start, _ATOM_START)
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        if self.i < len(self.toks):
            kind, val, _ = self.toks[self.i]
            return "variable" if kind == "var" else val
        return None

    def pos(self) -> int:
        return self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)

    def take(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op: str) -> None:
        if self.peek() != op:
            raise ParseError(self.text, self.pos(), {op})
        self.i += 1

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() is not None:
            raise ParseError(self.text, self.pos(), {"->", "<->", "&", "|", "|>", "end of input"})
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek() == "<->":
            self.i += 1
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek() == "->":
            self.i += 1
            return Imp(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.i += 1
            f = disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.rhd()
        while self.peek() == "&":
            self.i += 1
            f = conj(f, self.rhd())
        return f

    def rhd(self) -> Formula:
        f = self.unary()
        if self.peek() == "|>":
            self.i += 1
            return Rhd(f, self.rhd())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in ("~", "!"):
            self.i += 1
            return neg(self.unary())
        if tok == "[]":
            self.i += 1
            return Box(self.unary())
        if tok == "<>":
            self.i += 1
            return dia(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "variable":
            return Var(self.take()[1])
        if tok == "true":
            self.i += 1
            return TOP
        if tok == "false":
            self.i += 1
            return BOT
        if tok == "(":
            self.i += 1
            f = self.iff()
            self.expect(")")
            return f
        raise ParseError(self.text, self.pos(), _ATOM_START)


def parse(text: str) -> Formula:
    """Parse surface syntax into a core formula."""
    return _Parser(text).parse()


# -- rendering ---------------------------------------------------------------

_ATOMIC, _RHD, _IMP = 3, 2, 1


def _level(f: Formula) -> int:
    if isinstance(f, Rhd):
        return _RHD
    if isinstance(f, Imp) and f != TOP:
        return _IMP
    return _ATOMIC


def render(f: Formula) -> str:
    """Core-form text; ``parse(render(f)) == f``.

    ``true`` is the only abbreviation emitted, since it parses back to the
    identical core tree.
    """

    def wrap(g: Formula, need: int) -> str:
        s = render(g)
        return f"({s})" if _level(g) < need else s

    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Var):
        return f.name
    if f == TOP:
        return "true"
    if isinstance(f, Box):
        return "[]" + wrap(f.arg, _ATOMIC)
    if isinstance(f, Rhd):
        return f"{wrap(f.lhs, _ATOMIC)} |> {wrap(f.rhs, _ATOMIC)}"
    return f"{wrap(f.lhs, _RHD)} -> {wrap(f.rhs, _IMP)}"
