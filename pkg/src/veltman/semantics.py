"""Finite Veltman frames and models, forcing, validity and frame properties.

World identifiers are arbitrary hashable values (strings in files, integers
in enumerated frames).  Truth sets are computed as integer bitmasks over the
frame's world order, one mask per subformula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from .formula import Bot, Box, Formula, Imp, Rhd, Var, variables

World = Hashable


class FrameError(ValueError):
    """A frame or model violates its structural invariants."""


class FrameProperty(Enum):
    BASE = "Base"
    J1 = "J1"
    J2PLUS = "J2plus"
    J4PLUS = "J4plus"
    J5 = "J5"


@dataclass(frozen=True, eq=False)
class Frame:
    """Worlds, a strict partial order ``R`` and one relation ``S[w]`` per world.

    Construction checks that ``R`` is irreflexive and transitive and that
    ``x S_w y`` implies ``w R x``.
    """

    worlds: tuple
    R: frozenset
    S: Mapping[World, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        worlds = tuple(self.worlds)
        if not worlds:
            raise FrameError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise FrameError("duplicate world identifiers")
        ws = set(worlds)
        R = frozenset((a, b) for a, b in self.R)
        for a, b in R:
            if a not in ws or b not in ws:
                raise FrameError(f"R edge ({a!r}, {b!r}) mentions an unknown world")
            if a == b:
                raise FrameError(f"R is not irreflexive at {a!r}")
        for a, b in R:
            for c, d in R:
                if b == c and (a, d) not in R:
                    raise FrameError(f"R is not transitive: ({a!r}, {b!r}), ({b!r}, {d!r})")
        S = {}
        for w, rel in self.S.items():
            if w not in ws:
                raise FrameError(f"S is given for unknown world {w!r}")
            rel = frozenset((x, y) for x, y in rel)
            for x, y in rel:
                if y not in ws:
                    raise FrameError(f"S_{w} edge mentions unknown world {y!r}")
                if (w, x) not in R:
                    raise FrameError(f"S_{w} relates {x!r} but {w!r} R {x!r} fails")
            S[w] = rel
        for w in worlds:
            S.setdefault(w, frozenset())
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "S", S)

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return (self.worlds, self.R, self.S) == (other.worlds, other.R, other.S)

    @cached_property
    def index(self) -> dict:
        return {w: i for i, w in enumerate(self.worlds)}

    @cached_property
    def succ_masks(self) -> tuple[int, ...]:
        """Bitmask of R-successors for each world index."""
        idx = self.index
        out = [0] * len(self.worlds)
        for a, b in self.R:
            out[idx[a]] |= 1 << idx[b]
        return tuple(out)

    @cached_property
    def s_masks(self) -> tuple[tuple[int, ...], ...]:
        """``s_masks[w][x]`` is the bitmask of ``y`` with ``x S_w y``."""
        idx = self.index
        n = len(self.worlds)
        out = [[0] * n for _ in range(n)]
        for w, rel in self.S.items():
            row = out[idx[w]]
            for x, y in rel:
                row[idx[x]] |= 1 << idx[y]
        return tuple(tuple(r) for r in out)

    def successors(self, w: World) -> frozenset:
        return frozenset(b for a, b in self.R if a == w)

    def restrict(self, keep: Iterable[World]) -> "Frame":
        keep = set(keep)
        worlds = tuple(w for w in self.worlds if w in keep)
        R = {(a, b) for a, b in self.R if a in keep and b in keep}
        S = {w: {(x, y) for x, y in self.S[w] if x in keep and y in keep} for w in worlds}
        return Frame(worlds, frozenset(R), S)


@dataclass(frozen=True, eq=False)
class Model:
    frame: Frame
    valuation: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        ws = set(self.frame.worlds)
        val = {}
        for p, xs in self.valuation.items():
            xs = frozenset(xs)
            bad = xs - ws
            if bad:
                raise FrameError(f"valuation of {p} mentions unknown worlds {sorted(map(str, bad))}")
            val[p] = xs
        object.__setattr__(self, "valuation", val)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return self.frame == other.frame and self.valuation == other.valuation

    def var_mask(self, p: str) -> int:
        idx = self.frame.index
        mask = 0
        for w in self.valuation.get(p, ()):
            mask |= 1 << idx[w]
        return mask

    def true_at(self, w: World) -> frozenset[str]:
        return frozenset(p for p, xs in self.valuation.items() if w in xs)


def truth_masks(m: Model, f: Formula, memo: dict | None = None) -> int:
    """Bitmask of the worlds of ``m`` where ``f`` holds."""
    fr = m.frame
    n = len(fr.worlds)
    full = (1 << n) - 1
    succ = fr.succ_masks
    smask = fr.s_masks
    memo = {} if memo is None else memo

    def go(g: Formula) -> int:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Bot):
            out = 0
        elif isinstance(g, Var):
            out = m.var_mask(g.name)
        elif isinstance(g, Imp):
            out = (~go(g.lhs) | go(g.rhs)) & full
        elif isinstance(g, Box):
            a = go(g.arg)
            out = 0
            for w in range(n):
                if succ[w] & ~a == 0:
                    out |= 1 << w
        elif isinstance(g, Rhd):
            a, b = go(g.lhs), go(g.rhs)
            out = 0
            for w in range(n):
                todo = succ[w] & a
                row = smask[w]
                x = 0
                while todo:
                    if todo & 1 and row[x] & b == 0:
                        break
                    todo >>= 1
                    x += 1
                else:
                    out |= 1 << w
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return go(f)


def holds(m: Model, w: World, f: Formula) -> bool:
    idx = m.frame.index
    if w not in idx:
        raise FrameError(f"unknown world {w!r}")
    return bool(truth_masks(m, f) >> idx[w] & 1)


def truth_set(m: Model, f: Formula) -> frozenset:
    mask = truth_masks(m, f)
    return frozenset(w for i, w in enumerate(m.frame.worlds) if mask >> i & 1)


def valid_in_model(m: Model, f: Formula) -> bool:
    return truth_masks(m, f) == (1 << len(m.frame.worlds)) - 1


def valid_in_frame(fr: Frame, f: Formula) -> bool:
    """Truth at every world under every valuation of ``variables(f)``."""
    return refuting_valuation(fr, f) is None


def refuting_valuation(fr: Frame, f: Formula) -> tuple[Model, World] | None:
    """First (model, world) on ``fr`` refuting ``f``, or ``None``."""
    from .batch import FrameBatch, first_failure

    names = sorted(variables(f))
    batch = FrameBatch.from_frames([fr])
    hit = first_failure(batch, f, names)
    if hit is None:
        return None
    _, val_code, world = hit
    n = len(fr.worlds)
    valuation = {
        p: frozenset(fr.worlds[j] for j in range(n) if val_code >> (i * n + j) & 1)
        for i, p in enumerate(names)
    }
    return Model(fr, valuation), fr.worlds[world]


def _s_transitive(rel: frozenset) -> bool:
    return all((a, d) in rel for a, b in rel for c, d in rel if b == c)


def check_frame_property(fr: Frame, prop: FrameProperty) -> bool:
    """Structural condition of ``prop``; no valuations involved."""
    if prop is FrameProperty.BASE:
        return True
    R = fr.R
    if prop is FrameProperty.J1:
        return all((x, x) in fr.S[w] for w, x in R)
    if prop is FrameProperty.J4PLUS:
        return all((w, y) in R for w in fr.worlds for _, y in fr.S[w])
    if prop is FrameProperty.J2PLUS:
        return check_frame_property(fr, FrameProperty.J4PLUS) and all(
            _s_transitive(fr.S[w]) for w in fr.worlds
        )
    if prop is FrameProperty.J5:
        return all((x, y) in fr.S[w] for w, x in R for a, y in R if a == x)
    raise ValueError(f"unknown frame property {prop!r}")


def upset(fr: Frame, r: World) -> frozenset:
    return fr.successors(r)


def generated_submodel(m: Model, r: World) -> Model:
    """Restriction of ``m`` to ``r`` and its R-successors.

    Requires the J4+ condition, under which every ``S_w`` of a surviving world
    stays inside the restricted world set.
    """
    fr = m.frame
    if r not in fr.index:
        raise FrameError(f"unknown world {r!r}")
    if not check_frame_property(fr, FrameProperty.J4PLUS):
        raise FrameError("generated submodels need the J4+ frame condition")
    keep = {r} | upset(fr, r)
    sub = fr.restrict(keep)
    val = {p: xs & keep for p, xs in m.valuation.items()}
    return Model(sub, val)
