"""Formula corpora deduplicated by truth profile.

A profile records the truth set of a formula on every model of a fixed probe
collection.  Profiles are a congruence (the profile of ``A -> B``, ``[]A`` or
``A |> B`` is a function of the profiles of ``A`` and ``B``), so building depth
``d`` only from representatives of depth ``< d`` reaches every profile that any
formula of depth ``<= d`` has.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .batch import FrameBatch, evaluate, valuation_codes
from .formula import BOT, Box, Formula, Imp, Rhd, Var, depth, variables
from .semantics import Model


class ModelAlgebra:
    """Profiles over a list of concrete models, as tuples of integer masks."""

    def __init__(self, models: Sequence[Model]):
        self.models = list(models)
        self._succ = []
        self._rows = []
        self._full = []
        for m in self.models:
            fr = m.frame
            n = len(fr.worlds)
            self._full.append((1 << n) - 1)
            self._succ.append(fr.succ_masks)
            rows = []
            for w in range(n):
                rows.append([(x, fr.s_masks[w][x]) for x in range(n) if fr.succ_masks[w] >> x & 1])
            self._rows.append(rows)

    def atom(self, f: Formula) -> tuple:
        if f == BOT:
            return tuple(0 for _ in self.models)
        return tuple(m.var_mask(f.name) for m in self.models)

    def imp(self, a: tuple, b: tuple) -> tuple:
        return tuple((~x | y) & full for x, y, full in zip(a, b, self._full))

    def box(self, a: tuple) -> tuple:
        out = []
        for x, succ in zip(a, self._succ):
            mask = 0
            for w, s in enumerate(succ):
                if s & ~x == 0:
                    mask |= 1 << w
            out.append(mask)
        return tuple(out)

    def rhd(self, a: tuple, b: tuple) -> tuple:
        out = []
        for xa, xb, rows in zip(a, b, self._rows):
            mask = 0
            for w, row in enumerate(rows):
                for x, sx in row:
                    if xa >> x & 1 and not sx & xb:
                        break
                else:
                    mask |= 1 << w
            out.append(mask)
        return tuple(out)

    def key(self, prof: tuple):
        return prof


class BatchAlgebra:
    """Profiles over every frame of some batches and every valuation of ``names``."""

    def __init__(self, batches: Sequence[FrameBatch], names: Sequence[str]):
        self.batches = list(batches)
        self.names = list(names)
        self.codes = [valuation_codes(b.n, len(self.names)) for b in self.batches]

    def atom(self, f: Formula) -> tuple:
        return tuple(evaluate(b, f, self.names, c).copy() for b, c in zip(self.batches, self.codes))

    def imp(self, a, b):
        return tuple((~x | y) & np.uint32((1 << bt.n) - 1) for x, y, bt in zip(a, b, self.batches))

    def box(self, a):
        return tuple(_np_box(bt, x) for bt, x in zip(self.batches, a))

    def rhd(self, a, b):
        return tuple(_np_rhd(bt, x, y) for bt, x, y in zip(self.batches, a, b))

    def key(self, prof):
        return b"".join(x.tobytes() for x in prof)


def _np_box(bt: FrameBatch, a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    extra = (1,) * (a.ndim - 1)
    succ = bt.succ.astype(a.dtype)
    for w in range(bt.n):
        ok = (succ[:, w].reshape((-1,) + extra) & ~a) == 0
        out |= ok.astype(a.dtype) << w
    return out


def _np_rhd(bt: FrameBatch, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised ``a |> b``; the first axis of ``a`` and ``b`` indexes frames."""
    n = bt.n
    extra = (1,) * (a.ndim - 1)
    S = bt.S.astype(a.dtype)
    out = np.zeros_like(a)
    for w in range(n):
        ok = None
        for x in range(n):
            in_succ = ((bt.succ[:, w] >> x) & 1).astype(bool)
            if not in_succ.any():
                continue
            bad = ((a >> x) & 1).astype(bool)
            if not in_succ.all():
                bad &= in_succ.reshape((-1,) + extra)
            bad &= (S[:, w, x].reshape((-1,) + extra) & b) == 0
            ok = ~bad if ok is None else ok & ~bad
        if ok is None:
            out |= np.array(1 << w, dtype=a.dtype)
        else:
            out |= ok.astype(a.dtype) << w
    return out


@dataclass
class Entry:
    formula: Formula
    profile: object


def semantic_corpus(
    atoms: Sequence[Formula],
    max_depth: int,
    algebra,
    limit: int | None = None,
    left_var: str | None = None,
) -> list[Entry]:
    """Representatives of all profiles of formulas over ``atoms`` up to ``max_depth``.

    ``atoms`` should contain ``false`` and the variables of interest.  Each
    profile is represented by the first formula that produced it, scanning by
    depth, then constructor (box, implication, rhd), then child order.

    With ``left_var`` only formulas without ``left_var`` in a right argument of
    ``|>`` are built, and formulas with and without ``left_var`` are kept
    apart so that the restriction does not lose profiles.
    """
    seen: dict = {}
    reps: list[Entry] = []
    by_depth: list[list[Entry]] = [[]]

    def free(e: Entry) -> bool:
        return left_var not in variables(e.formula)

    def add(f: Formula, prof, level: int) -> None:
        k = algebra.key(prof)
        if left_var is not None:
            k = (left_var in variables(f), k)
        if k in seen:
            return
        seen[k] = len(reps)
        e = Entry(f, prof)
        reps.append(e)
        by_depth[level].append(e)

    for a in atoms:
        add(a, algebra.atom(a), 0)
    for d in range(1, max_depth + 1):
        by_depth.append([])
        older = [e for lvl in by_depth[: d - 1] for e in lvl]
        last = by_depth[d - 1]
        for e in last:
            add(Box(e.formula), algebra.box(e.profile), d)
        pairs = [(x, y) for x in last for y in older + last] + [(x, y) for x in older for y in last]
        for x, y in pairs:
            add(Imp(x.formula, y.formula), algebra.imp(x.profile, y.profile), d)
        for x, y in pairs:
            if left_var is not None and not free(y):
                continue
            add(Rhd(x.formula, y.formula), algebra.rhd(x.profile, y.profile), d)
            if limit is not None and len(reps) >= limit:
                return reps
    return reps


def syntactic_formulas(atoms: Sequence[Formula], max_depth: int) -> Iterator[Formula]:
    """Every formula over ``atoms`` of depth at most ``max_depth``, by depth."""
    levels: list[list[Formula]] = [list(atoms)]
    yield from atoms
    for d in range(1, max_depth + 1):
        older = [f for lvl in levels[:-1] for f in lvl]
        last = levels[-1]
        new = [Box(f) for f in last]
        pairs = [(x, y) for x in last for y in older + last] + [(x, y) for x in older for y in last]
        new += [Imp(x, y) for x, y in pairs] + [Rhd(x, y) for x, y in pairs]
        levels.append(new)
        yield from new


def syntactic_count(n_atoms: int, max_depth: int) -> int:
    """Number of formulas over ``n_atoms`` atoms of depth at most ``max_depth``."""
    t = n_atoms
    for _ in range(max_depth):
        t = n_atoms + t + 2 * t * t
    return t


def random_formula(rng: random.Random, names: Sequence[str], max_depth: int) -> Formula:
    """Random formula with depth at most ``max_depth``."""
    if max_depth == 0 or rng.random() < 0.25:
        pool = [BOT] + [Var(p) for p in names]
        return rng.choice(pool)
    kind = rng.randrange(3)
    if kind == 0:
        return Box(random_formula(rng, names, max_depth - 1))
    a = random_formula(rng, names, max_depth - 1)
    b = random_formula(rng, names, max_depth - 1)
    return Imp(a, b) if kind == 1 else Rhd(a, b)


def sample_formulas(seed: int, names: Sequence[str], max_depth: int, count: int) -> list[Formula]:
    rng = random.Random(seed)
    out = [random_formula(rng, names, max_depth) for _ in range(count)]
    assert all(depth(f) <= max_depth for f in out)
    return out
