"""Frame enumeration per logic class and bounded countermodel search.

Frames live on worlds ``0..n-1`` with R inside the numeric order (``i R j``
only when ``i > j``).  Every frame condition used here is a condition on one
``S_w`` at a time given R, so a class is enumerated as: each transitive R,
then the cartesian product of the admissible ``S_w`` for every world.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import numpy as np

from .batch import FrameBatch, first_failure, valuation_codes
from .formula import Formula, render, variables
from .logics import Logic, frame_class_check
from .semantics import Frame, FrameProperty, Model, holds

P = FrameProperty

# class sizes up to this many frames are enumerated in "auto" mode
AUTO_FRAME_LIMIT = 100_000
# frames x valuations above this go to the SAT engine in "auto" mode
AUTO_WORK_LIMIT = 1 << 24
BATCH_FRAMES = 1 << 14


@dataclass(frozen=True)
class SearchBudget:
    """Limits of one bounded search.

    ``strategy`` is ``"auto"``, ``"enumerate"`` or ``"sat"``.  In enumeration
    mode a valuation space larger than ``max_valuations`` is sampled with
    ``sampling_seed`` instead of being covered exhaustively.
    """

    max_worlds: int
    max_valuations: int = 1 << 16
    sampling_seed: int | None = 0
    strategy: str = "auto"
    min_worlds: int = 1

    def __post_init__(self):
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        if self.max_valuations < 1:
            raise ValueError("max_valuations must be positive")
        if self.strategy not in ("auto", "enumerate", "sat"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class Witness:
    model: Model
    world: object


class Status(Enum):
    VERIFIED = "VerifiedUpTo"
    REFUTED = "Refuted"


@dataclass
class Report:
    """Outcome of a bounded check.

    ``VERIFIED`` means no countermodel exists up to ``bound`` worlds (or, if a
    size was sampled, none was found); ``REFUTED`` always carries a witness.
    """

    status: Status
    bound: int
    witness: Witness | None = None
    frames_checked: int = 0
    modes: dict[int, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def exhaustive(self) -> bool:
        return not any("sampled" in m for m in self.modes.values())

    def __str__(self) -> str:
        if self.refuted:
            return "Refuted"
        return f"VerifiedUpTo({self.bound})"


# -- enumeration -------------------------------------------------------------

@lru_cache(maxsize=None)
def r_skeletons(n: int) -> tuple[tuple[int, ...], ...]:
    """Transitive relations inside ``>`` on ``0..n-1``, as successor masks.

    Ordered by edge count, then by the sorted edge list.
    """
    pairs = [(i, j) for i in range(n) for j in range(i)]
    out = []
    for k in range(len(pairs) + 1):
        for edges in combinations(pairs, k):
            es = set(edges)
            if all((a, d) in es for a, b in es for c, d in es if b == c):
                succ = [0] * n
                for a, b in edges:
                    succ[a] |= 1 << b
                out.append(tuple(succ))
    return tuple(out)


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@lru_cache(maxsize=None)
def s_options(n: int, succ: tuple[int, ...], w: int, props: frozenset) -> np.ndarray:
    """All admissible ``S_w`` as an array of shape ``(K, n)`` of row masks.

    Ordered by number of edges beyond the forced ones, then by encoding.
    """
    up = succ[w]
    j4 = P.J4PLUS in props or P.J2PLUS in props
    forced = [0] * n
    free = []
    for x in _bits(up):
        targets = _bits(up) if j4 else range(n)
        for y in targets:
            if (P.J1 in props and y == x) or (P.J5 in props and succ[x] >> y & 1):
                forced[x] |= 1 << y
            else:
                free.append((x, y))
    rows = []
    for k in range(len(free) + 1):
        for chosen in combinations(free, k):
            row = list(forced)
            for x, y in chosen:
                row[x] |= 1 << y
            if P.J2PLUS in props and not _rows_transitive(row):
                continue
            rows.append(row)
    arr = np.array(rows, dtype=np.uint32).reshape(len(rows), n)
    arr.setflags(write=False)
    return arr


def _rows_transitive(row: list[int]) -> bool:
    for x, mx in enumerate(row):
        for y in _bits(mx):
            if row[y] & ~mx:
                return False
    return True


def class_size(n: int, L: Logic) -> int:
    """Number of frames on ``n`` worlds in the class of ``L``."""
    total = 0
    for succ in r_skeletons(n):
        prod = 1
        for w in range(n):
            prod *= len(s_options(n, succ, w, L.frame_props))
        total += prod
    return total


def iter_batches(n: int, L: Logic, chunk: int = BATCH_FRAMES) -> Iterator[FrameBatch]:
    """The class of ``L`` on ``n`` worlds, in canonical order, as array batches."""
    props = L.frame_props
    for succ in r_skeletons(n):
        opts = [s_options(n, succ, w, props) for w in range(n)]
        sizes = [len(o) for o in opts]
        total = int(np.prod(sizes, dtype=object))
        succ_row = np.array(succ, dtype=np.uint32)
        for lo in range(0, total, chunk):
            hi = min(total, lo + chunk)
            idx = np.arange(lo, hi, dtype=np.int64)
            S = np.empty((hi - lo, n, n), dtype=np.uint32)
            for w in range(n - 1, -1, -1):
                S[:, w, :] = opts[w][idx % sizes[w]]
                idx //= sizes[w]
            yield FrameBatch(n, np.broadcast_to(succ_row, (hi - lo, n)), S)


def batch_frame(batch: FrameBatch, i: int) -> Frame:
    n = batch.n
    R = {(a, b) for a in range(n) for b in range(n) if int(batch.succ[i, a]) >> b & 1}
    S = {
        w: {(x, y) for x in range(n) for y in range(n) if int(batch.S[i, w, x]) >> y & 1}
        for w in range(n)
    }
    return Frame(tuple(range(n)), frozenset(R), S)


def enumerate_frames(n: int, L: Logic) -> Iterator[Frame]:
    if n < 1:
        raise ValueError("n must be at least 1")
    for batch in iter_batches(n, L):
        for i in range(len(batch)):
            yield batch_frame(batch, i)


# -- search ------------------------------------------------------------------

def choose_mode(n: int, L: Logic, nvars: int, budget: SearchBudget) -> str:
    if budget.strategy != "auto":
        return budget.strategy
    size = class_size(n, L)
    if size > AUTO_FRAME_LIMIT or n * nvars > 62:
        return "sat"
    if size * min(1 << (n * nvars), budget.max_valuations) > AUTO_WORK_LIMIT:
        return "sat"
    return "enumerate"


def _codes(n: int, k: int, budget: SearchBudget) -> tuple[np.ndarray, bool]:
    if n * k <= 62 and 1 << (n * k) <= budget.max_valuations:
        return valuation_codes(n, k), False
    rng = np.random.default_rng(budget.sampling_seed)
    bits = n * k
    if bits > 64:
        raise ValueError("valuation space too large for sampling; use the SAT strategy")
    codes = rng.integers(0, 1 << min(bits, 63), size=budget.max_valuations, dtype=np.uint64)
    if bits == 64:
        codes |= rng.integers(0, 2, size=budget.max_valuations, dtype=np.uint64) << np.uint64(63)
    return np.unique(codes), True


def _decode(frame: Frame, names: list[str], code: int) -> Model:
    n = len(frame.worlds)
    val = {p: frozenset(j for j in range(n) if code >> (i * n + j) & 1) for i, p in enumerate(names)}
    return Model(frame, val)


def search_size(n: int, L: Logic, f: Formula, budget: SearchBudget) -> tuple[Witness | None, str, int]:
    """Search frames of exactly ``n`` worlds; returns ``(witness, mode, frames covered)``."""
    names = sorted(variables(f))
    mode = choose_mode(n, L, len(names), budget)
    if mode == "sat":
        from .sat import sat_countermodel

        hit = sat_countermodel(n, L, f)
        covered = class_size(n, L)
        if hit is None:
            return None, "sat", covered
        return Witness(*hit), "sat", covered
    codes, sampled = _codes(n, len(names), budget)
    label = f"enumerate+sampled({len(codes)})" if sampled else "enumerate"
    seen = 0
    for batch in iter_batches(n, L):
        hit = first_failure(batch, f, names, codes)
        if hit is not None:
            fi, code, world = hit
            model = _decode(batch_frame(batch, fi), names, code)
            return Witness(model, world), label, seen + fi + 1
        seen += len(batch)
    return None, label, seen


def check_witness(L: Logic, f: Formula, w: Witness) -> None:
    if holds(w.model, w.world, f) or not frame_class_check(L, w.model.frame):
        raise AssertionError(f"invalid countermodel for {render(f)} over {L.name}")


def search(L: Logic, f: Formula, budget: SearchBudget) -> Report:
    """Bounded validity check of ``f`` over the class of ``L``, smallest sizes first."""
    start = time.perf_counter()
    rep = Report(Status.VERIFIED, budget.max_worlds)
    for n in range(budget.min_worlds, budget.max_worlds + 1):
        wit, mode, covered = search_size(n, L, f, budget)
        rep.modes[n] = mode
        rep.frames_checked += covered
        if wit is not None:
            check_witness(L, f, wit)
            rep.status = Status.REFUTED
            rep.witness = wit
            rep.bound = n
            break
    rep.elapsed = time.perf_counter() - start
    return rep


def find_countermodel(L: Logic, f: Formula, budget: SearchBudget) -> tuple[Model, object] | None:
    rep = search(L, f, budget)
    if rep.witness is None:
        return None
    return rep.witness.model, rep.witness.world
