"""Bulk verification of the primitive fixed-point constructions over a corpus.

For a fixed frame class and world count ``n``, every corpus formula gets a
profile: its truth mask on every frame under every valuation of ``p`` and
``q``.  The truth of ``A(F)`` is then a table lookup in the profile of ``A``
at the valuation that sends ``p`` to the truth set of ``F``, so all pairs
``(A, B)`` are checked with array operations.

Only frames of exactly ``n`` worlds are needed: a smaller frame of the class
becomes an ``n``-world frame of the class by adding R-isolated worlds, which
changes no truth value at the old worlds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .batch import FrameBatch
from .corpus import BatchAlgebra, Entry, _np_box, _np_rhd, semantic_corpus, syntactic_formulas
from .fixpoint import fp_primitive_box, fixed_point_equation
from .formula import BOT, Box, Formula, Var, is_modalized, render, variables
from .logics import Logic, lookup
from .search import iter_batches

NAMES = ("p", "q")


@dataclass
class SoundnessReport:
    construction: str
    logic: str
    max_worlds: int
    candidates: int = 0
    frames: int = 0
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} failures"
        return (
            f"{self.construction} over {self.logic} up to {self.max_worlds} worlds: "
            f"{self.candidates} candidates, {self.frames} frames, {status}"
        )


def class_batch(n: int, L: Logic) -> FrameBatch:
    parts = list(iter_batches(n, L, chunk=1 << 22))
    succ = np.concatenate([np.asarray(b.succ) for b in parts])
    S = np.concatenate([b.S for b in parts])
    return FrameBatch(n, succ, S)


def _mask_dtype(n: int):
    return np.uint8 if n <= 8 else np.uint32


def _profiles(entries: list[Entry], n: int) -> np.ndarray:
    return np.stack([e.profile[0] for e in entries]).astype(_mask_dtype(n))


def _gather(table: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """``table`` is (F, V); ``idx`` is (F, ...) of valuation codes."""
    flat = idx.reshape(idx.shape[0], -1)
    return np.take_along_axis(table, flat, axis=1).reshape(idx.shape)


def _q_codes(n: int) -> np.ndarray:
    """Valuation codes with p empty and q ranging over all subsets."""
    return (np.arange(1 << n, dtype=np.intp) << n)[None, :]


def rhd_soundness(
    L: Logic | None = None, n: int = 4, max_depth: int = 2, corpus: list[Entry] | None = None
) -> SoundnessReport:
    """``A(true) |> B([]~A(true))`` against ``A(p) |> B(p)`` for all corpus pairs."""
    L = L or lookup("IL-(J2+,J5)")
    start = time.perf_counter()
    batch = class_batch(n, L)
    if corpus is None:
        corpus = semantic_corpus([BOT, Var("p"), Var("q")], max_depth, BatchAlgebra([batch], NAMES))
    rep = SoundnessReport("rhd", L.name, n, candidates=len(corpus) ** 2, frames=len(batch))
    F, K = len(batch), len(corpus)
    PA_all = _profiles(corpus, n)
    PB = PA_all.transpose(1, 0, 2)  # (F, K, V)
    full = (1 << n) - 1
    qs = _q_codes(n)
    Q = qs.shape[1]
    for ea, PA in zip(corpus, PA_all):
        a_top = _gather(PA, np.broadcast_to(full | qs, (F, Q)))
        x1 = _np_box(batch, ~a_top)
        idx1 = np.broadcast_to((x1.astype(np.intp) | qs)[:, None, :], (F, K, Q))
        b_sub = np.take_along_axis(PB, idx1, axis=2)
        fm = _np_rhd(batch, np.broadcast_to(a_top[:, None, :], b_sub.shape), b_sub)
        idx2 = fm.astype(np.intp) | qs[:, None, :]
        af = _gather(PA, idx2)
        bf = np.take_along_axis(PB, idx2, axis=2)
        rhs = _np_rhd(batch, af, bf)
        bad = (fm != rhs).any(axis=(0, 2))
        for k in np.flatnonzero(bad):
            rep.failures.append(f"A={render(ea.formula)} B={render(corpus[k].formula)}")
    rep.elapsed = time.perf_counter() - start
    return rep


def left_soundness(L: Logic | None = None, n: int = 4, max_depth: int = 2) -> SoundnessReport:
    """``A([]~A(true)) |> B`` against ``A(p) |> B`` for left-modalized corpus pairs."""
    L = L or lookup("IL-(J4+,J5)")
    start = time.perf_counter()
    batch = class_batch(n, L)
    corpus = semantic_corpus(
        [BOT, Var("p"), Var("q")], max_depth, BatchAlgebra([batch], NAMES), left_var="p"
    )
    bs = [e for e in corpus if "p" not in variables(e.formula)]
    rep = SoundnessReport("left", L.name, n, candidates=len(corpus) * len(bs), frames=len(batch))
    F = len(batch)
    full = (1 << n) - 1
    qs = _q_codes(n)
    Q = qs.shape[1]
    PB = _profiles(bs, n).transpose(1, 0, 2)
    bq = np.take_along_axis(PB, np.broadcast_to(qs[:, None, :], (F, len(bs), Q)), axis=2)
    for ea, PA in zip(corpus, _profiles(corpus, n)):
        a_top = _gather(PA, np.broadcast_to(full | qs, (F, Q)))
        x1 = _np_box(batch, ~a_top)
        ax = _gather(PA, x1.astype(np.intp) | qs)
        fm = _np_rhd(batch, np.broadcast_to(ax[:, None, :], bq.shape), bq)
        af = _gather(PA, fm.astype(np.intp) | qs[:, None, :])
        rhs = _np_rhd(batch, af, bq)
        bad = (fm != rhs).any(axis=(0, 2))
        for k in np.flatnonzero(bad):
            rep.failures.append(f"A={render(ea.formula)} B={render(bs[k].formula)}")
    rep.elapsed = time.perf_counter() - start
    return rep


def box_candidates(max_depth: int = 2) -> list[Formula]:
    """Syntactically distinct ``A`` over {p, q} with ``[]A`` left-modalized in p."""
    seen: dict[Formula, None] = {}
    for a in syntactic_formulas([BOT, Var("p"), Var("q")], max_depth):
        if is_modalized(Box(a), "p", left_only=True):
            seen.setdefault(a)
    return list(seen)


def box_soundness(L: Logic | None = None, n: int = 4, max_depth: int = 2) -> SoundnessReport:
    """``[]A(true)`` against ``[]A(p)``, one SAT call per candidate at ``n`` worlds."""
    from .sat import sat_countermodel
    from .search import class_size

    L = L or lookup("IL-")
    start = time.perf_counter()
    cands = box_candidates(max_depth)
    rep = SoundnessReport("box", L.name, n, candidates=len(cands), frames=class_size(n, L))
    for a in cands:
        f = fp_primitive_box(a, "p")
        if sat_countermodel(n, L, fixed_point_equation(Box(a), "p", f)) is not None:
            rep.failures.append(f"A={render(a)}")
    rep.elapsed = time.perf_counter() - start
    return rep
