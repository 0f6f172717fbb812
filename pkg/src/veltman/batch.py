"""Vectorised evaluation of one formula over many frames and valuations.

Truth values are world bitmasks stored in arrays of shape
``(frames, valuations)``.  A valuation is an integer code whose bit
``i * n + j`` says whether the ``i``-th variable holds at world ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .formula import Bot, Box, Formula, Imp, Rhd, Var

# elements per (frames x valuations) array before chunking kicks in
CHUNK_ELEMENTS = 1 << 20


@dataclass
class FrameBatch:
    """``succ[f, w]``: R-successor mask; ``S[f, w, x]``: mask of y with x S_w y."""

    n: int
    succ: np.ndarray
    S: np.ndarray

    def __len__(self) -> int:
        return self.succ.shape[0]

    @classmethod
    def from_frames(cls, frames: Sequence) -> "FrameBatch":
        n = len(frames[0].worlds)
        succ = np.array([fr.succ_masks for fr in frames], dtype=np.uint32)
        S = np.array([fr.s_masks for fr in frames], dtype=np.uint32).reshape(len(frames), n, n)
        return cls(n, succ, S)

    def slice(self, lo: int, hi: int) -> "FrameBatch":
        return FrameBatch(self.n, self.succ[lo:hi], self.S[lo:hi])


def valuation_codes(n: int, k: int) -> np.ndarray:
    return np.arange(1 << (n * k), dtype=np.uint64)


def evaluate(batch: FrameBatch, f: Formula, names: Sequence[str], codes: np.ndarray) -> np.ndarray:
    """Truth masks of ``f``: array of shape ``(len(batch), len(codes))``."""
    n = batch.n
    full = np.uint32((1 << n) - 1)
    F, V = len(batch), len(codes)
    pos = {p: i for i, p in enumerate(names)}
    succ = batch.succ
    S = batch.S
    memo: dict[Formula, np.ndarray] = {}

    def go(g: Formula) -> np.ndarray:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Bot):
            out = np.zeros((F, V), dtype=np.uint32)
        elif isinstance(g, Var):
            if g.name not in pos:
                out = np.zeros((F, V), dtype=np.uint32)
            else:
                shift = np.uint64(pos[g.name] * n)
                row = ((codes >> shift) & np.uint64(full)).astype(np.uint32)
                out = np.broadcast_to(row, (F, V))
        elif isinstance(g, Imp):
            out = (~go(g.lhs) | go(g.rhs)) & full
        elif isinstance(g, Box):
            a = go(g.arg)
            out = np.zeros((F, V), dtype=np.uint32)
            for w in range(n):
                ok = (succ[:, w, None] & ~a) == 0
                out |= ok.astype(np.uint32) << np.uint32(w)
        elif isinstance(g, Rhd):
            a, b = go(g.lhs), go(g.rhs)
            out = np.zeros((F, V), dtype=np.uint32)
            for w in range(n):
                ok = np.ones((F, V), dtype=bool)
                for x in range(n):
                    in_succ = ((succ[:, w] >> np.uint32(x)) & 1).astype(bool)
                    if not in_succ.any():
                        continue
                    ax = ((a >> np.uint32(x)) & 1).astype(bool) & in_succ[:, None]
                    reach = (S[:, w, x, None] & b) != 0
                    ok &= ~ax | reach
                out |= ok.astype(np.uint32) << np.uint32(w)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return go(f)


def first_failure(
    batch: FrameBatch,
    f: Formula,
    names: Sequence[str],
    codes: np.ndarray | None = None,
) -> tuple[int, int, int] | None:
    """First ``(frame index, valuation code, world)`` refuting ``f``.

    Frames are scanned in batch order, valuations in ``codes`` order and
    worlds by index.
    """
    n = batch.n
    if codes is None:
        codes = valuation_codes(n, len(names))
    full = (1 << n) - 1
    step = max(1, CHUNK_ELEMENTS // max(1, len(codes)))
    vstep = min(len(codes), CHUNK_ELEMENTS)
    for lo in range(0, len(batch), step):
        sub = batch.slice(lo, lo + step)
        for vlo in range(0, len(codes), vstep):
            cs = codes[vlo:vlo + vstep]
            res = evaluate(sub, f, names, cs)
            bad = res != full
            if bad.any():
                fi, vi = np.argwhere(bad)[0]
                mask = int(res[fi, vi])
                world = next(w for w in range(n) if not mask >> w & 1)
                return lo + int(fi), int(cs[vi]), world
    return None


def frames_valid(batch: FrameBatch, f: Formula, names: Sequence[str]) -> np.ndarray:
    """Boolean array: is ``f`` valid on each frame of the batch."""
    n = batch.n
    codes = valuation_codes(n, len(names))
    full = (1 << n) - 1
    out = np.ones(len(batch), dtype=bool)
    step = max(1, CHUNK_ELEMENTS // max(1, len(codes)))
    vstep = min(len(codes), CHUNK_ELEMENTS)
    for lo in range(0, len(batch), step):
        sub = batch.slice(lo, lo + step)
        for vlo in range(0, len(codes), vstep):
            res = evaluate(sub, f, names, codes[vlo:vlo + vstep])
            out[lo:lo + step] &= (res == full).all(axis=1)
    return out
