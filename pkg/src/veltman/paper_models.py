"""Four counter-model constructions and the checks built on them.

* ``FIG2_UFP``: a 3-world model where two distinct solutions of
  ``p <-> (true |> ~p)`` coexist, so uniqueness of fixed points fails.
* ``FIG3_CL``, ``FIG4_J1J5``, ``FIG5_FPP``: truncations at index ``N`` of
  infinite frames on which ``A <-> A |> q`` (resp. ``A <-> true |> ~A``) fails
  for every candidate ``A``.

In the three infinite families every R and S edge goes from a world of index
``i`` to worlds of smaller index (or to the R-isolated world ``v``), so truth
at a world of index ``<= N`` is the same on every truncation that contains it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .corpus import ModelAlgebra, semantic_corpus, syntactic_count
from .formula import BOT, TOP, Formula, Rhd, Var, boxdot, conj, iff, neg, parse
from .logics import frame_class_check, lookup
from .search import enumerate_frames
from .semantics import Frame, Model, holds, truth_masks


class PaperFamily(Enum):
    FIG2_UFP = 2
    FIG3_CL = 3
    FIG4_J1J5 = 4
    FIG5_FPP = 5


def family(k: int | str | PaperFamily) -> PaperFamily:
    if isinstance(k, PaperFamily):
        return k
    try:
        return PaperFamily(int(k))
    except ValueError:
        raise ValueError(f"unknown figure {k!r}; choose 2, 3, 4 or 5") from None


def _fig2() -> Model:
    fr = Frame(("w", "x", "y"), frozenset({("w", "x")}), {"w": {("x", "x"), ("x", "y")}})
    return Model(fr, {"p": {"w", "x"}, "q": {"x", "y"}})


def _fig3(N: int) -> Model:
    names = [(f"{c}{i}", i) for i in range(N + 1) for c in "xy"]
    worlds = tuple(w for w, _ in names)
    idx = dict(names)
    R = {(a, b) for a in worlds for b in worlds if idx[a] > idx[b]}
    S = {}
    for w in worlds:
        i = idx[w]
        rel = {(a, a) for a in worlds if idx[a] < i}
        for k in range(0, i - 1, 2):
            rel |= {(f"x{k}", f"x{k + 1}"), (f"y{k}", f"x{k + 1}")}
        S[w] = rel
    return Model(Frame(worlds, frozenset(R), S), {"q": {f"x{i}" for i in range(N + 1)}})


def _fig4(N: int) -> Model:
    nums = list(range(N + 1))
    worlds = tuple(str(i) for i in nums) + ("v",)
    R = {(str(x), str(y)) for x in nums for y in nums if x > y}
    S = {"v": set()}
    for n in nums:
        rel = set()
        for x in range(n):
            for y in nums:
                if y == x or x > y:
                    rel.add((str(x), str(y)))
            if x % 2 == 0 and x < n - 1:
                rel.add((str(x), "v"))
        S[str(n)] = rel
    return Model(Frame(worlds, frozenset(R), S), {"q": {"v"}})


def _fig5(N: int) -> Model:
    nums = list(range(N + 1))
    worlds = tuple(str(i) for i in nums)
    R = {(str(x), str(y)) for x in nums for y in nums if x > y}
    S = {}
    for n in nums:
        S[str(n)] = {
            (str(x), str(y))
            for x in range(n)
            for y in range(n)
            if x >= y or (x == 0 and (y % 2 == 0 or y == n - 1))
        }
    return Model(Frame(worlds, frozenset(R), S), {})


def build(fam: PaperFamily | int, N: int = 4) -> Model:
    fam = family(fam)
    if fam is PaperFamily.FIG2_UFP:
        return _fig2()
    if N < 1:
        raise ValueError("truncation index must be at least 1")
    return {PaperFamily.FIG3_CL: _fig3, PaperFamily.FIG4_J1J5: _fig4, PaperFamily.FIG5_FPP: _fig5}[fam](N)


def world_index(fam: PaperFamily | int, w: str) -> int | None:
    """Index of a world of a truncated family; ``None`` for ``v``."""
    fam = family(fam)
    if w == "v":
        return None
    return int(w[1:]) if fam is PaperFamily.FIG3_CL else int(w)


def truncation_sound(fam: PaperFamily | int, f: Formula, w: str, N: int) -> bool:
    """Truth of ``f`` at ``w`` agrees between truncations ``N`` and ``N + 1``."""
    return holds(build(fam, N), w, f) == holds(build(fam, N + 1), w, f)


# -- two-solution model -------------------------------------------------------

FIG2_SOLUTION_P = iff(Var("p"), parse("true |> ~p"))
FIG2_SOLUTION_Q = iff(Var("q"), parse("true |> ~q"))


@dataclass
class CheckLine:
    label: str
    ok: bool


def fig2_check() -> list[CheckLine]:
    """Frame conditions J1 and J5 and the three conjuncts at world ``w``."""
    m = build(PaperFamily.FIG2_UFP)
    return [
        CheckLine("frame is in IL-(J1,J5)", frame_class_check(lookup("IL-(J1,J5)"), m.frame)),
        CheckLine("w forces boxdot(p <-> true |> ~p)", holds(m, "w", boxdot(FIG2_SOLUTION_P))),
        CheckLine("w forces boxdot(q <-> true |> ~q)", holds(m, "w", boxdot(FIG2_SOLUTION_Q))),
        CheckLine("w forces ~(p <-> q)", holds(m, "w", neg(iff(Var("p"), Var("q"))))),
    ]


def fig2_formula() -> Formula:
    return conj(conj(boxdot(FIG2_SOLUTION_P), boxdot(FIG2_SOLUTION_Q)), neg(iff(Var("p"), Var("q"))))


def isomorphic_to_fig2(m: Model, allow_swap: bool = True) -> bool:
    """Is ``m`` isomorphic to the two-solution model (optionally up to swapping p, q)?"""
    from itertools import permutations

    ref = build(PaperFamily.FIG2_UFP)
    if len(m.frame.worlds) != 3:
        return False
    swaps = [{"p": "p", "q": "q"}] + ([{"p": "q", "q": "p"}] if allow_swap else [])
    for perm in permutations(m.frame.worlds):
        h = dict(zip(ref.frame.worlds, perm))
        R = {(h[a], h[b]) for a, b in ref.frame.R}
        if R != set(m.frame.R):
            continue
        if any({(h[x], h[y]) for x, y in ref.frame.S[w]} != set(m.frame.S[h[w]]) for w in ref.frame.worlds):
            continue
        for sw in swaps:
            if all(
                {h[x] for x in ref.valuation.get(p, ())} == set(m.valuation.get(sw[p], ()))
                for p in ("p", "q")
            ):
                return True
    return False


# -- scans ---------------------------------------------------------------------

SHAPES = {
    PaperFamily.FIG3_CL: ("A_rhd_q", ("q",), "CL"),
    PaperFamily.FIG4_J1J5: ("A_rhd_q", ("q",), "IL-(J1,J5)"),
    PaperFamily.FIG5_FPP: ("top_rhd_notA", (), "IL-(J1,J4+,J5)"),
}


def shape_formula(shape: str, a: Formula) -> Formula:
    if shape == "A_rhd_q":
        return Rhd(a, Var("q"))
    if shape == "top_rhd_notA":
        return Rhd(TOP, neg(a))
    raise ValueError(f"unknown shape {shape!r}")


def probe_models(fam: PaperFamily, N: int) -> list[Model]:
    """The scan model itself, ``build(fam, 4)`` and every model of at most 2
    worlds in the family's logic class over the family's variables."""
    _, names, logic = SHAPES[fam]
    L = lookup(logic)
    out = [build(fam, N), build(fam, 4)]
    for n in (1, 2):
        for fr in enumerate_frames(n, L):
            for code in range(1 << (n * len(names))):
                val = {
                    p: frozenset(j for j in range(n) if code >> (i * n + j) & 1)
                    for i, p in enumerate(names)
                }
                out.append(Model(fr, val))
    return out


@dataclass
class Candidate:
    formula: Formula
    failing_worlds: list[str]
    stable: bool


@dataclass
class ScanReport:
    figure: int
    shape: str
    N: int
    max_depth: int
    candidates: list[Candidate] = field(default_factory=list)
    formulas_covered: int = 0
    elapsed: float = 0.0

    @property
    def survivors(self) -> list[Candidate]:
        return [c for c in self.candidates if not c.failing_worlds]

    @property
    def unstable(self) -> list[Candidate]:
        return [c for c in self.candidates if not c.stable]

    @property
    def ok(self) -> bool:
        return bool(self.candidates) and not self.survivors


def _stable(fam: PaperFamily, m: Model, mask: int, N: int) -> bool:
    lo = N // 2
    groups = [[]] if fam is not PaperFamily.FIG3_CL else [[], []]
    for i, w in enumerate(m.frame.worlds):
        k = world_index(fam, w)
        if k is None or not lo <= k <= N - 1:
            continue
        g = 0 if fam is not PaperFamily.FIG3_CL else "xy".index(w[0])
        groups[g].append(mask >> i & 1)
    return all(len(set(g)) <= 1 for g in groups)


def no_fixed_point_scan(fam: PaperFamily | int, shape: str | None, N: int, max_depth: int) -> ScanReport:
    """Check the fixed-point biconditional against every corpus candidate.

    Each candidate must fail at some world of index at most ``N - 1``.
    """
    fam = family(fam)
    if fam not in SHAPES:
        raise ValueError("scans are defined for figures 3, 4 and 5")
    want, names, _ = SHAPES[fam]
    shape = shape or want
    if shape != want:
        raise ValueError(f"figure {fam.value} pairs with shape {want}, not {shape}")
    if N < 3:
        raise ValueError("N must be at least 3 to leave a stability margin")
    start = time.perf_counter()
    probes = probe_models(fam, N)
    algebra = ModelAlgebra(probes)
    corpus = semantic_corpus([BOT] + [Var(p) for p in names], max_depth, algebra)
    m = probes[0]
    rep = ScanReport(fam.value, shape, N, max_depth, formulas_covered=syntactic_count(1 + len(names), max_depth))
    for e in corpus:
        target = iff(e.formula, shape_formula(shape, e.formula))
        mask = truth_masks(m, target)
        failing = [
            w
            for i, w in enumerate(m.frame.worlds)
            if not mask >> i & 1 and (world_index(fam, w) is not None and world_index(fam, w) <= N - 1)
        ]
        stable = _stable(fam, m, e.profile[0], N)
        rep.candidates.append(Candidate(e.formula, failing, stable))
    rep.elapsed = time.perf_counter() - start
    return rep
