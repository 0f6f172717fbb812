"""Acceptance criteria 1 to 8.

Each test records one PASS/FAIL line; ``conftest.py`` prints them in the
terminal summary, and running this file directly prints them as well.
"""

from __future__ import annotations

import random
import time
from itertools import combinations

import numpy as np
import pytest

from veltman.batch import FrameBatch, evaluate, frames_valid, valuation_codes
from veltman.cli import run
from veltman.corpus import random_formula
from veltman.fixpoint import ufp_check
from veltman.formula import adequate_closure, is_modalized, parse, variables
from veltman.logics import LOGICS, lookup
from veltman.paper_models import PaperFamily, build, isomorphic_to_fig2, truncation_sound, world_index
from veltman.search import SearchBudget, enumerate_frames, iter_batches
from veltman.semantics import Frame, FrameProperty, check_frame_property
from veltman.soundness import box_soundness, left_soundness, rhd_soundness
from veltman.suite import SUITE, run_suite

from oracles import canonical, closure_oracle, naive_frames

RESULTS: list[str] = []


def record(k: int, ok: bool, detail: str) -> None:
    RESULTS.append(f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'}  {detail}")


P = FrameProperty
CANONICAL = {
    P.J1: parse("[](p -> q) -> p |> q"),
    P.J4PLUS: parse("[](p -> q) -> (r |> p -> r |> q)"),
    P.J5: parse("<>p |> p"),
    P.J2PLUS: parse("(p |> (q | r)) & (q |> r) -> p |> r"),
}


# -- 1 ---------------------------------------------------------------------------

def test_criterion_1_two_solution_model(capsys):
    start = time.perf_counter()
    code = run(["paper", "--figure", "2", "--check"])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - start
    ok = code == 0 and out.count("ok") == 4 and "FAIL" not in out and elapsed < 1.0
    record(1, ok, f"4 checks, exit {code}, {elapsed:.3f}s")
    assert ok, out


# -- 2 ---------------------------------------------------------------------------

def _orders(n):
    """Transitive relations with a R b => a > b, generated independently of the package."""
    pairs = [(a, b) for a in range(n) for b in range(a)]
    for k in range(len(pairs) + 1):
        for R in combinations(pairs, k):
            R = set(R)
            if all((a, c) in R for a, b in R for b2, c in R if b == b2):
                yield frozenset(R)


def _local_configurations(n):
    """For each R, world w and S_w: the frame with that S_w and every other
    S_v set to all pairs of R-successors of v (which meets every condition)."""
    for R in _orders(n):
        full = {v: {(x, y) for x in range(n) for y in range(n) if (v, x) in R and (v, y) in R} for v in range(n)}
        for w in range(n):
            succ = [x for x in range(n) if (w, x) in R]
            allowed = [(x, y) for x in succ for y in range(n)]
            frames = []
            for bits in range(1 << len(allowed)):
                S = dict(full)
                S[w] = {allowed[i] for i in range(len(allowed)) if bits >> i & 1}
                frames.append(Frame(tuple(range(n)), R, S))
            yield w, frames


def test_criterion_2_frame_correspondence():
    start = time.perf_counter()
    mismatches, configs = 0, 0
    for n in range(1, 5):
        for w, frames in _local_configurations(n):
            batch = FrameBatch.from_frames(frames)
            for prop, inst in CANONICAL.items():
                names = sorted(variables(inst))
                truth = evaluate(batch, inst, names, valuation_codes(n, len(names)))
                semantic = ((truth >> w) & 1).all(axis=1)
                structural = np.array([check_frame_property(fr, prop) for fr in frames])
                mismatches += int((semantic != structural).sum())
                configs += len(frames)
    # global cross-check: every frame of at most 3 worlds, whole-frame validity
    frames_seen = 0
    for n in range(1, 4):
        for batch in iter_batches(n, lookup("IL-")):
            frs = [Frame(tuple(range(n)), frozenset(
                (a, b) for a in range(n) for b in range(n) if batch.succ[i, a] >> b & 1
            ), {v: {(x, y) for x in range(n) for y in range(n) if batch.S[i, v, x] >> y & 1} for v in range(n)})
                for i in range(len(batch))]
            for prop, inst in CANONICAL.items():
                semantic = frames_valid(batch, inst, sorted(variables(inst)))
                structural = np.array([check_frame_property(fr, prop) for fr in frs])
                mismatches += int((semantic != structural).sum())
            frames_seen += len(batch)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 300
    record(2, ok, f"{configs} local configurations up to 4 worlds, {frames_seen} whole frames up to 3 worlds, "
                  f"{mismatches} mismatches, {elapsed:.1f}s")
    assert ok


# -- 3 ---------------------------------------------------------------------------

def test_criterion_3_bulk_soundness():
    reports = [rhd_soundness(), left_soundness(), box_soundness()]
    ok = all(r.ok for r in reports) and all(r.candidates > 0 for r in reports)
    record(3, ok, "; ".join(f"{r} ({r.elapsed:.0f}s)" for r in reports))
    assert ok, [r.failures[:5] for r in reports]


# -- 4 ---------------------------------------------------------------------------

LEFT_MODALIZED = ["[]~p", "p |> q", "[]p |> q", "~(p |> ~q)", "([]p -> q) |> []q", "[](p |> q) -> q"]


def test_criterion_4_ufp_dichotomy():
    a = parse("true |> ~p")
    j4 = ufp_check(lookup("IL-(J4+)"), a, "p", 4)
    j15 = ufp_check(lookup("IL-(J1,J5)"), a, "p", 3, SearchBudget(3, strategy="enumerate"))
    iso = j15.refuted and isomorphic_to_fig2(j15.witness.model)
    left = []
    for text in LEFT_MODALIZED:
        f = parse(text)
        assert is_modalized(f, "p", left_only=True)
        left.append(ufp_check(lookup("IL-"), f, "p", 4))
    ok = str(j4) == "VerifiedUpTo(4)" and j15.refuted and j15.bound <= 3 and iso and all(
        str(r) == "VerifiedUpTo(4)" for r in left
    )
    record(4, ok, f"IL-(J4+): {j4}; IL-(J1,J5): {j15} at {j15.bound} worlds, isomorphic={iso}; "
                  f"left-modalized over IL-: {sum(str(r) == 'VerifiedUpTo(4)' for r in left)}/{len(left)} VerifiedUpTo(4)")
    assert ok


# -- 5 ---------------------------------------------------------------------------

@pytest.mark.parametrize("figure, depth", [(3, 2), (4, 2), (5, 3)])
def test_criterion_5_scans(capsys, figure, depth):
    start = time.perf_counter()
    code = run(["paper", "--figure", str(figure), "--scan", "--depth", str(depth), "--n", "10"])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - start
    ok = code == 0 and " 0 survivors" in out and elapsed < 600
    record(5, ok, f"figure {figure}: {out.splitlines()[0]}")
    assert ok, out


# -- 6 ---------------------------------------------------------------------------

def test_criterion_6_suite():
    start = time.perf_counter()
    results = run_suite(None, SearchBudget(3))
    elapsed = time.perf_counter() - start
    failed = [r.name for r in results if not r.passed]
    negatives_small = all(
        len(r.witness[1].model.frame.worlds) <= 3 for r in results if r.expected == "HasCountermodel"
    )
    ok = not failed and negatives_small and len(results) == len(SUITE) and elapsed < 900
    record(6, ok, f"{len(results) - len(failed)}/{len(results)} entries pass at 3 worlds, {elapsed:.1f}s")
    for r in results:
        RESULTS.append("    " + r.line())
    assert ok, failed


# -- 7 ---------------------------------------------------------------------------

def test_criterion_7_oracles():
    bad = []
    for name, L in LOGICS.items():
        props = {x.value for x in L.closed_props}
        for n in (1, 2):
            ours = {canonical(n, fr.R, tuple(fr.S[w] for w in range(n))) for fr in enumerate_frames(n, L)}
            naive = {canonical(n, R, S) for R, S in naive_frames(n, props)}
            if ours != naive:
                bad.append((name, n))
    xs = {parse("p |> q")}
    closure_ok = adequate_closure(xs) == closure_oracle(xs)
    ok = not bad and closure_ok
    record(7, ok, f"enumeration vs naive oracle: {24 - len(bad)}/24 agree; closure of {{p |> q}}: "
                  f"{len(adequate_closure(xs))} formulas, oracle agrees={closure_ok}")
    assert ok, bad


# -- 8 ---------------------------------------------------------------------------

def test_criterion_8_truncation():
    N = 8
    violations, cases = 0, 0
    for fam, names in ((PaperFamily.FIG3_CL, ("q",)), (PaperFamily.FIG4_J1J5, ("q",)), (PaperFamily.FIG5_FPP, ())):
        rng = random.Random(fam.value)
        worlds = [w for w in build(fam, N).frame.worlds if (world_index(fam, w) or 0) <= N - 1]
        for _ in range(100):
            f = random_formula(rng, names, 3)
            w = rng.choice(worlds)
            cases += 1
            violations += not truncation_sound(fam, f, w, N)
    ok = violations == 0 and cases == 300
    record(8, ok, f"{cases} cases over three families, {violations} violations")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
