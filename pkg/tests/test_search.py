import random

import pytest

from veltman.corpus import random_formula
from veltman.fixpoint import ufp_formula
from veltman.formula import parse
from veltman.logics import LOGICS, frame_class_check, lookup
from veltman.paper_models import isomorphic_to_fig2
from veltman.sat import sat_countermodel
from veltman.search import SearchBudget, class_size, enumerate_frames, find_countermodel, search
from veltman.semantics import holds

from oracles import canonical, naive_frames

# frame counts per class at 2, 3 and 4 worlds (R ordered by index), computed by
# an independent generate-and-filter script before the optimized enumerator
GOLDEN = {
    "IL-": (5, 665, 20429665),
    "IL-(J1)": (3, 109, 395505),
    "IL-(J5)": (5, 409, 2136929),
    "IL-(J1,J5)": (3, 77, 62705),
    "IL-(J4+)": (3, 59, 31569),
    "IL-(J1,J4+)": (2, 13, 943),
    "IL-(J2+)": (3, 50, 9548),
    "CL": (2, 13, 488),
    "IL-(J4+,J5)": (3, 43, 6449),
    "IL-(J1,J4+,J5)": (2, 11, 341),
    "IL-(J2+,J5)": (3, 34, 1732),
    "IL": (2, 11, 193),
}


def _props(L):
    return {p.value for p in L.closed_props}


def _encode(frames, n):
    return {(fr.R, tuple(fr.S[w] for w in range(n))) for fr in frames}


@pytest.mark.parametrize("name", list(LOGICS))
def test_class_sizes(name):
    L = lookup(name)
    assert class_size(1, L) == 1
    assert tuple(class_size(n, L) for n in (2, 3, 4)) == GOLDEN[name]


@pytest.mark.parametrize("name", list(LOGICS))
def test_enumeration_matches_naive_oracle(name):
    L = lookup(name)
    for n in (1, 2):
        ours = list(enumerate_frames(n, L))
        naive = list(naive_frames(n, _props(L)))
        assert {canonical(n, *x) for x in _encode(ours, n)} == {canonical(n, R, S) for R, S in naive}
        ordered = {(R, S) for R, S in naive if all(a > b for a, b in R)}
        assert _encode(ours, n) == ordered
        assert len(ours) == len(ordered)


@pytest.mark.parametrize("name", ["IL-(J1)", "IL-(J2+,J5)", "CL", "IL"])
def test_three_world_enumeration_matches_naive_oracle(name):
    L = lookup(name)
    ours = _encode(enumerate_frames(3, L), 3)
    assert ours == set(naive_frames(3, _props(L), ordered=True))


@pytest.mark.parametrize("name", list(LOGICS))
def test_every_frame_is_in_class(name):
    L = lookup(name)
    assert all(frame_class_check(L, fr) for fr in enumerate_frames(3, L))


def test_j5_refuted_in_bare_class():
    rep = search(lookup("IL-"), parse("<>p |> p"), SearchBudget(3))
    assert rep.refuted and rep.bound <= 3
    assert not holds(rep.witness.model, rep.witness.world, parse("<>p |> p"))


def test_ufp_refutation_is_the_two_solution_model():
    f = ufp_formula(parse("true |> ~p"), "p")
    for strategy in ("enumerate", "sat"):
        hit = find_countermodel(lookup("IL-(J1,J5)"), f, SearchBudget(3, strategy=strategy))
        assert hit is not None
        if strategy == "enumerate":
            assert isomorphic_to_fig2(hit[0])


def test_tautology_has_no_countermodel():
    for L in LOGICS.values():
        assert find_countermodel(L, parse("p -> p"), SearchBudget(3)) is None


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(0)
    with pytest.raises(ValueError):
        SearchBudget(2, strategy="guess")


def test_search_is_deterministic():
    f = parse("(p |> q) -> (q |> p)")
    a = search(lookup("IL-"), f, SearchBudget(3))
    b = search(lookup("IL-"), f, SearchBudget(3))
    assert a.witness == b.witness


def test_sampling_mode_is_reported():
    f = parse("(p |> q) & (q |> r) -> (p |> r) | s")
    rep = search(lookup("IL-(J1)"), f, SearchBudget(3, max_valuations=64, sampling_seed=5))
    assert any("sampled" in m for m in rep.modes.values())
    assert not rep.exhaustive


def test_sat_and_enumeration_agree():
    rng = random.Random(2024)
    names = ("IL-", "IL-(J1,J5)", "IL-(J4+)", "IL-(J2+,J5)", "IL")
    for _ in range(60):
        L = lookup(rng.choice(names))
        f = random_formula(rng, ("p", "q"), 3)
        for n in (2, 3):
            enum = search(L, f, SearchBudget(n, min_worlds=n, strategy="enumerate")).refuted
            hit = sat_countermodel(n, L, f)
            assert enum == (hit is not None)
            if hit is not None:
                m, w = hit
                assert not holds(m, w, f) and frame_class_check(L, m.frame)


def test_witnesses_recheck():
    rng = random.Random(99)
    for _ in range(40):
        L = rng.choice(list(LOGICS.values()))
        f = random_formula(rng, ("p", "q"), 3)
        rep = search(L, f, SearchBudget(3))
        if rep.refuted:
            assert not holds(rep.witness.model, rep.witness.world, f)
            assert frame_class_check(L, rep.witness.model.frame)
