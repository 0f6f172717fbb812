import random

import pytest

from veltman.corpus import random_formula
from veltman.formula import BOT, Box, Var, boxdot, conj, iff, neg, parse, subformulas
from veltman.logics import axiom_instance
from veltman.paper_models import PaperFamily, build, fig2_formula
from veltman.semantics import (
    Frame,
    FrameError,
    FrameProperty,
    Model,
    check_frame_property,
    generated_submodel,
    holds,
    truth_set,
    valid_in_frame,
    valid_in_model,
)

from oracles import naive_holds

P = FrameProperty


def fig2():
    return build(PaperFamily.FIG2_UFP)


def test_forcing_on_two_solution_model():
    m = fig2()
    assert holds(m, "w", parse("true |> ~p"))
    assert not holds(m, "w", parse("true |> ~q"))
    assert not holds(m, "x", BOT)


def test_unknown_world_raises():
    with pytest.raises(FrameError):
        holds(fig2(), "nowhere", Var("p"))


def test_valid_in_model_examples():
    m = fig2()
    assert valid_in_model(m, parse("p -> p"))
    ufp = parse("(p <-> true |> ~p) & [](p <-> true |> ~p) & (q <-> true |> ~q) & [](q <-> true |> ~q) -> (p <-> q)")
    assert not valid_in_model(m, ufp)
    assert "w" not in truth_set(m, ufp)
    single = Model(Frame(("a",), frozenset()), {})
    assert valid_in_model(single, Box(BOT))


def test_valid_in_frame_examples():
    assert valid_in_frame(fig2().frame, axiom_instance("J5", [Var("p")]))
    assert valid_in_frame(fig2().frame, parse("false -> p"))
    j4plus = parse("[](p -> q) -> (r |> p -> r |> q)")
    assert not valid_in_frame(build(PaperFamily.FIG4_J1J5, 3).frame, j4plus)


def test_frame_properties_examples():
    f2 = fig2().frame
    assert check_frame_property(f2, P.J1) and check_frame_property(f2, P.J5)
    f5 = build(PaperFamily.FIG5_FPP, 4).frame
    assert all(check_frame_property(f5, x) for x in (P.J1, P.J4PLUS, P.J5))
    assert not check_frame_property(build(PaperFamily.FIG4_J1J5, 4).frame, P.J4PLUS)


@pytest.mark.parametrize(
    "R, S, msg",
    [
        ({("a", "a")}, {}, "irreflexive"),
        ({("a", "b"), ("b", "c")}, {}, "transitive"),
        ({("a", "b")}, {"b": {("a", "a")}}, "fails"),
        ({("a", "z")}, {}, "unknown"),
    ],
)
def test_frame_invariants(R, S, msg):
    with pytest.raises(FrameError, match=msg):
        Frame(("a", "b", "c"), frozenset(R), S)


def test_model_rejects_unknown_valuation_world():
    with pytest.raises(FrameError):
        Model(Frame(("a",), frozenset()), {"p": {"b"}})


def _random_model(rng, n):
    R = {(a, b) for a in range(n) for b in range(a) if rng.random() < 0.5}
    R = {(a, c) for a in range(n) for c in range(n) if (a, c) in R or any((a, b) in R and (b, c) in R for b in range(n))}
    while True:
        closed = R | {(a, c) for a, b in R for b2, c in R if b == b2}
        if closed == R:
            break
        R = closed
    S = {w: {(x, y) for x in range(n) if (w, x) in R for y in range(n) if rng.random() < 0.3} for w in range(n)}
    val = {v: {w for w in range(n) if rng.random() < 0.5} for v in "pqr"}
    return Model(Frame(tuple(range(n)), frozenset(R), S), val), R, S, val


def test_holds_matches_naive_forcing():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 5)
        m, R, S, val = _random_model(rng, n)
        f = random_formula(rng, ("p", "q", "r"), 4)
        for w in range(n):
            assert holds(m, w, f) == naive_holds(range(n), R, S, val, w, f)


def test_locality_unreachable_worlds_do_not_matter():
    rng = random.Random(11)
    for _ in range(100):
        m, R, S, _ = _random_model(rng, 5)
        w = rng.randrange(5)
        reach, todo = {w}, [w]
        edges = set(R) | {e for rel in S.values() for e in rel}
        while todo:
            a = todo.pop()
            for x, y in edges:
                if x == a and y not in reach:
                    reach.add(y)
                    todo.append(y)
        small = Model(m.frame.restrict(reach), {p: xs & reach for p, xs in m.valuation.items()})
        f = random_formula(rng, ("p", "q"), 3)
        assert holds(m, w, f) == holds(small, w, f)


def test_generated_submodel_leaf():
    sub = generated_submodel(build(PaperFamily.FIG5_FPP, 4), "0")
    assert sub.frame.worlds == ("0",)


def test_generated_submodel_truncation():
    m = build(PaperFamily.FIG3_CL, 4)
    sub = generated_submodel(m, "x3")
    expected = {f"{c}{i}" for i in range(3) for c in "xy"} | {"x3"}
    assert set(sub.frame.worlds) == expected


def test_generated_submodel_preserves_truth():
    rng = random.Random(3)
    m = build(PaperFamily.FIG3_CL, 5)
    sub = generated_submodel(m, "y4")
    for _ in range(30):
        f = random_formula(rng, ("q",), 3)
        for g in subformulas(f):
            for x in sub.frame.worlds:
                assert holds(m, x, g) == holds(sub, x, g)


def test_generated_submodel_requires_j4plus():
    with pytest.raises(FrameError):
        generated_submodel(build(PaperFamily.FIG4_J1J5, 3), "3")


def test_two_solution_conjunction_holds_at_w():
    assert holds(fig2(), "w", fig2_formula())
    assert holds(fig2(), "w", conj(boxdot(iff(Var("p"), parse("true |> ~p"))), neg(iff(Var("p"), Var("q")))))
