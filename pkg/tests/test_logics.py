import pytest

from veltman.formula import BOT, TOP, Imp, Rhd, Var, boxdot, conj, parse
from veltman.logics import (
    LOGICS,
    SCHEMATA,
    UnknownLogic,
    axiom_instance,
    embed_il,
    extends,
    frame_class_check,
    lookup,
)
from veltman.paper_models import PaperFamily, build
from veltman.search import SearchBudget, enumerate_frames, search
from veltman.semantics import Frame, FrameProperty

P = FrameProperty
p, q, r = Var("p"), Var("q"), Var("r")


def test_twelve_logics():
    assert len(LOGICS) == 12


def test_lookup_examples():
    assert lookup("CL").frame_props == {P.J1, P.J2PLUS}
    assert lookup("IL-").frame_props == {P.BASE}
    assert lookup("IL").frame_props == {P.J1, P.J2PLUS, P.J5}
    assert lookup("IL⁻(J1, J5)") is lookup("IL-(J1,J5)")


def test_lookup_unknown():
    with pytest.raises(UnknownLogic):
        lookup("IL-(J2,J5)")


def test_frame_class_examples():
    assert frame_class_check(lookup("IL-(J1,J5)"), build(PaperFamily.FIG2_UFP).frame)
    assert frame_class_check(lookup("IL"), Frame(("a",), frozenset()))
    assert not frame_class_check(lookup("CL"), build(PaperFamily.FIG4_J1J5, 4).frame)


def test_extends_examples():
    assert extends(lookup("IL-"), lookup("IL"))
    assert extends(lookup("IL-(J2+)"), lookup("CL"))
    assert not extends(lookup("IL-(J5)"), lookup("IL-(J4+)"))
    assert not extends(lookup("IL-(J4+)"), lookup("IL-(J5)"))


# covering pairs of the lattice (lower, upper)
HASSE = {
    ("IL-", "IL-(J1)"), ("IL-", "IL-(J5)"), ("IL-", "IL-(J4+)"),
    ("IL-(J1)", "IL-(J1,J5)"), ("IL-(J5)", "IL-(J1,J5)"),
    ("IL-(J1)", "IL-(J1,J4+)"), ("IL-(J4+)", "IL-(J1,J4+)"),
    ("IL-(J4+)", "IL-(J2+)"), ("IL-(J4+)", "IL-(J4+,J5)"), ("IL-(J5)", "IL-(J4+,J5)"),
    ("IL-(J1,J4+)", "CL"), ("IL-(J2+)", "CL"),
    ("IL-(J1,J4+)", "IL-(J1,J4+,J5)"), ("IL-(J1,J5)", "IL-(J1,J4+,J5)"), ("IL-(J4+,J5)", "IL-(J1,J4+,J5)"),
    ("IL-(J2+)", "IL-(J2+,J5)"), ("IL-(J4+,J5)", "IL-(J2+,J5)"),
    ("CL", "IL"), ("IL-(J1,J4+,J5)", "IL"), ("IL-(J2+,J5)", "IL"),
}


def test_extends_is_transitive_closure_of_hasse_diagram():
    names = list(LOGICS)
    reach = {(a, a) for a in names} | set(HASSE)
    changed = True
    while changed:
        changed = False
        for a, b in list(reach):
            for c, d in list(reach):
                if b == c and (a, d) not in reach:
                    reach.add((a, d))
                    changed = True
    for a in names:
        for b in names:
            assert extends(lookup(a), lookup(b)) == ((a, b) in reach), (a, b)


def test_frame_classes_are_monotone():
    for n in (2, 3):
        frames = list(enumerate_frames(n, lookup("IL-")))
        for a in LOGICS.values():
            for b in LOGICS.values():
                if extends(a, b):
                    assert all(frame_class_check(a, fr) for fr in frames if frame_class_check(b, fr))


def test_axiom_instance_examples():
    assert axiom_instance("J5", [p]) == parse("<>p |> p")
    assert axiom_instance("J6", [p]) == parse("[]p <-> ~p |> false")
    assert axiom_instance("J3", [p, q, r]) == parse("(p |> r) & (q |> r) -> (p | q) |> r")
    assert axiom_instance("J2+", [p, q, r]) == parse("(p |> (q | r)) & (q |> r) -> p |> r")


def test_axiom_instance_errors():
    with pytest.raises(ValueError):
        axiom_instance("J5", [p, q])
    with pytest.raises(KeyError):
        axiom_instance("J9", [p])


@pytest.mark.parametrize("logic", list(LOGICS))
def test_schema_instances_valid_on_class(logic):
    L = lookup(logic)
    atoms = [p, q, r]
    for schema in sorted(L.schemata):
        f = axiom_instance(schema, atoms[: SCHEMATA[schema][0]])
        assert not search(L, f, SearchBudget(4)).refuted, schema


def test_embed_il_examples():
    assert embed_il(Rhd(p, p)) == Imp(boxdot(Rhd(p, p)), Rhd(p, p))
    assert embed_il(BOT) == Imp(boxdot(TOP), BOT)
    assert embed_il(Rhd(p, q)) == Imp(boxdot(conj(Rhd(p, p), Rhd(q, q))), Rhd(p, q))
