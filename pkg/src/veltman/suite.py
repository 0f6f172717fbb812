"""A suite of semantic facts checked by bounded search.

Each entry is a template over metavariables.  Plain metavariables stand for
arbitrary formulas; context metavariables stand for formulas ``C(p)`` with
the hole ``p``.  Frame validity is closed under uniform substitution, so the
instance with distinct variables for plain metavariables already decides a
schema without contexts; sampled instances add coverage for contexts.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .batch import frames_valid
from .corpus import random_formula
from .fixpoint import ufp_formula
from .formula import (
    TOP,
    Box,
    Formula,
    Imp,
    Rhd,
    Var,
    boxdot,
    conj,
    dia,
    disj,
    iff,
    is_modalized,
    neg,
    parse,
    substitute,
    variables,
)
from .logics import axiom_instance, embed_il, lookup
from .search import SearchBudget, iter_batches, search

HOLE = "p"
ATOMS = ("p", "q", "r", "s")


def _sub(c: Formula, x: Formula) -> Formula:
    return substitute(c, HOLE, x)


def _boxneg(x: Formula) -> Formula:
    return Box(neg(x))


def _bottom_part(a: Formula) -> Formula:
    return conj(a, _boxneg(a))


# -- templates -----------------------------------------------------------------

def _j2_and_j4plus(a, b, c):
    return conj(axiom_instance("J2", [a, b, c]), axiom_instance("J4plus", [a, b, c]))


def _l3(a, c):
    top = _sub(a, TOP)
    inner = _sub(a, Rhd(top, c))
    return iff(_bottom_part(top), _bottom_part(inner))


def _l4(a, c, d):
    top = _sub(a, TOP)
    return iff(Rhd(top, d), Rhd(_sub(a, Rhd(top, c)), d))


def _l5(b, c):
    base = _sub(b, _boxneg(c))
    inner = _sub(b, Rhd(c, base))
    return iff(_bottom_part(base), _bottom_part(inner))


def _l6(b, c, d):
    base = _sub(b, _boxneg(c))
    return iff(Rhd(d, base), Rhd(d, _sub(b, Rhd(c, base))))


def _left_context_rhd(a, b):
    ap = _sub(a, Var(HOLE))
    return iff(Rhd(_sub(a, _boxneg(ap)), b), Rhd(_sub(a, Rhd(ap, b)), b))


def _subst_principle(outer: Callable[[Formula], Formula]):
    def build(c, a, b):
        return Imp(outer(iff(a, b)), iff(_sub(c, a), _sub(c, b)))

    return build


def _no_hole_right(c: Formula) -> bool:
    """No subformula ``D |> E`` of ``c`` has the hole in ``E``."""
    stack = [c]
    while stack:
        g = stack.pop()
        if isinstance(g, Rhd):
            if HOLE in variables(g.rhs):
                return False
            stack += [g.lhs, g.rhs]
        elif isinstance(g, Imp):
            stack += [g.lhs, g.rhs]
        elif isinstance(g, Box):
            stack.append(g.arg)
    return True


@dataclass(frozen=True)
class SuiteEntry:
    """``metas`` lists ``"f"`` (formula) or ``"c"`` (context) per argument."""

    name: str
    logic: str
    expected: str
    build: Callable[..., Formula]
    metas: tuple[str, ...]
    context_ok: Callable[[Formula], bool] | None = None
    kind: str = "schema"
    note: str = ""


VALID, HAS_CM, AGREE = "Valid", "HasCountermodel", "Agree"


def _entries() -> list[SuiteEntry]:
    f, c = "f", "c"
    j2_note = "J2 checked over the J2+ class, which validates J2"
    return [
        SuiteEntry("boxneg-rhd", "IL-", VALID, lambda a, b: Imp(_boxneg(a), Rhd(a, b)), (f, f)),
        SuiteEntry("rhd-left-monotone", "IL-", VALID, lambda a, b, cc: Imp(Box(Imp(a, b)), Imp(Rhd(b, cc), Rhd(a, cc))), (f, f, f)),
        SuiteEntry("rhd-left-split", "IL-", VALID, lambda a, b, cc: Imp(Rhd(conj(neg(a), b), cc), Imp(Rhd(a, cc), Rhd(b, cc))), (f, f, f)),
        SuiteEntry("j4-from-j4plus", "IL-(J4+)", VALID, lambda a, b: axiom_instance("J4", [a, b]), (f, f)),
        SuiteEntry("j2-j4plus-from-j2plus", "IL-(J2+)", VALID, _j2_and_j4plus, (f, f, f)),
        SuiteEntry("rhd-cut", "IL-(J2+)", VALID, lambda a, b, cc: Imp(conj(Rhd(a, b), Rhd(conj(b, neg(cc)), cc)), Rhd(a, cc)), (f, f, f)),
        SuiteEntry("rhd-reflexive", "IL-(J1)", VALID, lambda a: Rhd(a, a), (f,)),
        SuiteEntry(
            "bottom-part-diamond", "IL-", VALID,
            lambda a: iff(disj(a, dia(a)), disj(_bottom_part(a), dia(_bottom_part(a)))), (f,),
        ),
        SuiteEntry("bottom-part-left", "IL-(J2+,J5)", VALID, lambda a, cc: iff(Rhd(_bottom_part(a), cc), Rhd(a, cc)), (f, f), note=j2_note),
        SuiteEntry("bottom-part-right", "IL-(J2+,J5)", VALID, lambda a, cc: iff(Rhd(cc, _bottom_part(a)), Rhd(cc, a)), (f, f)),
        SuiteEntry("boxneg-rule", "IL-", VALID, lambda a, b: Imp(_boxneg(a), iff(a, b)), (f, f), kind="rule",
                   note="rule form: frames validating the premise validate the conclusion"),
        SuiteEntry("context-top-bottom-part", "IL-(J4+)", VALID, _l3, (c, f)),
        SuiteEntry("context-top-rhd", "IL-(J2+,J5)", VALID, _l4, (c, f, f),
                   note="IL-(J2,J4+,J5) checked over the smaller J2+,J5 class"),
        SuiteEntry("context-boxneg-bottom-part", "IL-(J4+)", VALID, _l5, (c, f)),
        SuiteEntry("context-boxneg-rhd", "IL-(J2+,J5)", VALID, _l6, (c, f, f)),
        SuiteEntry("left-context-rhd", "IL-(J4+,J5)", VALID, _left_context_rhd, (c, f), context_ok=_no_hole_right,
                   note="IL-(J4,J5) checked over the J4+,J5 class"),
        SuiteEntry("substitution-boxdot", "IL-(J4+)", VALID, _subst_principle(boxdot), (c, f, f)),
        SuiteEntry("substitution-box", "IL-(J4+)", VALID, _subst_principle(Box), (c, f, f),
                   context_ok=lambda x: is_modalized(x, HOLE)),
        SuiteEntry("left-substitution-boxdot", "IL-", VALID, _subst_principle(boxdot), (c, f, f), context_ok=_no_hole_right),
        SuiteEntry("left-substitution-box", "IL-", VALID, _subst_principle(Box), (c, f, f),
                   context_ok=lambda x: is_modalized(x, HOLE, left_only=True)),
        SuiteEntry("rhd-diamond-agreement", "IL-(J2+,J5)", AGREE, lambda a, b: Rhd(a, b), (f, f), kind="tip",
                   note="A |> B and A -> <>B agree on every corpus pair"),
        SuiteEntry("il-embedding-agreement", "IL-(J2+,J5)", AGREE, lambda a: a, (f,), kind="emb",
                   note="A over IL frames agrees with the embedding over the J2+,J5 class"),
        SuiteEntry("j5-fails-in-IL-", "IL-", HAS_CM, lambda a: axiom_instance("J5", [a]), (f,)),
        SuiteEntry("j4plus-fails-in-IL-(J1,J5)", "IL-(J1,J5)", HAS_CM, lambda a, b, cc: axiom_instance("J4plus", [a, b, cc]), (f, f, f)),
        SuiteEntry("ufp-fails-in-IL-(J1,J5)", "IL-(J1,J5)", HAS_CM, lambda: ufp_formula(parse("true |> ~p"), "p"), ()),
        SuiteEntry("rhd-reflexive-fails-in-IL-", "IL-", HAS_CM, lambda a: Rhd(a, a), (f,)),
    ]


SUITE: dict[str, SuiteEntry] = {e.name: e for e in _entries()}

# fixed contexts tried before random ones
BASE_CONTEXTS = [parse(s) for s in ("p", "~p", "[]p", "p |> q", "q |> p", "[]~p |> q", "(p -> q) |> false", "p -> []p")]
# extra instances for the rule entry whose premise holds on every frame
RULE_PAIRS = [
    lambda a, c: (a, disj(a, conj(dia(a), c))),
    lambda a, c: (a, conj(a, Imp(dia(a), c))),
]


def instances(entry: SuiteEntry, samples: int, seed: int) -> list[tuple[Formula, ...]]:
    """Argument tuples: the atomic one (when possible), fixed contexts, then samples."""
    rng = random.Random(f"{entry.name}:{seed}")
    ok = entry.context_ok or (lambda _: True)
    out: list[tuple[Formula, ...]] = []
    n_ctx = entry.metas.count("c")
    atoms = iter(ATOMS[1:] if n_ctx else ATOMS)
    plain = [Var(next(atoms)) if m == "f" else None for m in entry.metas]
    ctxs = [x for x in BASE_CONTEXTS if ok(x)] if n_ctx else [None]
    for ctx in ctxs:
        out.append(tuple(ctx if m == "c" else v for m, v in zip(entry.metas, plain)))
    tries = 0
    while len(out) < len(ctxs) + samples and tries < 50 * (samples + 1):
        tries += 1
        args = []
        for m in entry.metas:
            if m == "f":
                args.append(random_formula(rng, ("p", "q", "r"), 2))
            else:
                cand = random_formula(rng, ("p", "q"), 2)
                if not ok(cand) or HOLE not in variables(cand):
                    break
                args.append(cand)
        else:
            out.append(tuple(args))
    return out


@dataclass
class SuiteResult:
    name: str
    logic: str
    expected: str
    passed: bool
    instances: int = 0
    frames_checked: int = 0
    countermodels: int = 0
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)
    witness: object = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  [{'; '.join(self.notes)}]" if self.notes else ""
        return (
            f"{self.name:<28} {self.logic:<16} {self.expected:<16} {status}  "
            f"instances={self.instances} frames={self.frames_checked} "
            f"countermodels={self.countermodels} time={self.elapsed:.2f}s{extra}"
        )


def _run_schema(entry, res, budget, args_list):
    L = lookup(entry.logic)
    for args in args_list:
        rep = search(L, entry.build(*args), budget)
        res.instances += 1
        res.frames_checked += rep.frames_checked
        if rep.refuted:
            res.countermodels += 1
            if res.witness is None:
                res.witness = (entry.build(*args), rep.witness)
            if entry.expected == HAS_CM:
                break
    if entry.expected == VALID:
        res.passed = res.countermodels == 0
    else:
        res.passed = res.countermodels > 0


def _run_rule(entry, res, budget, args_list, seed):
    """Per frame: premise valid implies conclusion valid."""
    L = lookup(entry.logic)
    rng = random.Random(f"{entry.name}:pairs:{seed}")
    pairs = [args for args in args_list]
    for make in RULE_PAIRS:
        for _ in range(3):
            pairs.append(make(random_formula(rng, ("p", "q"), 2), random_formula(rng, ("p", "q"), 1)))
    nonvacuous = 0
    for a, b in pairs:
        premise = entry.build(a, b)
        conclusion = iff(_bottom_part(a), _bottom_part(b))
        names = sorted(variables(premise) | variables(conclusion))
        res.instances += 1
        for n in range(1, budget.max_worlds + 1):
            for batch in iter_batches(n, L):
                pv = frames_valid(batch, premise, names)
                cv = frames_valid(batch, conclusion, names)
                res.frames_checked += len(batch)
                nonvacuous += int(pv.sum())
                res.countermodels += int((pv & ~cv).sum())
    res.notes.append(f"{nonvacuous} frame/instance pairs with valid premise")
    res.passed = res.countermodels == 0 and nonvacuous > 0


def _run_tip(entry, res, budget, args_list):
    """Bounded validity of ``A |> B`` and of ``A -> <>B`` agree.

    A frame refuting ``A |> B`` refutes ``A -> <>B``.  Conversely a refutation
    of ``A -> <>B`` on ``n`` worlds yields one of ``A |> B`` on ``n + 1``
    worlds (a new root whose S relates each world to its R-successors), so a
    disagreement at bound ``n`` is resolved at ``n + 1``.
    """
    L = lookup(entry.logic)
    bigger = SearchBudget(budget.max_worlds + 1, budget.max_valuations, budget.sampling_seed, budget.strategy)
    deferred = 0
    for a, b in args_list:
        r1 = search(L, Rhd(a, b), budget)
        r2 = search(L, Imp(a, dia(b)), budget)
        res.instances += 1
        res.frames_checked += r1.frames_checked + r2.frames_checked
        if r1.refuted == r2.refuted:
            continue
        if r1.refuted and not r2.refuted:
            res.countermodels += 1
            continue
        deferred += 1
        if not search(L, Rhd(a, b), bigger).refuted:
            res.countermodels += 1
    if deferred:
        res.notes.append(f"{deferred} pairs resolved at {budget.max_worlds + 1} worlds")
    res.passed = res.countermodels == 0


def _run_emb(entry, res, budget, args_list):
    il = lookup("IL")
    L = lookup(entry.logic)
    for (a,) in args_list:
        r1 = search(il, a, budget)
        r2 = search(L, embed_il(a), budget)
        res.instances += 1
        res.frames_checked += r1.frames_checked + r2.frames_checked
        if r1.refuted != r2.refuted:
            res.countermodels += 1
    res.passed = res.countermodels == 0


def run_entry(name: str, budget: SearchBudget | None = None, samples: int = 60, seed: int = 0) -> SuiteResult:
    if name not in SUITE:
        raise KeyError(f"unknown suite entry {name!r}")
    entry = SUITE[name]
    budget = budget or SearchBudget(3)
    start = time.perf_counter()
    res = SuiteResult(entry.name, entry.logic, entry.expected, False)
    if entry.note:
        res.notes.append(entry.note)
    if entry.expected == HAS_CM or not entry.metas:
        args_list = instances(entry, 0, seed)
    else:
        args_list = instances(entry, samples, seed)
    if entry.kind == "rule":
        _run_rule(entry, res, budget, args_list, seed)
    elif entry.kind == "tip":
        _run_tip(entry, res, budget, args_list)
    elif entry.kind == "emb":
        _run_emb(entry, res, budget, args_list)
    else:
        _run_schema(entry, res, budget, args_list)
    res.elapsed = time.perf_counter() - start
    return res


def run_suite(names: list[str] | None = None, budget: SearchBudget | None = None, samples: int = 60, seed: int = 0) -> list[SuiteResult]:
    names = names or list(SUITE)
    unknown = [n for n in names if n not in SUITE]
    if unknown:
        raise KeyError(f"unknown suite entries: {', '.join(unknown)}")
    return [run_entry(n, budget, samples, seed) for n in names]
