"""Countermodel search by SAT: frames, valuation and refuting world are all unknowns.

One call decides whether some frame on exactly ``n`` worlds in the class of
``L`` (with R inside the numeric order, ``i R j`` only when ``i > j``) has a
valuation refuting ``f``.  Adding R-isolated worlds preserves class
membership and truth, so a negative answer at ``n`` also covers every smaller
size.
"""

from __future__ import annotations

import z3

from .formula import Bot, Box, Formula, Imp, Var, size, subformulas, variables
from .logics import Logic
from .semantics import Frame, FrameProperty, Model

P = FrameProperty


def _frame_constraints(n: int, props: frozenset, s):
    r = [[z3.Bool(f"r_{i}_{j}") if i > j else z3.BoolVal(False) for j in range(n)] for i in range(n)]
    sv = [[[z3.Bool(f"s_{w}_{x}_{y}") for y in range(n)] for x in range(n)] for w in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i > j > k:
                    s.add(z3.Implies(z3.And(r[i][j], r[j][k]), r[i][k]))
    for w in range(n):
        for x in range(n):
            for y in range(n):
                s.add(z3.Implies(sv[w][x][y], r[w][x]))
                if P.J4PLUS in props or P.J2PLUS in props:
                    s.add(z3.Implies(sv[w][x][y], r[w][y]))
                if P.J5 in props:
                    s.add(z3.Implies(z3.And(r[w][x], r[x][y]), sv[w][x][y]))
                if P.J2PLUS in props:
                    for z in range(n):
                        s.add(z3.Implies(z3.And(sv[w][x][y], sv[w][y][z]), sv[w][x][z]))
            if P.J1 in props:
                s.add(z3.Implies(r[w][x], sv[w][x][x]))
    return r, sv


def sat_countermodel(n: int, L: Logic, f: Formula, timeout_ms: int | None = None):
    """A ``(Model, world)`` refuting ``f`` on an ``n``-world ``L``-frame, or ``None``.

    Raises ``TimeoutError`` if the solver gives up.
    """
    s = z3.Solver()
    if timeout_ms:
        s.set("timeout", timeout_ms)
    r, sv = _frame_constraints(n, L.frame_props, s)
    names = sorted(variables(f))
    val = {p: [z3.Bool(f"v_{p}_{w}") for w in range(n)] for p in names}
    subs = sorted(subformulas(f), key=size)
    t: dict[Formula, list] = {}
    for k, g in enumerate(subs):
        if isinstance(g, Bot):
            t[g] = [z3.BoolVal(False)] * n
            continue
        if isinstance(g, Var):
            t[g] = val[g.name]
            continue
        tv = [z3.Bool(f"t_{k}_{w}") for w in range(n)]
        for w in range(n):
            if isinstance(g, Imp):
                rhs = z3.Implies(t[g.lhs][w], t[g.rhs][w])
            elif isinstance(g, Box):
                rhs = z3.And([z3.Implies(r[w][x], t[g.arg][x]) for x in range(n) if w > x] or [z3.BoolVal(True)])
            else:
                a, b = t[g.lhs], t[g.rhs]
                rhs = z3.And(
                    [
                        z3.Implies(z3.And(r[w][x], a[x]), z3.Or([z3.And(sv[w][x][y], b[y]) for y in range(n)]))
                        for x in range(n)
                        if w > x
                    ]
                    or [z3.BoolVal(True)]
                )
            s.add(tv[w] == rhs)
        t[g] = tv
    s.add(z3.Or([z3.Not(t[f][w]) for w in range(n)]))
    res = s.check()
    if res == z3.unknown:
        raise TimeoutError(f"solver gave up at {n} worlds: {s.reason_unknown()}")
    if res == z3.unsat:
        return None
    m = s.model()

    def truth(e) -> bool:
        return z3.is_true(m.eval(e, model_completion=True))

    R = {(i, j) for i in range(n) for j in range(n) if i > j and truth(r[i][j])}
    S = {
        w: {(x, y) for x in range(n) for y in range(n) if truth(sv[w][x][y])}
        for w in range(n)
    }
    valuation = {p: frozenset(w for w in range(n) if truth(val[p][w])) for p in names}
    world = next(w for w in range(n) if not truth(t[f][w]))
    return Model(Frame(tuple(range(n)), frozenset(R), S), valuation), world

