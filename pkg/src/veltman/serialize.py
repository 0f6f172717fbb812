"""JSON model and frame files, and Graphviz DOT export.

File layout::

    {"worlds": ["w", "x"], "R": [["w", "x"]], "S": {"w": [["x", "x"]]},
     "valuation": {"p": ["w"]}}

``valuation`` is omitted for bare frames.  World identifiers are written as
strings.
"""

from __future__ import annotations

import json
from pathlib import Path

from .semantics import Frame, FrameError, Model


def _sorted_pairs(rel, order):
    return sorted(([str(a), str(b)] for a, b in rel), key=lambda e: (order[e[0]], order[e[1]]))


def frame_to_dict(fr: Frame) -> dict:
    names = [str(w) for w in fr.worlds]
    order = {w: i for i, w in enumerate(names)}
    return {
        "worlds": names,
        "R": _sorted_pairs(fr.R, order),
        "S": {str(w): _sorted_pairs(fr.S[w], order) for w in fr.worlds if fr.S[w]},
    }


def model_to_dict(m: Model) -> dict:
    d = frame_to_dict(m.frame)
    pos = {w: i for i, w in enumerate(m.frame.worlds)}
    d["valuation"] = {
        p: [str(w) for w in sorted(ws, key=pos.__getitem__)] for p, ws in sorted(m.valuation.items())
    }
    return d


def _pairs(raw, what: str) -> set:
    try:
        return {(a, b) for a, b in raw}
    except (TypeError, ValueError):
        raise FrameError(f"{what} must be a list of [from, to] pairs") from None


def frame_from_dict(d: dict) -> Frame:
    if not isinstance(d, dict) or "worlds" not in d:
        raise FrameError("missing 'worlds'")
    S = d.get("S", {})
    if not isinstance(S, dict):
        raise FrameError("'S' must map worlds to pair lists")
    return Frame(
        tuple(d["worlds"]),
        frozenset(_pairs(d.get("R", []), "R")),
        {w: _pairs(rel, f"S[{w}]") for w, rel in S.items()},
    )


def model_from_dict(d: dict) -> Model:
    fr = frame_from_dict(d)
    val = d.get("valuation", {})
    if not isinstance(val, dict):
        raise FrameError("'valuation' must map variables to world lists")
    ws = set(fr.worlds)
    for p, xs in val.items():
        bad = [x for x in xs if x not in ws]
        if bad:
            raise FrameError(f"valuation of {p} mentions unknown worlds {bad}")
    return Model(fr, {p: frozenset(xs) for p, xs in val.items()})


def load_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_model(path: str | Path) -> Model:
    return model_from_dict(load_json(path))


def load_frame(path: str | Path) -> Frame:
    return frame_from_dict(load_json(path))


def dumps(obj: Model | Frame) -> str:
    """Pretty JSON with one key per line and compact values."""
    d = model_to_dict(obj) if isinstance(obj, Model) else frame_to_dict(obj)
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in d.items())
    return "{\n" + body + "\n}"


def save(obj: Model | Frame, path: str | Path) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def _q(s) -> str:
    return json.dumps(str(s))


def to_dot(obj: Model | Frame, highlight=None) -> str:
    """R as solid arrows, each ``S_w`` as dashed arrows labelled ``w``."""
    m = obj if isinstance(obj, Model) else None
    fr = m.frame if m else obj
    lines = ["digraph veltman {", "  node [shape=circle];"]
    for w in fr.worlds:
        label = str(w)
        if m:
            true = [p for p, ws in sorted(m.valuation.items()) if w in ws]
            if true:
                label += "\\n" + ",".join(true)
        attrs = [f"label={_q(label).replace(chr(92) * 2, chr(92))}"]
        if highlight is not None and w == highlight:
            attrs.append("peripheries=2")
        lines.append(f"  {_q(w)} [{', '.join(attrs)}];")
    pos = {w: i for i, w in enumerate(fr.worlds)}
    for a, b in sorted(fr.R, key=lambda e: (pos[e[0]], pos[e[1]])):
        lines.append(f"  {_q(a)} -> {_q(b)} [style=solid];")
    for w in fr.worlds:
        for x, y in sorted(fr.S[w], key=lambda e: (pos[e[0]], pos[e[1]])):
            lines.append(f"  {_q(x)} -> {_q(y)} [style=dashed, label={_q(w)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
