"""Graphviz DOT rendering of modules."""

from __future__ import annotations

import json

from .io import _has_plain_ids
from .interface import Kind
from .module import NetModule, check


def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _depths(m: NetModule) -> dict:
    depth = {}
    for x in m.topological_order():
        depth[x] = max((depth[y] + 1 for y in m.preset(x)), default=0)
    return depth


def to_dot(m: NetModule, style: str = "system", name: str = "M") -> str:
    """DOT text: places as circles, transitions as boxes.

    Interface members sit in ``cluster_left`` / ``cluster_right`` in
    interface order. ``system`` style chains each interface with invisible
    edges to pin the order; ``run`` style requires an acyclic module,
    adds no extra edges, and groups interior nodes by causal depth.
    """
    if style not in ("system", "run"):
        raise ValueError(f"unknown style {style!r}")
    check(m)
    if not _has_plain_ids(m):
        m = m.renumbered()
    ordered = sorted(m.elements, key=lambda e: (e.kind is Kind.TRANSITION, e.id))
    index = {e.id: i for i, e in enumerate(ordered)}
    node = {x: f"n{i}" for x, i in index.items()}

    def decl(x) -> str:
        e = m.element(x)
        shape = "circle" if e.kind is Kind.PLACE else "box"
        return f"{node[x]} [shape={shape}, label={_q(e.label.name)}];"

    out = [f"digraph {name} {{", "  rankdir=LR;"]
    if style == "run":
        out.append("  newrank=true;")
    placed = set()
    for side in ("left", "right"):
        members = [x for x in getattr(m, side) if x not in placed]
        if not members:
            continue
        out.append(f"  subgraph cluster_{side} {{")
        out.append(f"    label={_q(side)}; style=dashed;")
        for x in members:
            out.append(f"    {decl(x)}")
            placed.add(x)
        if style == "system":
            for a, b in zip(members, members[1:]):
                out.append(f"    {node[a]} -> {node[b]} [style=invis];")
        out.append("  }")
    for e in ordered:
        if e.id not in placed:
            out.append(f"  {decl(e.id)}")
    for s, t in sorted(m.arcs, key=lambda a: (index[a[0]], index[a[1]])):
        out.append(f"  {node[s]} -> {node[t]};")
    if style == "run":
        depth = _depths(m)
        levels: dict[int, list[str]] = {}
        for e in ordered:
            if e.id not in placed:
                levels.setdefault(depth[e.id], []).append(node[e.id])
        for d in sorted(levels):
            out.append(f"  {{ rank=same; {' '.join(levels[d])}; }}")
    out.append("}")
    return "\n".join(out) + "\n"
