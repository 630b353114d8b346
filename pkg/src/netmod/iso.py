"""Isomorphism of net modules and canonical encodings.

Two modules are isomorphic when a bijection between their elements
preserves kind, label, arcs, and the exact position of every element in
the left and right interfaces. Interface positions therefore pin the
interface elements; only interior elements need a search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .interface import ElementId, Kind, Label
from .module import Element, NetModule, check

_Attr = tuple[str, str, int, int]


def _attrs(m: NetModule) -> list[_Attr]:
    lpos = {x: i for i, x in enumerate(m.left)}
    rpos = {x: i for i, x in enumerate(m.right)}
    return [
        (e.kind.value, e.label.name, lpos.get(e.id, -1), rpos.get(e.id, -1))
        for e in m.elements
    ]


@dataclass(frozen=True)
class CanonicalForm:
    """Isomorphism-invariant byte encoding of a module; decodable."""

    bytes: bytes

    def __repr__(self) -> str:
        return f"CanonicalForm({self.bytes[:48]!r}{'...' if len(self.bytes) > 48 else ''})"

    @cached_property
    def _payload(self) -> dict:
        return json.loads(self.bytes)

    @property
    def size(self) -> int:
        return len(self._payload["nodes"])

    def decode(self) -> NetModule:
        """Representative module with ids ``c0, c1, ...``."""
        nodes = self._payload["nodes"]
        elems = tuple(
            Element(f"c{i}", Label(Kind(k), name)) for i, (k, name, _, _) in enumerate(nodes)
        )
        arcs = frozenset((f"c{s}", f"c{t}") for s, t in self._payload["arcs"])
        left = [(lp, f"c{i}") for i, (_, _, lp, _) in enumerate(nodes) if lp >= 0]
        right = [(rp, f"c{i}") for i, (_, _, _, rp) in enumerate(nodes) if rp >= 0]
        return NetModule(elems, arcs, [x for _, x in sorted(left)], [x for _, x in sorted(right)])


# -- canonical labeling by individualization and refinement ------------------


def _rank(keys: list) -> list[int]:
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def _refine(colors: list[int], out: list[list[int]], inn: list[list[int]]) -> list[int]:
    ncells = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[w] for w in out[v])),
             tuple(sorted(colors[w] for w in inn[v])))
            for v in range(len(colors))
        ]
        colors = _rank(sigs)
        n = len(set(colors))
        if n == ncells:
            return colors
        ncells = n


def _leaf(colors: list[int], arcs: list[tuple[int, int]]) -> tuple:
    return tuple(sorted((colors[s], colors[t]) for s, t in arcs))


def _search(colors, out, inn, arcs) -> tuple[tuple, list[int]]:
    colors = _refine(colors, out, inn)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
    if target is None:
        return _leaf(colors, arcs), colors
    best: Optional[tuple[tuple, list[int]]] = None
    for v in cells[target]:
        split = _rank([(c, 0 if (u == v or c != target) else 1) for u, c in enumerate(colors)])
        cand = _search(split, out, inn, arcs)
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def canonical_labeling(m: NetModule) -> tuple[CanonicalForm, dict[ElementId, int]]:
    """Canonical form of ``m`` and the position each element takes in it."""
    check(m)
    ids = m.ids
    index = {x: i for i, x in enumerate(ids)}
    n = len(ids)
    out: list[list[int]] = [[] for _ in range(n)]
    inn: list[list[int]] = [[] for _ in range(n)]
    arcs = [(index[s], index[t]) for s, t in m.arcs]
    for s, t in arcs:
        out[s].append(t)
        inn[t].append(s)
    attrs = _attrs(m)
    arc_code, colors = _search(_rank(attrs), out, inn, arcs)
    nodes: list = [None] * n
    for v, c in enumerate(colors):
        nodes[c] = list(attrs[v])
    payload = {"nodes": nodes, "arcs": [list(a) for a in arc_code]}
    data = json.dumps(payload, ensure_ascii=False, separators=(",", ":")).encode()
    return CanonicalForm(data), {x: colors[index[x]] for x in ids}


def canonical_form(m: NetModule) -> CanonicalForm:
    return canonical_labeling(m)[0]


# -- direct backtracking isomorphism search ----------------------------------


def find_isomorphism(m: NetModule, n: NetModule) -> Optional[dict[ElementId, ElementId]]:
    """A bijection witnessing ``m`` ≅ ``n``, or None."""
    if len(m.elements) != len(n.elements) or len(m.arcs) != len(n.arcs):
        return None
    if len(m.left) != len(n.left) or len(m.right) != len(n.right):
        return None
    am = dict(zip(m.ids, _attrs(m)))
    an = dict(zip(n.ids, _attrs(n)))
    if sorted(am.values()) != sorted(an.values()):
        return None

    def deg(mod, x):
        return len(mod.preset(x)), len(mod.postset(x))

    candidates = {
        x: [y for y in n.ids if an[y] == am[x] and deg(n, y) == deg(m, x)]
        for x in m.ids
    }
    # most constrained first, then neighbours of already placed elements
    order: list = []
    remaining = set(m.ids)
    while remaining:
        frontier = [
            x for x in remaining
            if any(y in order for y in m.preset(x) + m.postset(x))
        ]
        pool = frontier or list(remaining)
        x = min(pool, key=lambda z: (len(candidates[z]), m.ids.index(z)))
        order.append(x)
        remaining.discard(x)

    fwd: dict = {}
    used: set = set()

    def consistent(x, y) -> bool:
        for z, w in fwd.items():
            if ((x, z) in m.arcs) != ((y, w) in n.arcs):
                return False
            if ((z, x) in m.arcs) != ((w, y) in n.arcs):
                return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in candidates[x]:
            if y in used or not consistent(x, y):
                continue
            fwd[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del fwd[x]
            used.discard(y)
        return False

    return dict(fwd) if extend(0) else None


def is_isomorphic(m: NetModule, n: NetModule) -> bool:
    return find_isomorphism(m, n) is not None
