"""The composition operator on net modules."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .interface import ElementId, MatchPair, matches
from .module import Element, InvalidModule, NetModule, check


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Composition:
    """A composed module plus where each operand element went.

    Result ids are tagged tuples: ``("l", x)`` for an element kept from
    the first operand, ``("r", y)`` for one kept from the second, and
    ``("f", x, y)`` for the element fusing the matching partners x and y.
    """

    result: NetModule
    first: dict[ElementId, ElementId]
    second: dict[ElementId, ElementId]
    fused: tuple[MatchPair, ...]

    def origin(self, z: ElementId) -> str:
        """"first", "second", or "fused"."""
        return {"l": "first", "r": "second", "f": "fused"}[z[0]]


def compose_traced(m: NetModule, n: NetModule) -> Composition:
    try:
        check(m)
        check(n)
    except InvalidModule as exc:
        raise CompositionError(f"invalid operand: {exc}") from exc

    pairs = matches(m.right_view, n.left_view)
    m_left, n_right = set(m.left), set(n.right)
    for p in pairs:
        if p.left_element in m_left:
            raise CompositionError(
                f"ambiguous interface overlap: matched element {p.left_element!r} "
                "lies in both interfaces of the first operand"
            )
        if p.right_element in n_right:
            raise CompositionError(
                f"ambiguous interface overlap: matched element {p.right_element!r} "
                "lies in both interfaces of the second operand"
            )

    partner = {p.left_element: p.right_element for p in pairs}
    taken = {p.right_element for p in pairs}
    first: dict = {}
    second: dict = {}
    elems: list[Element] = []
    for e in m.elements:
        if e.id in partner:
            z = ("f", e.id, partner[e.id])
            second[partner[e.id]] = z
        else:
            z = ("l", e.id)
        first[e.id] = z
        elems.append(Element(z, e.label))
    for e in n.elements:
        if e.id not in taken:
            z = ("r", e.id)
            second[e.id] = z
            elems.append(Element(z, e.label))

    arcs = {(first[s], first[t]) for s, t in m.arcs}
    arcs |= {(second[s], second[t]) for s, t in n.arcs}
    left = [first[x] for x in m.left] + [second[y] for y in n.left if y not in taken]
    right = [second[y] for y in n.right] + [first[x] for x in m.right if x not in partner]
    result = NetModule(tuple(elems), frozenset(arcs), tuple(left), tuple(right))
    return Composition(result, first, second, tuple(pairs))


def compose(m: NetModule, n: NetModule) -> NetModule:
    """``m ∘ n``: fuse matching partners of right(m) and left(n).

    Raises :class:`CompositionError` if an operand is invalid or a matched
    element also lies in its module's opposite interface.
    """
    return compose_traced(m, n).result


def compose_all(ms: Sequence[NetModule] | Iterable[NetModule]) -> NetModule:
    ms = list(ms)
    if not ms:
        raise ValueError("compose_all needs at least one module")
    return reduce(compose, ms)
