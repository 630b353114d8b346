"""Net graphs with a left and a right interface."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .interface import ElementId, InterfaceView, Kind, Label


@dataclass(frozen=True)
class Element:
    id: ElementId
    label: Label

    @property
    def kind(self) -> Kind:
        return self.label.kind

    @property
    def is_place(self) -> bool:
        return self.label.kind is Kind.PLACE


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: object
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.severity}: {self.rule}: {self.message}"


class InvalidModule(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__(
            "validation failed: " + "; ".join(str(v) for v in violations)
        )


@dataclass(frozen=True)
class NetModule:
    """A net graph plus ordered left and right interfaces.

    Elements keep their insertion order; that order has no semantic
    meaning but makes every derived structure deterministic. The interior
    is derived, never stored.
    """

    elements: tuple[Element, ...] = ()
    arcs: frozenset[tuple[ElementId, ElementId]] = frozenset()
    left: tuple[ElementId, ...] = ()
    right: tuple[ElementId, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))

    @classmethod
    def build(
        cls,
        places: Mapping[ElementId, str] | Iterable[tuple[ElementId, str]] = (),
        transitions: Mapping[ElementId, str] | Iterable[tuple[ElementId, str]] = (),
        arcs: Iterable[tuple[ElementId, ElementId]] = (),
        left: Iterable[ElementId] = (),
        right: Iterable[ElementId] = (),
    ) -> "NetModule":
        """Convenience constructor from plain names."""
        if isinstance(places, Mapping):
            places = places.items()
        if isinstance(transitions, Mapping):
            transitions = transitions.items()
        elems = [Element(x, Label(Kind.PLACE, n)) for x, n in places]
        elems += [Element(x, Label(Kind.TRANSITION, n)) for x, n in transitions]
        return cls(tuple(elems), frozenset(arcs), tuple(left), tuple(right))

    # -- lookups -----------------------------------------------------------

    @cached_property
    def _by_id(self) -> dict[ElementId, Element]:
        return {e.id: e for e in self.elements}

    def __contains__(self, x: object) -> bool:
        return x in self._by_id

    def element(self, x: ElementId) -> Element:
        return self._by_id[x]

    def label(self, x: ElementId) -> Label:
        return self._by_id[x].label

    @property
    def ids(self) -> tuple[ElementId, ...]:
        return tuple(e.id for e in self.elements)

    @property
    def places(self) -> tuple[ElementId, ...]:
        return tuple(e.id for e in self.elements if e.kind is Kind.PLACE)

    @property
    def transitions(self) -> tuple[ElementId, ...]:
        return tuple(e.id for e in self.elements if e.kind is Kind.TRANSITION)

    @property
    def left_view(self) -> InterfaceView:
        return InterfaceView(tuple((x, self.label(x)) for x in self.left))

    @property
    def right_view(self) -> InterfaceView:
        return InterfaceView(tuple((x, self.label(x)) for x in self.right))

    @property
    def interior(self) -> tuple[ElementId, ...]:
        border = set(self.left) | set(self.right)
        return tuple(x for x in self.ids if x not in border)

    @cached_property
    def _adjacency(self) -> tuple[dict, dict]:
        pre: dict[ElementId, list] = {x: [] for x in self.ids}
        post: dict[ElementId, list] = {x: [] for x in self.ids}
        for s, t in sorted(self.arcs, key=repr):
            post.setdefault(s, []).append(t)
            pre.setdefault(t, []).append(s)
        return pre, post

    def preset(self, x: ElementId) -> list[ElementId]:
        return self._adjacency[0].get(x, [])

    def postset(self, x: ElementId) -> list[ElementId]:
        return self._adjacency[1].get(x, [])

    @cached_property
    def label_arcs(self) -> frozenset[tuple[Label, Label]]:
        """Arcs projected onto labels."""
        return frozenset((self.label(s), self.label(t)) for s, t in self.arcs)

    def __len__(self) -> int:
        return len(self.elements)

    # -- structural predicates used by runs --------------------------------

    def is_acyclic(self) -> bool:
        ts = graphlib.TopologicalSorter({x: self.preset(x) for x in self.ids})
        try:
            ts.prepare()
        except graphlib.CycleError:
            return False
        return True

    def topological_order(self) -> list[ElementId]:
        """Elements in a deterministic topological order; raises on cycles."""
        order = []
        indeg = {x: len(self.preset(x)) for x in self.ids}
        pos = {x: i for i, x in enumerate(self.ids)}
        ready = [x for x in self.ids if indeg[x] == 0]
        while ready:
            ready.sort(key=pos.__getitem__)
            x = ready.pop(0)
            order.append(x)
            for y in self.postset(x):
                indeg[y] -= 1
                if indeg[y] == 0:
                    ready.append(y)
        if len(order) != len(self.ids):
            raise graphlib.CycleError("module contains a cycle")
        return order

    def branched_places(self) -> list[ElementId]:
        return [
            p for p in self.places
            if len(self.preset(p)) > 1 or len(self.postset(p)) > 1
        ]

    # -- derived modules ---------------------------------------------------

    def renamed(self, mapping: Mapping[ElementId, ElementId]) -> "NetModule":
        m = mapping.__getitem__
        return NetModule(
            tuple(Element(m(e.id), e.label) for e in self.elements),
            frozenset((m(s), m(t)) for s, t in self.arcs),
            tuple(map(m, self.left)),
            tuple(map(m, self.right)),
        )

    def renumbered(self, prefix: str = "e") -> "NetModule":
        """Copy with string ids ``e0, e1, ...`` in element order."""
        return self.renamed({x: f"{prefix}{i}" for i, x in enumerate(self.ids)})

    def without(self, drop: Iterable[ElementId]) -> "NetModule":
        """Remove elements together with incident arcs and interface entries."""
        drop = set(drop)
        return NetModule(
            tuple(e for e in self.elements if e.id not in drop),
            frozenset(a for a in self.arcs if a[0] not in drop and a[1] not in drop),
            tuple(x for x in self.left if x not in drop),
            tuple(x for x in self.right if x not in drop),
        )


def empty_module() -> NetModule:
    return NetModule()


def validate(m: NetModule) -> list[Violation]:
    """Structural violations of ``m``; warnings are reported with severity "warning"."""
    out: list[Violation] = []
    seen: set = set()
    for e in m.elements:
        if e.id in seen:
            out.append(Violation("duplicate id", e.id, f"element {e.id!r} declared twice"))
        seen.add(e.id)
        if not isinstance(e.label, Label):
            out.append(Violation("label", e.id, f"element {e.id!r} has no proper label"))
    kinds = {e.id: e.kind for e in m.elements}
    for s, t in sorted(m.arcs, key=repr):
        if s not in kinds or t not in kinds:
            missing = s if s not in kinds else t
            out.append(Violation("dangling arc", (s, t), f"arc {s!r} -> {t!r} cites unknown {missing!r}"))
        elif kinds[s] is kinds[t]:
            out.append(Violation(
                "bipartiteness", (s, t),
                f"arc {s!r} -> {t!r} connects two {kinds[s].name.lower()}s",
            ))
    for side, ids in (("left", m.left), ("right", m.right)):
        if len(set(ids)) != len(ids):
            out.append(Violation("duplicate interface entry", side, f"{side} interface repeats an element"))
        for x in ids:
            if x not in kinds:
                out.append(Violation(
                    "dangling interface reference", x,
                    f"{side} interface cites unknown element {x!r}",
                ))
    both = [x for x in m.left if x in set(m.right)]
    if both:
        out.append(Violation(
            "interface overlap", tuple(both),
            f"elements {both!r} lie in both interfaces", severity="warning",
        ))
    return out


def errors(m: NetModule) -> list[Violation]:
    return [v for v in validate(m) if v.severity == "error"]


def is_valid(m: NetModule) -> bool:
    return not errors(m)


def check(m: NetModule) -> NetModule:
    """Return ``m`` unchanged, raising :class:`InvalidModule` on any error."""
    errs = errors(m)
    if errs:
        raise InvalidModule(errs)
    return m
