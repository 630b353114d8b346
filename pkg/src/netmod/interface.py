"""Ordered, labeled interfaces and the matching rules used by composition."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Iterable, Iterator

ElementId = Hashable


class Kind(str, Enum):
    PLACE = "place"
    TRANSITION = "trans"


@dataclass(frozen=True, order=True)
class Label:
    """A kind-tagged label. Place and transition labels never compare equal."""

    kind: Kind
    name: str

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("label name must be a nonempty string")
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))

    def __str__(self) -> str:
        return self.name


def place_label(name: str) -> Label:
    return Label(Kind.PLACE, name)


def trans_label(name: str) -> Label:
    return Label(Kind.TRANSITION, name)


@dataclass(frozen=True)
class InterfaceView:
    """A finite interface: the position in ``entries`` is the order."""

    entries: tuple[tuple[ElementId, Label], ...] = ()

    def __post_init__(self) -> None:
        entries = tuple((x, lab) for x, lab in self.entries)
        ids = [x for x, _ in entries]
        if len(set(ids)) != len(ids):
            raise ValueError("interface lists an element twice")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[ElementId, Label]]:
        return iter(self.entries)

    def __contains__(self, x: object) -> bool:
        return any(x == y for y, _ in self.entries)

    @property
    def ids(self) -> tuple[ElementId, ...]:
        return tuple(x for x, _ in self.entries)

    def label_of(self, x: ElementId) -> Label:
        for y, lab in self.entries:
            if y == x:
                return lab
        raise KeyError(f"{x!r} is not a member of the interface")

    @classmethod
    def of(cls, pairs: Iterable[tuple[ElementId, Label]]) -> "InterfaceView":
        return cls(tuple(pairs))


@dataclass(frozen=True)
class MatchPair:
    left_element: ElementId
    right_element: ElementId
    shared_label: Label
    shared_degree: int


def _degrees(a: InterfaceView, base: int = 1) -> list[int]:
    seen: dict[Label, int] = {}
    out = []
    for _, lab in a.entries:
        out.append(seen.get(lab, 0) + base)
        seen[lab] = seen.get(lab, 0) + 1
    return out


def degree(a: InterfaceView, x: ElementId) -> int:
    """1-based rank of ``x`` among the equally labeled entries of ``a``."""
    for (y, _), d in zip(a.entries, _degrees(a)):
        if y == x:
            return d
    raise KeyError(f"{x!r} is not a member of the interface")


def matches(a: InterfaceView, b: InterfaceView, *, base: int = 1) -> list[MatchPair]:
    """All pairs of equally labeled entries of equal degree, in the order of ``a``.

    ``base`` selects the degree convention (1 counts the element itself,
    0 counts only strictly smaller ones); outputs do not depend on it.
    """
    index = {
        (lab, d): y for (y, lab), d in zip(b.entries, _degrees(b, base))
    }
    pairs = []
    for (x, lab), d in zip(a.entries, _degrees(a, base)):
        if (lab, d) in index:
            pairs.append(MatchPair(x, index[lab, d], lab, d))
    return pairs


def matchfree(a: InterfaceView, b: InterfaceView, *, base: int = 1) -> InterfaceView:
    """Entries of ``a`` with no matching partner in ``b``, in ``a``'s order."""
    matched = {p.left_element for p in matches(a, b, base=base)}
    return InterfaceView(tuple(e for e in a.entries if e[0] not in matched))
