"""Steps: single-transition modules mirroring a host transition's surroundings.

Arc conditions are evaluated on labels: a step place ``p`` has an arc to
the step transition ``u`` exactly when the host has an arc from some
element labeled like ``p`` to some element labeled like ``u`` (and
likewise for the reverse direction).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .interface import ElementId, Kind, Label
from .iso import canonical_form
from .module import Element, NetModule

SIDES = ("left", "right", "neither")


@dataclass(frozen=True)
class Step:
    net: NetModule
    label: Label

    @property
    def transition(self) -> ElementId:
        return self.net.transitions[0]


class StepBatch(NamedTuple):
    steps: list[Step]
    truncated: bool


def step_violations(host: NetModule, s: NetModule) -> list[str]:
    """Reasons why ``s`` is not a step of ``host`` (empty if it is)."""
    ts = s.transitions
    if len(ts) != 1:
        return [f"a step has exactly one transition, found {len(ts)}"]
    u = ts[0]
    lu = s.label(u)
    if lu not in {host.label(t) for t in host.transitions}:
        return [f"host has no transition labeled {lu.name!r}"]
    out = []
    for p in s.places:
        lp = s.label(p)
        has_pre, want_pre = (p, u) in s.arcs, (lp, lu) in host.label_arcs
        has_post, want_post = (u, p) in s.arcs, (lu, lp) in host.label_arcs
        if want_pre and not has_pre:
            out.append(f"missing pre-arc: place {p!r} ({lp.name}) -> {lu.name}")
        if has_pre and not want_pre:
            out.append(f"extra pre-arc: place {p!r} ({lp.name}) -> {lu.name}")
        if want_post and not has_post:
            out.append(f"missing post-arc: {lu.name} -> place {p!r} ({lp.name})")
        if has_post and not want_post:
            out.append(f"extra post-arc: {lu.name} -> place {p!r} ({lp.name})")
    return out


def is_step_of(host: NetModule, s: NetModule) -> bool:
    return not step_violations(host, s)


def _skeleton(host: NetModule, t: ElementId):
    if t not in host or host.label(t).kind is not Kind.TRANSITION:
        raise KeyError(f"{t!r} is not a transition of the module")
    lt = host.label(t)
    labels = sorted({host.label(p) for p in host.preset(t) + host.postset(t)}, key=lambda l: l.name)
    places = []
    arcs = set()
    for i, lab in enumerate(labels):
        pid = f"p{i}"
        pre = (lab, lt) in host.label_arcs
        post = (lt, lab) in host.label_arcs
        places.append((pid, lab, pre, post))
        if pre:
            arcs.add((pid, "u"))
        if post:
            arcs.add(("u", pid))
    elems = tuple(Element(pid, lab) for pid, lab, _, _ in places) + (Element("u", lt),)
    return lt, places, elems, frozenset(arcs)


def basic_step(host: NetModule, t: ElementId) -> Step:
    """The step of ``t`` whose left interface holds exactly its pre-places
    and whose right interface holds exactly its post-places.

    One place per adjacent label, ordered by label name. A place that is
    both pre and post (a self-loop) stays interior.
    """
    lt, places, elems, arcs = _skeleton(host, t)
    left = [pid for pid, _, pre, post in places if pre and not post]
    right = [pid for pid, _, pre, post in places if post and not pre]
    return Step(NetModule(elems, arcs, left, right), lt)


def enumerate_steps(host: NetModule, t: ElementId, budget: int) -> StepBatch:
    """All left/right/neither assignments over the basic skeleton of ``t``.

    Yields at most ``budget`` steps in a fixed order; ``truncated`` is set
    when more would exist.
    """
    lt, _, elems, arcs = _skeleton(host, t)
    steps: list[Step] = []
    for choice in itertools.product(SIDES, repeat=len(elems)):
        if len(steps) >= budget:
            return StepBatch(steps, True)
        left = [e.id for e, c in zip(elems, choice) if c == "left"]
        right = [e.id for e, c in zip(elems, choice) if c == "right"]
        steps.append(Step(NetModule(elems, arcs, left, right), lt))
    return StepBatch(steps, False)


def step_universe(host: NetModule, universe: str = "basic", budget: int = 10_000) -> StepBatch:
    """Distinct steps of ``host`` (up to isomorphism) for run construction."""
    if universe not in ("basic", "all"):
        raise ValueError(f"unknown step universe {universe!r}")
    seen = set()
    out: list[Step] = []
    truncated = False
    for t in host.transitions:
        if universe == "basic":
            batch = [basic_step(host, t)]
        else:
            remaining = budget - len(out)
            if remaining <= 0:
                truncated = True
                break
            batch, cut = enumerate_steps(host, t, remaining)
            truncated |= cut
        for s in batch:
            cf = canonical_form(s.net)
            if cf not in seen:
                seen.add(cf)
                out.append(s)
    return StepBatch(out, truncated)
