"""Runs: compositions of steps that stay acyclic with unbranched places."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

from .compose import CompositionError, compose, compose_all
from .interface import Kind
from .iso import CanonicalForm, canonical_form
from .module import NetModule, empty_module
from .steps import Step, step_universe


class RunRejected(ValueError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


@dataclass(frozen=True)
class Run:
    net: NetModule
    provenance: tuple[CanonicalForm, ...] = ()

    @property
    def size(self) -> int:
        return len(self.net.transitions)

    def replay(self) -> NetModule:
        if not self.provenance:
            return empty_module()
        return compose_all([cf.decode() for cf in self.provenance])


EMPTY_RUN = Run(empty_module(), ())


def run_violation(m: NetModule, strict: bool = True) -> Optional[str]:
    """Why ``m`` cannot be a run, or None."""
    if not m.is_acyclic():
        return "cycle introduced"
    if strict and m.branched_places():
        return "place branching introduced"
    return None


def is_run_shaped(m: NetModule, strict: bool = True) -> bool:
    return run_violation(m, strict) is None


def extend_run(r: Run, s: Union[Step, NetModule], strict: bool = True) -> Run:
    """``r ∘ s`` if it is again a run; raises :class:`RunRejected` otherwise.

    ``strict=False`` only demands acyclicity and lets places branch.
    """
    snet = s.net if isinstance(s, Step) else s
    try:
        net = compose(r.net, snet)
    except CompositionError as exc:
        raise RunRejected(str(exc)) from exc
    reason = run_violation(net, strict)
    if reason:
        raise RunRejected(reason)
    return Run(net.renumbered(), r.provenance + (canonical_form(snet),))


def is_basic_run(r: Union[Run, NetModule]) -> bool:
    m = r.net if isinstance(r, Run) else r
    if not is_run_shaped(m):
        return False
    if any(m.label(x).kind is Kind.TRANSITION for x in m.left + m.right):
        return False
    sources = {p for p in m.places if not m.preset(p)}
    sinks = {p for p in m.places if not m.postset(p)}
    return set(m.left) == sources and set(m.right) == sinks


@dataclass(frozen=True)
class RunClassSet:
    """A finite window onto the runs of a module, as isomorphism classes."""

    members: frozenset[CanonicalForm]
    bound: int
    truncated: bool = False
    runs: Mapping[CanonicalForm, Run] = field(default_factory=dict, compare=False, repr=False)

    def __contains__(self, cf: object) -> bool:
        return cf in self.members

    def __iter__(self) -> Iterator[CanonicalForm]:
        return iter(sorted(self.members, key=lambda c: (c.size, c.bytes)))

    def __len__(self) -> int:
        return len(self.members)

    def module(self, cf: CanonicalForm) -> NetModule:
        run = self.runs.get(cf)
        return run.net if run is not None else cf.decode()

    def upto(self, k: int) -> "RunClassSet":
        """Members with at most ``k`` transitions."""
        keep = {cf for cf in self.members if len(self.module(cf).transitions) <= k}
        return RunClassSet(frozenset(keep), k, self.truncated,
                           {cf: r for cf, r in self.runs.items() if cf in keep})


def runs_upto(
    m: NetModule,
    k: int,
    universe: str = "basic",
    budget: int = 10_000,
    strict: bool = True,
    max_classes: Optional[int] = None,
) -> RunClassSet:
    """Isomorphism classes of runs of ``m`` built from at most ``k`` steps.

    Breadth first from the empty run, extending every class by every step
    of the chosen universe. Composition is invariant under isomorphism, so
    one representative per class suffices.
    """
    steps, truncated = step_universe(m, universe, budget)
    found: dict[CanonicalForm, Run] = {canonical_form(EMPTY_RUN.net): EMPTY_RUN}
    frontier = list(found.values())
    for _ in range(k):
        nxt = []
        for r in frontier:
            for s in steps:
                try:
                    r2 = extend_run(r, s, strict)
                except RunRejected:
                    continue
                cf = canonical_form(r2.net)
                if cf in found:
                    continue
                if max_classes is not None and len(found) >= max_classes:
                    truncated = True
                    break
                found[cf] = r2
                nxt.append(r2)
        frontier = nxt
        if not frontier:
            break
    return RunClassSet(frozenset(found), k, truncated, found)


def compose_run_sets(
    a: RunClassSet,
    b: RunClassSet,
    max_transitions: Optional[int] = None,
    strict: bool = True,
) -> RunClassSet:
    """``{x ∘ y | x ∈ a, y ∈ b, x ∘ y is a run}`` as isomorphism classes.

    ``max_transitions`` keeps only results with at most that many
    transitions.
    """
    out: dict[CanonicalForm, Run] = {}
    right = [(cf, b.module(cf)) for cf in b]
    for acf in a:
        x = a.module(acf)
        for _, y in right:
            try:
                z = compose(x, y)
            except CompositionError:
                continue
            if max_transitions is not None and len(z.transitions) > max_transitions:
                continue
            if not is_run_shaped(z, strict):
                continue
            z = z.renumbered()
            cf = canonical_form(z)
            if cf not in out:
                out[cf] = Run(z)
    bound = max_transitions if max_transitions is not None else a.bound + b.bound
    return RunClassSet(frozenset(out), bound, a.truncated or b.truncated, out)


def _label_counts(m: NetModule, ids: Iterable) -> Counter:
    return Counter(m.label(x) for x in ids)


def recognize_run(
    m: NetModule,
    r: NetModule,
    universe: str = "basic",
    budget: int = 10_000,
    strict: bool = True,
) -> Optional[list[Step]]:
    """A sequence of steps of ``m`` whose composition is isomorphic to ``r``.

    Depth-first over step sequences. Partial compositions are pruned when
    they can no longer grow into ``r``: left interfaces only ever grow at
    the end, interior elements stay interior, and element counts per
    label never shrink. Visited partial runs are memoized by canonical
    form.
    """
    target = canonical_form(r)
    if not r.elements:
        return []
    labels = {r.label(t) for t in r.transitions}
    steps = [s for s in step_universe(m, universe, budget).steps if s.label in labels]
    r_left = [r.label(x) for x in r.left]
    r_all = _label_counts(r, r.ids)
    r_inner = _label_counts(r, r.interior)
    visited: set[CanonicalForm] = set()

    def viable(x: NetModule) -> bool:
        if len(x.elements) > len(r.elements):
            return False
        if [x.label(y) for y in x.left] != r_left[: len(x.left)]:
            return False
        if _label_counts(x, x.ids) - r_all:
            return False
        if _label_counts(x, x.interior) - r_inner:
            return False
        return True

    def dfs(run: Run, seq: list[Step]) -> Optional[list[Step]]:
        for s in steps:
            try:
                nxt = extend_run(run, s, strict)
            except RunRejected:
                continue
            if not viable(nxt.net):
                continue
            cf = canonical_form(nxt.net)
            if cf == target:
                return seq + [s]
            if cf in visited:
                continue
            visited.add(cf)
            found = dfs(nxt, seq + [s])
            if found is not None:
                return found
        return None

    return dfs(EMPTY_RUN, [])
