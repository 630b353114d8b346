"""Machine checks of the calculus' laws on small, seeded random modules.

Failures are reported as :class:`Verdict` objects carrying a replayable
:class:`Witness`, never as exceptions: a failing law points at a bug (or
a flaw in the claim) and the witness is the thing to look at.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

from .compose import CompositionError, compose, compose_traced
from .io import serialize_module
from .iso import is_isomorphic
from .module import NetModule, empty_module, is_valid
from .runs import (
    EMPTY_RUN,
    Run,
    RunRejected,
    compose_run_sets,
    extend_run,
    is_basic_run,
    runs_upto,
)
from .steps import basic_step

THEOREM1 = "theorem1"
COMPOSITION = "composition"
ASSOCIATIVITY = "associativity"
IDENTITY = "identity"
CLAIMS = (THEOREM1, COMPOSITION, ASSOCIATIVITY, IDENTITY)


class PreconditionError(ValueError):
    pass


class StaleWitness(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    max_places: int = 4
    max_transitions: int = 2
    max_arcs: int = 6
    max_interface: int = 3
    label_alphabet_size: int = 2
    transition_interfaces: bool = True
    overlap_rate: float = 0.1

    def __post_init__(self) -> None:
        for name in ("max_places", "max_transitions", "max_arcs", "max_interface"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.label_alphabet_size < 1:
            raise ValueError("label_alphabet_size must be positive")


@dataclass(frozen=True)
class Witness:
    claim: str
    operands: tuple[NetModule, ...]
    seed: Optional[int] = None
    params: Optional[GenParams] = None
    options: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return sum(len(m.elements) for m in self.operands)

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "seed": self.seed,
            "options": self.options,
            "operands": [serialize_module(m, f"Operand{i}") for i, m in enumerate(self.operands)],
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Verdict:
    claim: str
    status: str  # holds | fails | not applicable | inconclusive
    bound: dict = field(default_factory=dict)
    witness: Optional[Witness] = None
    detail: dict = field(default_factory=dict)

    @property
    def holds(self) -> Optional[bool]:
        if self.status == "holds":
            return True
        if self.status == "fails":
            return False
        return None

    def to_json(self) -> dict:
        out = {"claim": self.claim, "holds": self.holds, "status": self.status,
               "bound": self.bound, "seed": self.witness.seed if self.witness else None}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _fails(claim, operands, options=None, detail=None, bound=None) -> Verdict:
    w = Witness(claim, tuple(operands), options=dict(options or {}), detail=dict(detail or {}))
    return Verdict(claim, "fails", dict(bound or {}), w, dict(detail or {}))


# -- random generation ------------------------------------------------------


def random_module(p: GenParams) -> NetModule:
    """A valid module drawn deterministically from ``p.seed``."""
    rng = random.Random(p.seed)
    a = p.label_alphabet_size
    n_places = rng.randint(0, p.max_places)
    n_trans = rng.randint(0, p.max_transitions)
    places = [(f"P{i}", f"p{rng.randrange(a)}") for i in range(n_places)]
    trans = [(f"T{i}", f"t{rng.randrange(a)}") for i in range(n_trans)]
    pairs = [(x, y) for x, _ in places for y, _ in trans]
    pairs += [(y, x) for x, y in pairs]
    rng.shuffle(pairs)
    arcs = pairs[: rng.randint(0, min(p.max_arcs, len(pairs)))]

    pool = [x for x, _ in places]
    if p.transition_interfaces:
        pool += [x for x, _ in trans]
    left = rng.sample(pool, rng.randint(0, min(p.max_interface, len(pool))))
    if rng.random() < p.overlap_rate:
        rest = pool
    else:
        rest = [x for x in pool if x not in left]
    right = rng.sample(rest, rng.randint(0, min(p.max_interface, len(rest))))
    return NetModule.build(places, trans, arcs, left, right)


def _sub(p: GenParams, rng: random.Random, **changes) -> GenParams:
    return replace(p, seed=rng.getrandbits(63), **changes)


def random_triple(p: GenParams) -> tuple[NetModule, NetModule, NetModule]:
    rng = random.Random(p.seed)
    return tuple(random_module(_sub(p, rng)) for _ in range(3))


def random_composable_pair(p: GenParams, attempts: int = 50) -> tuple[NetModule, NetModule]:
    """Two modules whose composition is defined."""
    rng = random.Random(p.seed)
    for _ in range(attempts):
        m, n = random_module(_sub(p, rng)), random_module(_sub(p, rng))
        try:
            compose(m, n)
        except CompositionError:
            continue
        return m, n
    return empty_module(), random_module(_sub(p, rng))


def random_basic_run(host: NetModule, rng: random.Random, max_len: int = 4) -> Run:
    """Fold randomly chosen basic steps of ``host`` into a run."""
    steps = [basic_step(host, t) for t in host.transitions]
    run = EMPTY_RUN
    if not steps:
        return run
    target = rng.randint(0, max_len)
    tries = 0
    while run.size < target and tries < 4 * max_len:
        tries += 1
        try:
            run = extend_run(run, rng.choice(steps))
        except RunRejected:
            continue
    return run


def random_basic_run_pair(p: GenParams, max_len: int = 4) -> tuple[Run, Run]:
    rng = random.Random(p.seed)
    host = random_module(_sub(p, rng))
    return random_basic_run(host, rng, max_len), random_basic_run(host, rng, max_len)


# -- the claims ---------------------------------------------------------------


def _net(r: Union[Run, NetModule]) -> NetModule:
    return r.net if isinstance(r, Run) else r


def check_theorem1(r: Union[Run, NetModule], s: Union[Run, NetModule]) -> Verdict:
    """Composition of basic runs is a basic run, with no arc leading back."""
    rn, sn = _net(r), _net(s)
    if not (is_basic_run(rn) and is_basic_run(sn)):
        raise PreconditionError("operands not basic runs")
    trace = compose_traced(rn, sn)
    z = trace.result
    sources = {p for p in z.places if not z.preset(p)}
    sinks = {p for p in z.places if not z.postset(p)}
    rank = {"first": 0, "fused": 1, "second": 2}
    backward = [
        (a, b) for a, b in z.arcs if rank[trace.origin(a)] > rank[trace.origin(b)]
    ]
    obligations = {
        "acyclic": z.is_acyclic(),
        "unbranched": not z.branched_places(),
        "left_is_sources": set(z.left) == sources,
        "right_is_sinks": set(z.right) == sinks,
        "no_backward_arc": not backward,
    }
    detail = {"obligations": obligations, "is_basic_run": is_basic_run(z)}
    if all(obligations.values()):
        return Verdict(THEOREM1, "holds", detail=detail)
    return _fails(THEOREM1, (rn, sn), detail=detail)


def check_composition_theorem(
    m: NetModule,
    n: NetModule,
    k: int,
    universe: str = "basic",
    budget: int = 10_000,
    max_classes: Optional[int] = None,
) -> Verdict:
    """Compare runs(m ∘ n) with runs(m) ∘ runs(n), both cut at ``k`` transitions.

    Bound soundness: a run of m ∘ n with at most k transitions splits into
    a run of m and a run of n whose transitions are disjoint parts of its
    own (a fused transition contributes one step to each side), so factors
    built from at most k steps cover every candidate, and the right-hand
    side keeps only compositions with at most k transitions.
    """
    try:
        mn = compose(m, n)
    except CompositionError as exc:
        raise PreconditionError(f"composition undefined: {exc}") from exc
    opts = {"k": k, "universe": universe, "budget": budget}
    lhs = runs_upto(mn, k, universe, budget, max_classes=max_classes)
    rm = runs_upto(m, k, universe, budget, max_classes=max_classes)
    rn = runs_upto(n, k, universe, budget, max_classes=max_classes)
    rhs = compose_run_sets(rm, rn, max_transitions=k)
    lhs = lhs.upto(k)
    only_l = lhs.members - rhs.members
    only_r = rhs.members - lhs.members
    detail = {
        "lhs_classes": len(lhs), "rhs_classes": len(rhs),
        "lhs_only": len(only_l), "rhs_only": len(only_r),
    }
    if lhs.truncated or rhs.truncated:
        return Verdict(COMPOSITION, "inconclusive", opts, detail=detail)
    if not only_l and not only_r:
        return Verdict(COMPOSITION, "holds", opts, detail=detail)

    def smallest(cfs, src):
        cf = min(cfs, key=lambda c: (c.size, c.bytes))
        return serialize_module(src.module(cf), "Run")

    wdetail = dict(detail)
    if only_l:
        wdetail["lhs_only_example"] = smallest(only_l, lhs)
    if only_r:
        wdetail["rhs_only_example"] = smallest(only_r, rhs)
    return _fails(COMPOSITION, (m, n), opts, wdetail, opts)


def check_associativity(
    a: NetModule, b: NetModule, c: NetModule,
    compose_fn: Callable[[NetModule, NetModule], NetModule] = compose,
) -> Verdict:
    try:
        lhs = compose_fn(compose_fn(a, b), c)
        rhs = compose_fn(a, compose_fn(b, c))
    except CompositionError as exc:
        return Verdict(ASSOCIATIVITY, "not applicable", detail={"reason": str(exc)})
    if is_isomorphic(lhs, rhs):
        return Verdict(ASSOCIATIVITY, "holds")
    return _fails(ASSOCIATIVITY, (a, b, c), detail={
        "(a∘b)∘c": serialize_module(lhs.renumbered(), "Lhs"),
        "a∘(b∘c)": serialize_module(rhs.renumbered(), "Rhs"),
    })


def check_identity(m: NetModule) -> Verdict:
    e = empty_module()
    right_ok = is_isomorphic(compose(m, e), m)
    left_ok = is_isomorphic(compose(e, m), m)
    detail = {"m∘[∅]≅m": right_ok, "[∅]∘m≅m": left_ok}
    if right_ok and left_ok:
        return Verdict(IDENTITY, "holds", detail=detail)
    return _fails(IDENTITY, (m,), detail=detail)


# -- seeded campaigns, replay, shrinking ---------------------------------------

DEFAULT_PARAMS = {
    IDENTITY: GenParams(max_places=4, max_transitions=2, max_arcs=6, max_interface=3,
                        label_alphabet_size=3),
    ASSOCIATIVITY: GenParams(max_places=4, max_transitions=2, max_arcs=6, max_interface=3,
                             label_alphabet_size=2),
    THEOREM1: GenParams(max_places=5, max_transitions=3, max_arcs=8, max_interface=2,
                        label_alphabet_size=2, transition_interfaces=False, overlap_rate=0.0),
    COMPOSITION: GenParams(max_places=5, max_transitions=3, max_arcs=8, max_interface=3,
                           label_alphabet_size=3),
}


def generate(claim: str, p: GenParams) -> tuple[NetModule, ...]:
    """Operands for ``claim`` drawn from ``p.seed``."""
    if claim == IDENTITY:
        return (random_module(p),)
    if claim == ASSOCIATIVITY:
        return random_triple(p)
    if claim == THEOREM1:
        return tuple(r.net for r in random_basic_run_pair(p))
    if claim == COMPOSITION:
        return random_composable_pair(p)
    raise ValueError(f"unknown claim {claim!r}")


def evaluate(claim: str, operands, options: Optional[dict] = None, **kw) -> Verdict:
    options = options or {}
    if claim == IDENTITY:
        return check_identity(*operands)
    if claim == ASSOCIATIVITY:
        return check_associativity(*operands, **kw)
    if claim == THEOREM1:
        return check_theorem1(*operands)
    if claim == COMPOSITION:
        return check_composition_theorem(*operands, **options)
    raise ValueError(f"unknown claim {claim!r}")


def check_seeded(claim: str, p: GenParams, options: Optional[dict] = None, **kw) -> Verdict:
    """Generate operands from ``p`` and check; failures carry the seed."""
    operands = generate(claim, p)
    v = evaluate(claim, operands, options, **kw)
    if v.witness is not None:
        v = replace(v, witness=replace(v.witness, seed=p.seed, params=p,
                                       options=dict(options or {})))
    return v


def replay(w: Witness, **kw) -> Verdict:
    return evaluate(w.claim, w.operands, w.options, **kw)


def replay_from_seed(w: Witness, **kw) -> Verdict:
    if w.seed is None or w.params is None:
        raise StaleWitness("witness carries no seed")
    return evaluate(w.claim, generate(w.claim, w.params), w.options, **kw)


def _shrink_candidates(m: NetModule):
    for x in reversed(m.ids):
        yield m.without([x])
    for arc in sorted(m.arcs, key=repr):
        yield NetModule(m.elements, m.arcs - {arc}, m.left, m.right)
    for i in range(len(m.left)):
        yield NetModule(m.elements, m.arcs, m.left[:i] + m.left[i + 1:], m.right)
    for i in range(len(m.right)):
        yield NetModule(m.elements, m.arcs, m.left, m.right[:i] + m.right[i + 1:])


def shrink(w: Witness, recheck: Optional[Callable[[Witness], Verdict]] = None) -> Witness:
    """Greedily delete elements, arcs and interface entries while the claim still fails."""
    recheck = recheck or replay

    def still_fails(cand: Witness) -> bool:
        try:
            return recheck(cand).holds is False
        except (PreconditionError, CompositionError, ValueError):
            return False

    if not still_fails(w):
        raise StaleWitness("stale witness: it does not reproduce a failure")
    changed = True
    while changed:
        changed = False
        for i, m in enumerate(w.operands):
            for smaller in _shrink_candidates(m):
                if not is_valid(smaller):
                    continue
                ops = w.operands[:i] + (smaller,) + w.operands[i + 1:]
                cand = replace(w, operands=ops, seed=None, params=None)
                if still_fails(cand):
                    w = replace(cand, detail=recheck(cand).witness.detail)
                    changed = True
                    break
            if changed:
                break
    return w


@dataclass
class Campaign:
    claim: str
    samples: int
    holds: int = 0
    not_applicable: int = 0
    inconclusive: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "claim": self.claim, "holds": self.ok, "samples": self.samples,
            "held": self.holds, "not_applicable": self.not_applicable,
            "inconclusive": self.inconclusive, "failures": len(self.failures),
            "witness": self.failures[0].witness.to_json() if self.failures else None,
            "seed": self.failures[0].witness.seed if self.failures else None,
        }


def campaign(claim: str, samples: int, seed: int = 0, params: Optional[GenParams] = None,
             options: Optional[dict] = None, **kw) -> Campaign:
    """Run ``samples`` seeded checks of ``claim``; seeds are ``seed, seed+1, ...``."""
    base = params or DEFAULT_PARAMS[claim]
    out = Campaign(claim, samples)
    for i in range(samples):
        v = check_seeded(claim, replace(base, seed=seed + i), options, **kw)
        if v.status == "holds":
            out.holds += 1
        elif v.status == "not applicable":
            out.not_applicable += 1
        elif v.status == "inconclusive":
            out.inconclusive += 1
        else:
            out.failures.append(v)
    return out
