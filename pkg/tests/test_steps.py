import pytest
from hypothesis import given, settings

from netmod import (
    NetModule,
    basic_step,
    canonical_form,
    enumerate_steps,
    is_basic_run,
    is_step_of,
    step_universe,
    step_violations,
)

from conftest import modules


def names(m, ids):
    return [m.label(x).name for x in ids]


MOVE = NetModule.build(
    {"busy": "aide busy", "free": "aide free", "empty": "shelf empty"},
    {"t": "move"},
    [("busy", "t"), ("t", "free"), ("t", "empty")],
)


def test_basic_step_shape():
    s = basic_step(MOVE, "t")
    assert s.label.name == "move"
    assert names(s.net, s.net.left) == ["aide busy"]
    assert names(s.net, s.net.right) == ["aide free", "shelf empty"]
    assert s.net.interior == (s.transition,)
    assert is_step_of(MOVE, s.net)
    assert is_basic_run(s.net)


def test_isolated_transition():
    host = NetModule.build({}, {"t": "t"})
    s = basic_step(host, "t").net
    assert len(s.elements) == 1 and s.left == s.right == () and not s.arcs


def test_unknown_transition():
    with pytest.raises(KeyError):
        basic_step(MOVE, "busy")
    with pytest.raises(KeyError):
        basic_step(MOVE, "nope")


def test_basic_steps_of_global_are_the_fixture_steps(fx):
    g = fx("global")
    got = {canonical_form(basic_step(g, t).net) for t in g.transitions}
    want = {canonical_form(fx(f"step_{c}")) for c in "abcd"}
    assert got == want


def test_self_loop_place_stays_interior():
    host = NetModule.build({"p": "p", "q": "q"}, {"t": "t"}, [("p", "t"), ("t", "p"), ("q", "t")])
    s = basic_step(host, "t").net
    assert names(s, s.left) == ["q"] and s.right == ()
    assert len(s.interior) == 2


def test_missing_pre_arc():
    s = NetModule.build({"p": "aide busy"}, {"u": "move"}, [], left=["p"])
    vs = step_violations(MOVE, s)
    assert len(vs) == 1 and vs[0].startswith("missing pre-arc")
    assert not is_step_of(MOVE, s)


def test_extra_and_missing_post_arc():
    s = NetModule.build({"p": "aide busy", "q": "aide free"}, {"u": "move"}, [("p", "u"), ("u", "p")])
    vs = step_violations(MOVE, s)
    assert any(v.startswith("extra post-arc") for v in vs)
    assert any(v.startswith("missing post-arc") for v in vs)


def test_unrelated_place_is_accepted():
    s = NetModule.build({"p": "aide busy", "z": "ready"}, {"u": "move"}, [("p", "u")], right=["z"])
    assert step_violations(MOVE, s) == []


def test_wrong_transition_count_or_label():
    assert step_violations(MOVE, NetModule.build({"p": "aide busy"}))
    s = NetModule.build({}, {"u": "sell"})
    assert step_violations(MOVE, s) == ["host has no transition labeled 'sell'"]


def skeleton_host(k_places):
    places = {f"p{i}": f"l{i}" for i in range(k_places)}
    return NetModule.build(places, {"t": "t"}, [(p, "t") for p in places])


def exhaustive_assignments(elems):
    """Independent listing of side assignments: (left set, right set) pairs."""
    out = set()
    for mask in range(3 ** len(elems)):
        left, right = [], []
        for e in elems:
            mask, r = divmod(mask, 3)
            (left if r == 0 else right if r == 1 else []).append(e)
        out.add((tuple(left), tuple(right)))
    return out


@pytest.mark.parametrize("k_places", [0, 1, 2])
def test_enumeration_count_matches_exhaustive_listing(k_places):
    host = skeleton_host(k_places)
    batch = enumerate_steps(host, "t", 10_000)
    k = k_places + 1
    assert not batch.truncated
    assert len(batch.steps) == 3 ** k
    elems = [e.id for e in batch.steps[0].net.elements]
    got = {(s.net.left, s.net.right) for s in batch.steps}
    assert got == exhaustive_assignments(elems)


def test_enumeration_budget():
    host = skeleton_host(2)
    batch = enumerate_steps(host, "t", 10)
    assert batch.truncated and len(batch.steps) == 10
    assert not enumerate_steps(host, "t", 27).truncated
    assert enumerate_steps(host, "t", 10).steps[0].net == batch.steps[0].net


def test_enumeration_includes_transition_in_interface():
    steps = enumerate_steps(MOVE, "t", 10_000).steps
    assert any(s.transition in s.net.left for s in steps)
    assert any(s.transition in s.net.right for s in steps)


def test_enumeration_has_both_aide_free_variants(fx):
    g = fx("global")
    supply = next(t for t in g.transitions if g.label(t).name == "supply to aide")
    move = next(t for t in g.transitions if g.label(t).name == "move to shop")

    def free_on_right(s):
        return "aide free" in names(s.net, s.net.right)

    # the entered aide-free place (output of move) and the exited one (input of supply)
    assert any(free_on_right(s) for s in enumerate_steps(g, move, 10_000).steps)
    assert any(free_on_right(s) for s in enumerate_steps(g, supply, 10_000).steps)


@settings(max_examples=30)
@given(modules(max_places=3, max_transitions=2))
def test_enumerated_steps_are_steps_and_distinct(m):
    for t in m.transitions:
        steps = enumerate_steps(m, t, 200).steps
        assert all(is_step_of(m, s.net) for s in steps)
        forms = [canonical_form(s.net) for s in steps]
        assert len(set(forms)) == len(forms)
        b = basic_step(m, t)
        assert is_step_of(m, b.net)
        assert canonical_form(b.net) in forms


def test_universes(fx):
    g = fx("global")
    basic = step_universe(g)
    assert len(basic.steps) == 4 and not basic.truncated
    full = step_universe(g, "all")
    assert len(full.steps) == sum(3 ** (len(basic_step(g, t).net.elements)) for t in g.transitions)
    assert step_universe(g, "all", budget=5).truncated
    with pytest.raises(ValueError):
        step_universe(g, "some")
