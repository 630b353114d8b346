import pytest
from hypothesis import given, settings

from netmod import (
    CompositionError,
    NetModule,
    compose,
    compose_all,
    compose_traced,
    empty_module,
    is_isomorphic,
    is_valid,
    matches,
    matchfree,
)
from netmod.harness import GenParams, check_associativity, random_triple

from conftest import modules


def labels(m, ids):
    return [m.label(x).name for x in ids]


@given(modules())
def test_identity_law(m):
    e = empty_module()
    assert is_isomorphic(compose(m, e), m)
    assert is_isomorphic(compose(e, m), m)


def test_fig8_sketch():
    m = NetModule.build({"a": "a", "b": "b", "i": "i"}, {"t": "t"},
                        [("i", "t"), ("t", "a"), ("t", "b")], left=["i"], right=["a", "b"])
    n = NetModule.build({"b": "b", "c": "c", "o": "o"}, {"s": "s"},
                        [("b", "s"), ("c", "s"), ("s", "o")], left=["b", "c"], right=["o"])
    c = compose_traced(m, n)
    z = c.result
    assert [p.shared_label.name for p in c.fused] == ["b"]
    fused = ("f", "b", "b")
    assert fused in z.interior
    assert labels(z, z.left) == ["i", "c"]
    assert labels(z, z.right) == ["o", "a"]
    assert (("l", "t"), fused) in z.arcs and (fused, ("r", "s")) in z.arcs


def test_worked_interfaces_fuse_by_degree():
    m = NetModule.build(
        {"a": "ready", "b": "aide busy", "c": "aide free", "d": "aide busy"},
        right=["a", "b", "c", "d"])
    n = NetModule.build(
        {"e": "shelf empty", "f": "aide busy", "g": "aide free", "h": "aide busy"},
        left=["e", "f", "g", "h"])
    c = compose_traced(m, n)
    pairs = [(p.left_element, p.right_element) for p in c.fused]
    assert pairs == [(p.left_element, p.right_element) for p in matches(m.right_view, n.left_view)]
    assert pairs == [("b", "f"), ("c", "g"), ("d", "h")]
    assert c.result.right == tuple(("l", x) for x, _ in matchfree(m.right_view, n.left_view)) == (("l", "a"),)
    assert c.result.left == (("r", "e"),)
    assert {("f", "b", "f"), ("f", "c", "g"), ("f", "d", "h")} <= set(c.result.interior)


def test_overlap_in_first_operand_is_rejected():
    m = NetModule.build({"p": "x"}, left=["p"], right=["p"])
    n = NetModule.build({"q": "x"}, left=["q"])
    with pytest.raises(CompositionError, match="ambiguous interface overlap"):
        compose(m, n)


def test_overlap_in_second_operand_is_rejected():
    m = NetModule.build({"p": "x"}, right=["p"])
    n = NetModule.build({"q": "x"}, left=["q"], right=["q"])
    with pytest.raises(CompositionError, match="ambiguous interface overlap"):
        compose(m, n)


def test_unmatched_overlap_is_fine():
    m = NetModule.build({"p": "x"}, left=["p"], right=["p"])
    n = NetModule.build({"q": "y"}, left=["q"])
    z = compose(m, n)
    assert len(z.elements) == 2


def test_invalid_operand():
    bad = NetModule.build({"p": "a", "q": "b"}, {}, [("p", "q")])
    with pytest.raises(CompositionError, match="invalid operand"):
        compose(bad, empty_module())


def test_fused_arcs_collapse():
    # both operands carry the arc t -> p; fusing p and t makes them one
    m = NetModule.build({"p": "p"}, {"t": "t"}, [("t", "p")], right=["t", "p"])
    n = NetModule.build({"p": "p"}, {"t": "t"}, [("t", "p")], left=["t", "p"])
    z = compose(m, n)
    assert len(z.elements) == 2 and len(z.arcs) == 1


@settings(max_examples=60)
@given(modules(), modules())
def test_conservation(m, n):
    try:
        c = compose_traced(m, n)
    except CompositionError:
        return
    z = c.result
    assert is_valid(z)
    assert len(z.elements) == len(m.elements) + len(n.elements) - len(c.fused)
    assert set(c.first) == set(m.ids) and set(c.second) == set(n.ids)
    assert len(set(c.first.values())) == len(m.ids)
    assert len(set(c.second.values())) == len(n.ids)
    inherited = {(c.first[s], c.first[t]) for s, t in m.arcs} | {(c.second[s], c.second[t]) for s, t in n.arcs}
    assert z.arcs == inherited
    assert len(z.arcs) <= len(m.arcs) + len(n.arcs)
    fused = {c.first[p.left_element] for p in c.fused}
    assert set(z.interior) == {c.first[x] for x in m.interior} | {c.second[y] for y in n.interior} | fused


def test_associativity_over_seeds():
    params = GenParams(max_places=4, max_transitions=2, max_interface=3, label_alphabet_size=2)
    failures = []
    for seed in range(100):
        a, b, c = random_triple(GenParams(**{**params.__dict__, "seed": seed}))
        v = check_associativity(a, b, c)
        if v.holds is False:
            failures.append(seed)
    assert failures == []


def test_compose_all_single():
    m = NetModule.build({"p": "x"}, right=["p"])
    assert compose_all([m]) == m


def test_compose_all_empty_sequence():
    with pytest.raises(ValueError):
        compose_all([])


def test_compose_all_steps_give_r1(fx):
    steps = [fx(f"step_{c}") for c in "abcd"]
    assert is_isomorphic(compose_all(steps), fx("r1"))


def test_compose_all_r1_twice(fx):
    assert is_isomorphic(compose_all([fx("r1"), fx("r1")]), fx("r2"))


def test_baker_vendor_is_global(fx):
    z = compose(fx("baker"), fx("vendor"))
    assert z.left == z.right == ()
    assert is_isomorphic(z, fx("global"))


def test_three_part_system(fx):
    parts = [fx(n) for n in ("take_supply", "supply_move", "move_sell")]
    assert is_isomorphic(compose_all(parts), fx("global"))
    a, b, c = parts
    assert is_isomorphic(compose(compose(a, b), c), compose(a, compose(b, c)))


def test_two_cycle_runs_compose_to_r2(fx):
    assert is_isomorphic(compose(fx("baker_2cycle"), fx("vendor_2cycle")), fx("r2"))
