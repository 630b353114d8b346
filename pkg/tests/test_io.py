import re
from pathlib import Path

import pytest
from hypothesis import given, settings

from netmod import (
    ModuleParseError,
    NetModule,
    compose,
    empty_module,
    is_isomorphic,
    is_valid,
    load_module,
    parse_module,
    runs_upto,
    serialize_module,
    to_dot,
)
from netmod.fixtures import NAMES, fixture_document, fixture_text
from netmod.harness import GenParams, random_module

from conftest import modules

GOLDEN = Path(__file__).parent / "golden"


def issues(text):
    with pytest.raises(ModuleParseError) as info:
        parse_module(text)
    return info.value.issues


def test_minimal_document():
    doc = parse_module("module Empty\n")
    assert doc.name == "Empty" and doc.body == empty_module()


def test_comments_and_blank_lines():
    doc = parse_module('# header\n\nmodule M  # trailing\nplace p "a # not a comment"\nleft p\n')
    assert doc.body.label("p").name == "a # not a comment"
    assert doc.body.left == ("p",)
    assert doc.spans["p"] == (4, 1)


def test_labels_are_json_strings():
    doc = parse_module('module M\nplace p "say \\"hi\\" \\u00e9"\n')
    assert doc.body.label("p").name == 'say "hi" é'
    doc = parse_module('module M\nplace p "brötchen"\n')
    assert doc.body.label("p").name == "brötchen"


def test_arc_between_places_reports_rule_and_line():
    (i,) = issues('module M\nplace p "a"\nplace q "b"\narc p -> q\n')
    assert i.line == 4 and "bipartiteness" in i.message


@pytest.mark.parametrize("text, line, fragment", [
    ('module M\nplace p a\n', 2, "syntax error"),
    ('module M\nwibble\n', 2, "syntax error"),
    ('module M\nplace p "a"\ntrans p "t"\n', 3, "duplicate id 'p'"),
    ('module M\nplace p "a"\narc p -> t\n', 3, "dangling arc"),
    ('module M\nplace p "a"\nleft p\nright q\n', 4, "dangling interface reference"),
    ('module M\nplace p "a"\nleft p p\n', 3, "duplicate interface entry"),
    ('module M\nplace p "a"\nleft p\nleft p\n', 4, "duplicate left interface line"),
    ('module M\nplace p-1 "a"\n', 2, "invalid id"),
    ('module M\nmodule N\n', 2, "duplicate module header"),
    ('place p "a"\n', 1, "missing 'module"),
    ('module M\nplace p "a"\ntrans t "t"\narc p -> t\narc p -> t\n', 5, "duplicate arc"),
    ('module M\nplace p ""\n', 2, "bad label"),
])
def test_errors_carry_locations(text, line, fragment):
    found = issues(text)
    assert any(i.line == line and fragment in i.message for i in found), found


def test_error_message_names_source():
    with pytest.raises(ModuleParseError, match=r"^x\.netmod:2:1: syntax error"):
        parse_module("module M\n???\n", "x.netmod")


def test_baker_right_interface(fx):
    m = fx("baker")
    assert [m.label(x).name for x in m.right] == ["aide busy", "aide free"]
    assert m.left == ()


@pytest.mark.parametrize("name", NAMES)
def test_fixture_round_trip(name):
    doc = fixture_document(name)
    text = serialize_module(doc.body, doc.name)
    back = parse_module(text)
    assert back.name == doc.name
    assert back.body.left == doc.body.left and back.body.right == doc.body.right
    assert set(back.body.ids) == set(doc.body.ids)
    assert is_isomorphic(back.body, doc.body)
    assert serialize_module(back.body, back.name) == text


def test_random_round_trip():
    for seed in range(100):
        m = random_module(GenParams(seed=seed))
        text = serialize_module(m)
        back = parse_module(text).body
        assert back.left == m.left and back.right == m.right
        assert set(back.ids) == set(m.ids)
        assert is_isomorphic(back, m)


@given(modules())
def test_serializer_is_deterministic_and_sorted(m):
    text = serialize_module(m)
    assert text == serialize_module(m)
    lines = text.splitlines()
    decls = [l for l in lines if l.startswith(("place ", "trans "))]
    keys = [(l.startswith("trans"), l.split()[1]) for l in decls]
    assert keys == sorted(keys)


def test_serialize_empty():
    assert serialize_module(empty_module()) == "module M\nleft\nright\n"


def test_composed_modules_get_plain_ids(fx):
    text = serialize_module(compose(fx("baker"), fx("vendor")), "Global")
    assert is_isomorphic(parse_module(text).body, fx("global"))


def test_serialize_rejects_invalid():
    with pytest.raises(ValueError):
        serialize_module(NetModule.build({"p": "a", "q": "b"}, {}, [("p", "q")]))


def test_load_module(tmp_path):
    f = tmp_path / "baker.netmod"
    f.write_text(fixture_text("baker"), encoding="utf-8")
    assert load_module(f).name == "Baker"


@pytest.mark.parametrize("name, style, golden", [
    ("baker", "system", "baker_system.dot"),
    ("r1", "run", "r1_run.dot"),
])
def test_dot_golden(name, style, golden):
    doc = fixture_document(name)
    assert to_dot(doc.body, style, doc.name) == (GOLDEN / golden).read_text(encoding="utf-8")


def test_dot_empty():
    assert to_dot(empty_module(), "system", "Empty") == (GOLDEN / "empty.dot").read_text(encoding="utf-8")


EDGE = re.compile(r"^\s*(n\d+) -> (n\d+);$")


def dot_edges(text):
    return [m.groups() for m in map(EDGE.match, text.splitlines()) if m]


def is_acyclic(edges):
    graph = {}
    for a, b in edges:
        graph.setdefault(a, set()).add(b)
    state = {}

    def visit(x):
        state[x] = 1
        for y in graph.get(x, ()):
            if state.get(y) == 1 or (y not in state and not visit(y)):
                return False
        state[x] = 2
        return True

    return all(x in state or visit(x) for x in list(graph))


def test_r1_dot_census(fx):
    text = to_dot(fx("r1"), "run", "R1")
    assert text.count("shape=box") == 4
    assert text.count("shape=circle") == 9
    assert len(dot_edges(text)) == len(fx("r1").arcs)
    assert is_acyclic(dot_edges(text))


def test_run_style_needs_acyclic_module(fx):
    import graphlib
    with pytest.raises(graphlib.CycleError):
        to_dot(fx("global"), "run")


def test_dot_keeps_interface_order(fx):
    text = to_dot(fx("r1"), "system", "R1")
    right = text.split("cluster_right")[1].split("}")[0]
    labels = re.findall(r'label="([^"]+)"\]', right)
    assert labels == ["shelf empty", "aide free", "ready"]


@given(modules())
def test_parser_only_accepts_valid_modules(m):
    assert is_valid(parse_module(serialize_module(m)).body)


@settings(max_examples=25)
@given(modules(max_places=3, max_transitions=2))
def test_run_dot_is_acyclic(m):
    rs = runs_upto(m, 3)
    for cf in rs:
        assert is_acyclic(dot_edges(to_dot(rs.module(cf), "run")))
