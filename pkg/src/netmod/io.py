"""The line-oriented ``.netmod`` text format.

::

    # comment
    module Baker
    place ready "ready"
    trans bake "bake"
    arc ready -> bake
    left ready
    right ...

``left``/``right`` list interface members in interface order; each may
appear at most once (absent means empty). Ids match ``[A-Za-z0-9_]+``;
labels are double-quoted JSON strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .interface import Kind, Label
from .module import Element, NetModule, check, validate

ID_RE = re.compile(r"[A-Za-z0-9_]+")
_STRING = r'"(?:[^"\\]|\\.)*"'
_LINE_RES = {
    "module": re.compile(r"module\s+(?P<name>[A-Za-z0-9_]+)\s*$"),
    "place": re.compile(rf"place\s+(?P<id>\S+)\s+(?P<label>{_STRING})\s*$"),
    "trans": re.compile(rf"trans\s+(?P<id>\S+)\s+(?P<label>{_STRING})\s*$"),
    "arc": re.compile(r"arc\s+(?P<src>\S+)\s*->\s*(?P<dst>\S+)\s*$"),
    "left": re.compile(r"left(?P<ids>(\s+\S+)*)\s*$"),
    "right": re.compile(r"right(?P<ids>(\s+\S+)*)\s*$"),
}


@dataclass(frozen=True)
class ParseIssue:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ModuleParseError(ValueError):
    def __init__(self, issues: list[ParseIssue], source: str = "<text>"):
        self.issues = issues
        self.source = source
        super().__init__("\n".join(f"{source}:{i}" for i in issues))


@dataclass(frozen=True)
class ModuleDocument:
    name: str
    body: NetModule
    spans: dict = field(default_factory=dict, compare=False)


def parse_module(text: str, source: str = "<text>") -> ModuleDocument:
    issues: list[ParseIssue] = []
    name = None
    elems: list[Element] = []
    spans: dict[str, tuple[int, int]] = {}
    arcs: dict[tuple[str, str], tuple[int, int]] = {}
    sides: dict[str, tuple[list[str], int]] = {}

    def bad_id(x: str, lineno: int, col: int) -> bool:
        if ID_RE.fullmatch(x):
            return False
        issues.append(ParseIssue(lineno, col, f"invalid id {x!r}"))
        return True

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        keyword = stripped.split(None, 1)[0]
        rx = _LINE_RES.get(keyword)
        m = rx.match(stripped) if rx else None
        if m is None:
            issues.append(ParseIssue(lineno, col, f"syntax error: cannot parse {stripped!r}"))
            continue
        if keyword == "module":
            if name is not None:
                issues.append(ParseIssue(lineno, col, "duplicate module header"))
            name = m["name"]
        elif keyword in ("place", "trans"):
            x = m["id"]
            if bad_id(x, lineno, col):
                continue
            if x in spans:
                issues.append(ParseIssue(lineno, col, f"duplicate id {x!r} (first declared on line {spans[x][0]})"))
                continue
            try:
                lab = Label(Kind.PLACE if keyword == "place" else Kind.TRANSITION, json.loads(m["label"]))
            except ValueError as exc:
                issues.append(ParseIssue(lineno, col, f"bad label: {exc}"))
                continue
            spans[x] = (lineno, col)
            elems.append(Element(x, lab))
        elif keyword == "arc":
            a = (m["src"], m["dst"])
            if bad_id(a[0], lineno, col) or bad_id(a[1], lineno, col):
                continue
            if a in arcs:
                issues.append(ParseIssue(lineno, col, f"duplicate arc {a[0]} -> {a[1]}"))
                continue
            arcs[a] = (lineno, col)
        else:
            if keyword in sides:
                issues.append(ParseIssue(lineno, col, f"duplicate {keyword} interface line"))
                continue
            ids = m["ids"].split()
            if any(bad_id(x, lineno, col) for x in ids):
                continue
            sides[keyword] = (ids, lineno)

    if name is None and not issues:
        issues.append(ParseIssue(1, 1, "missing 'module <Name>' header"))
    left, lline = sides.get("left", ([], 0))
    right, rline = sides.get("right", ([], 0))
    module = NetModule(tuple(elems), frozenset(arcs), tuple(left), tuple(right))
    if not issues:
        for v in validate(module):
            if v.severity != "error":
                continue
            if v.rule in ("dangling arc", "bipartiteness"):
                ln, c = arcs[v.subject]
            elif v.rule in ("dangling interface reference", "duplicate interface entry"):
                ln = lline if (v.subject == "left" or v.subject in left) else rline
                c = 1
            else:
                ln, c = spans.get(v.subject, (1, 1))
            issues.append(ParseIssue(ln, c, f"{v.rule}: {v.message}"))
    if issues:
        raise ModuleParseError(issues, source)
    return ModuleDocument(name, module, spans)


def _strip_comment(raw: str) -> str:
    in_str = esc = False
    for i, ch in enumerate(raw):
        if esc:
            esc = False
        elif ch == "\\" and in_str:
            esc = True
        elif ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            return raw[:i]
    return raw


def load_module(path: Union[str, Path]) -> ModuleDocument:
    path = Path(path)
    return parse_module(path.read_text(encoding="utf-8"), str(path))


def _has_plain_ids(m: NetModule) -> bool:
    return all(isinstance(x, str) and ID_RE.fullmatch(x) for x in m.ids)


def serialize_module(m: NetModule, name: str = "M") -> str:
    """Canonical text: elements by kind then id, arcs sorted, interfaces in order.

    Modules whose ids are not plain identifiers (e.g. composition results)
    are renumbered first.
    """
    check(m)
    if not _has_plain_ids(m):
        m = m.renumbered()
    lines = [f"module {name}"]
    for kind, kw in ((Kind.PLACE, "place"), (Kind.TRANSITION, "trans")):
        for e in sorted((e for e in m.elements if e.kind is kind), key=lambda e: e.id):
            lines.append(f"{kw} {e.id} {json.dumps(e.label.name, ensure_ascii=False)}")
    for s, t in sorted(m.arcs):
        lines.append(f"arc {s} -> {t}")
    lines.append(" ".join(["left", *m.left]).rstrip())
    lines.append(" ".join(["right", *m.right]).rstrip())
    return "\n".join(lines) + "\n"
