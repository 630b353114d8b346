"""Modules of the bakery running example and a few negative controls."""

from __future__ import annotations

from importlib import resources

from .io import ModuleDocument, parse_module
from .module import NetModule

NAMES = (
    "baker", "vendor", "global", "take_supply", "supply_move", "move_sell",
    "step_a", "step_b", "step_c", "step_d", "r1", "r2",
    "baker_2cycle", "vendor_2cycle",
    "swap_host", "swap_step_t", "swap_step_s",
    "crossed_host", "crossed_run",
)


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"no fixture named {name!r}")
    return resources.files(__package__).joinpath("fixtures", f"{name}.netmod").read_text("utf-8")


def fixture_document(name: str) -> ModuleDocument:
    return parse_module(fixture_text(name), f"{name}.netmod")


def fixture(name: str) -> NetModule:
    return fixture_document(name).body
