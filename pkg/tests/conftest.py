import pytest
from hypothesis import strategies as st

from netmod import InterfaceView, place_label
from netmod.fixtures import fixture
from netmod.harness import GenParams, random_module


@pytest.fixture
def fx():
    return fixture


def interfaces(prefix="a", alphabet="xyz", max_size=6):
    """Interfaces over a small label alphabet, ids ``prefix0, prefix1, ...``."""
    return st.lists(st.sampled_from(alphabet), max_size=max_size).map(
        lambda names: InterfaceView(
            tuple((f"{prefix}{i}", place_label(n)) for i, n in enumerate(names))
        )
    )


def modules(**bounds):
    params = GenParams(**bounds) if bounds else GenParams()
    return st.integers(0, 2**32).map(lambda s: random_module(GenParams(**{**params.__dict__, "seed": s})))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
