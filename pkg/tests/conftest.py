import random

import pytest
from hypothesis import strategies as st

from phocsearch.layout import FormulaLayout, SymbolPlacement

LABELS = ("x", "y", "z", "+", "=", "1", "2", "\\frac", "\\sqrt", "^")

# dyadic coordinates keep reflection and centering exact in binary floating point
coords = st.integers(min_value=-64, max_value=160).map(lambda v: v / 8)
sizes = st.sampled_from((0.0, 0.25, 0.5, 1.0, 1.5, 2.0))


@st.composite
def symbols(draw, labels=LABELS):
    return SymbolPlacement(draw(st.sampled_from(labels)), draw(coords), draw(coords), draw(sizes), draw(sizes))


@st.composite
def layouts(draw, max_symbols=10, labels=LABELS):
    syms = draw(st.lists(symbols(labels), min_size=1, max_size=max_symbols))
    return FormulaLayout("f", tuple(syms))


@pytest.fixture
def rng():
    return random.Random(20231)


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
