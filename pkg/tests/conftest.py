from pathlib import Path

import pytest

from geonlogic import lattice as lc

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


@pytest.fixture
def mo2():
    return lc.mo_lattice(2, [("X+", "X-"), ("Y+", "Y-")])


@pytest.fixture(scope="session")
def configs():
    return CONFIGS


def brute_glb(L, a, b):
    """Greatest lower bound straight from the order relation."""
    lows = [c for c in range(L.n) if L.leq[c, a] and L.leq[c, b]]
    (g,) = [c for c in lows if all(L.leq[d, c] for d in lows)]
    return g


def brute_lub(L, a, b):
    ups = [c for c in range(L.n) if L.leq[a, c] and L.leq[b, c]]
    (g,) = [c for c in ups if all(L.leq[c, d] for d in ups)]
    return g


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, label, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{num}] {label:44s} {detail}")
