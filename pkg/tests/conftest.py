import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chiralsim.quantum import StateVec3, normalize  # noqa: E402

SQ2 = np.sqrt(2.0)


@pytest.fixture
def minus_i3():
    """(|1> - i|3>)/sqrt 2, the left-handed state after the first pulse."""
    return normalize([1, 0, -1j])


@pytest.fixture
def plus_i3():
    """(|1> + i|3>)/sqrt 2, the right-handed state after the first pulse (and the dark state)."""
    return normalize([1, 0, 1j])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, scale=1.0):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return scale * 0.5 * (a + a.conj().T)


def random_state(rng):
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    return StateVec3(v / np.linalg.norm(v))


_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(ok, detail)`` then assert ``ok``."""

    def report(ok, detail):
        _CRITERIA.append((bool(ok), request.node.name, detail))
        assert ok, detail

    return report


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for ok, name, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
