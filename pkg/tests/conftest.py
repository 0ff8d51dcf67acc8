from __future__ import annotations

from pathlib import Path

import pytest

from clustercat.quiver import Quiver
from clustercat.reps import Algebra

QUIVER_DIR = Path(__file__).resolve().parents[1] / "quivers"

QUIVERS = {
    "A2": Quiver(2, ((2, 1),)),
    "A3": Quiver(3, ((2, 1), (3, 2))),
    "A4": Quiver(4, ((2, 1), (3, 2), (4, 3))),
    "D4": Quiver(4, ((2, 1), (3, 1), (4, 1))),
    "K": Quiver(2, ((1, 2), (1, 2))),
    "A22": Quiver(4, ((1, 2), (3, 2), (3, 4), (1, 4))),
    "A31": Quiver(4, ((1, 2), (2, 3), (3, 4), (1, 4))),
    "K3": Quiver(2, ((1, 2), (1, 2), (1, 2))),
}

BOUNDS = {"K": 6}

_ALGEBRAS: dict[str, Algebra] = {}


def algebra(name: str) -> Algebra:
    """Shared algebra per quiver, so expensive caches are built once per session."""
    if name not in _ALGEBRAS:
        _ALGEBRAS[name] = Algebra(QUIVERS[name], bound=BOUNDS.get(name, 8))
    return _ALGEBRAS[name]


@pytest.fixture
def a3() -> Algebra:
    return algebra("A3")


@pytest.fixture
def quiver_dir() -> Path:
    return QUIVER_DIR


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, note = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} {note}")
