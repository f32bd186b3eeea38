"""Shared fixtures: the function roster used by the suite-wide identity
tests, the standard bias values, and the acceptance announcer."""

from fractions import Fraction

import pytest

import ctlab

# One spec per family, several sizes where cheap; everything here has n <= 12.
ROSTER = (
    "dictator:1",
    "dictator:3",
    "and:2",
    "and:4",
    "or:2",
    "or:3",
    "majority:3",
    "majority:5",
    "parity:2",
    "parity:4",
    "threshold:4,2",
    "threshold:5,3",
    "tribes:2,2",
    "tribes:2,3",
    "tribes:3,2",
    "graph-triangle:4",
    "graph-connected:4",
    "random-monotone-dnf:8,4,3,12345",
)

NON_MONOTONE = ("parity:2", "parity:4")
MONOTONE_ROSTER = tuple(name for name in ROSTER if name not in NON_MONOTONE)

P_VALUES = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


@pytest.fixture(scope="session")
def roster():
    return [(name, ctlab.build(name)) for name in ROSTER]


@pytest.fixture(scope="session")
def monotone_roster():
    return [(name, ctlab.build(name)) for name in MONOTONE_ROSTER]


@pytest.fixture
def announce(capsys):
    """One visible pass/fail line per acceptance criterion."""

    def _announce(num: int, name: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"[criterion {num:02d}] {name}: {'PASS' if ok else 'FAIL'}", flush=True)
        suffix = f": {detail}" if detail else ""
        assert ok, f"criterion {num:02d} ({name}) failed{suffix}"

    return _announce
