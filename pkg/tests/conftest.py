"""Shared fixtures and the end-of-run acceptance summary."""

from __future__ import annotations

import pytest

import dsets as D

_ACCEPTANCE: list[tuple[int, str]] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    """Collect one pass/fail line per acceptance criterion for the summary."""
    status = "PASS" if ok else "FAIL"
    line = f"criterion {number} {status}: {title}"
    if detail:
        line += f" [{detail}]"
    _ACCEPTANCE.append((number, line))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE:
        terminalreporter.write_sep("-", "acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)


CATALOGUE_NAMES = (
    "CAT4",
    "CAT4E",
    "CAT4M",
    "CAT5",
    "CAT5L",
    "CAT5R",
    "CAT5X",
    "CAT5Y",
    "CAT6",
    "MIX",
    "STAR4",
    "FLW3",
    "FLW4",
    "FLW5",
    "FLW6",
    "FLW12",
)


@pytest.fixture(scope="session")
def catalogue():
    """Every named fixture, as {name: Fixture}."""
    return {name: D.gen_fixture(name) for name in CATALOGUE_NAMES}


@pytest.fixture(scope="session")
def trees_by_k():
    """Enumerated tree shapes, keyed by leaf count 1..8."""
    return {k: list(D.enum_trees(k)) for k in range(1, 9)}


@pytest.fixture(scope="session")
def mkwin():
    """Singleton-tuple window builder: mkwin([0,1,2,3,4])."""

    def make(seq):
        return D.SequenceWindow([(int(e),) for e in seq])

    return make
