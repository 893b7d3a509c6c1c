"""Shared fixtures; collects one status line per acceptance criterion."""
from __future__ import annotations

import pytest

from lomse.params import LomseTriple, derive_params

_ACCEPTANCE: dict[int, str] = {}


def record(number: int, passed: bool, text: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {text}"
    _ACCEPTANCE[number] = line
    print(line)


@pytest.fixture
def params():
    """Factory: params(3, 2, 4) -> LomseParams."""
    def make(n, p, k):
        return derive_params(LomseTriple(n, p, k))
    return make


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
