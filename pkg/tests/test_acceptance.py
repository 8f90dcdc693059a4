"""Acceptance criteria, each at its stated time limit; prints one pass/fail line per criterion."""

import pytest

from collat.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.within_limit, f"{result.seconds:.2f}s exceeds {result.limit:.0f}s"
