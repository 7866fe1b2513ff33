"""The twelve acceptance checks at their stated sizes and time budgets.

Each check prints one PASS/FAIL line; the lines are repeated in the terminal
summary so they show up without ``-s``."""

import pytest

from efftop.checks import CHECKS, run_check

LINES: list[str] = []


@pytest.mark.parametrize("number", [c[0] for c in CHECKS],
                         ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CHECKS])
def test_criterion(number):
    result = run_check(number)
    LINES.append(result.line())
    print(result.line())
    assert result.passed, result.line()
