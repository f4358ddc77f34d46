"""Acceptance criteria 1-10 at their stated tolerances.

Each test prints one PASS/FAIL line (also repeated in the terminal summary)
and fails when any of the criterion's checks fails.
"""
import pytest

from radnls.experiments import CRITERIA

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = CRITERIA[number]()
    line = res.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    for c in res.checks:
        print("    " + c.line())
    failing = [c.line() for c in res.checks if not c.passed]
    assert res.passed, "; ".join(failing)
