"""One test per acceptance criterion, each at its contract tolerance.

Every test prints a single PASS/FAIL line; the lines are repeated in the
``acceptance criteria`` section of the pytest summary.  Run this file
directly to get only the lines.
"""

import pytest

from rimech import acceptance

NUMBERS = sorted(acceptance.CRITERIA)


@pytest.mark.parametrize("number", NUMBERS, ids=[f"criterion_{n}" for n in NUMBERS])
def test_criterion(number, record_criterion):
    result = record_criterion(acceptance.CRITERIA[number]())
    if not result.passed and result.note:
        print(f"  note: {result.note}")
    assert result.passed, result.line()


if __name__ == "__main__":
    for res in acceptance.run_all():
        print(res.line())
