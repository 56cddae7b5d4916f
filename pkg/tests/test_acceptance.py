"""One test per acceptance criterion, each at its stated tolerance and time budget.

Every criterion prints one PASS/FAIL line. Set FFM_FULL_GRID=1 to run the
character criteria (3, 4, 5) over every irreducible modulus in the grid.
"""

import pytest

from ffmoments.acceptance import CRITERIA, DEFAULT_CONFIG


@pytest.mark.slow
@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda fn: f"criterion_{int(fn.__name__[1:]):02d}")
def test_criterion(criterion, criterion_log):
    result = criterion(DEFAULT_CONFIG)
    line = result.line()
    print(line)
    criterion_log.append(line)
    assert result.passed, result.report()
