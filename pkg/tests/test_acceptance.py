"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 2 and 5 contain sub-checks that are kept in their literal stated
form although the reference chains cannot meet them (details in the
criterion docstrings in nhtopo.acceptance and in the failure messages);
those two tests are expected to fail and are deliberately not masked.
"""

import pytest

from nhtopo.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize(
    "number", [entry[0] for entry in CRITERIA], ids=lambda n: f"criterion_{n}"
)
def test_acceptance(number):
    result = run_criterion(number)
    print(result.line())
    assert result.ok, result.detail
