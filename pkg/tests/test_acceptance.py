"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (run pytest with -s or check
captured output) and fails if the criterion misses its expected result
or blows its time budget.
"""

import pytest

from skewlrc import acceptance


def run_one(name):
    (res,) = acceptance.run_all(only=[name])
    status = "PASS" if res.ok else "FAIL"
    print(f"{status} {res.name}: {res.detail} ({res.seconds:.2f}s)")
    assert res.ok, res.detail
    assert res.seconds < res.budget, (
        f"{res.name} took {res.seconds:.1f}s, budget {res.budget}s")


@pytest.mark.parametrize("name", [name for name, _, _ in acceptance.CRITERIA])
def test_criterion(name):
    run_one(name)
