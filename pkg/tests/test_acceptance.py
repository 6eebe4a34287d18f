"""The fifteen acceptance criteria, one test each.

Every test prints a single ``PASS [n] title`` or ``FAIL [n] title`` line so
the verdicts are visible in a plain ``pytest -v`` run.  Criteria that are
only meaningful over F2 switch to F2 internally; the rest run over F2 here
(the CLI ``harness`` command runs the same suite over any field).
"""

import time

import pytest

from dgkernels.harness import CRITERIA, SUITES, run_criterion
from dgkernels.linalg import Field

FIELD = Field(2)


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"{c.number:02d}")
def test_criterion(criterion, capsys):
    start = time.perf_counter()
    rep = run_criterion(criterion.number, FIELD)
    elapsed = time.perf_counter() - start
    line = f"{'PASS' if rep.ok else 'FAIL'} [{criterion.number}] {criterion.title} ({elapsed:.2f}s)"
    with capsys.disabled():
        print("\n" + line, end=" ")
    failed = [(v.check, v.detail) for v in rep.failures()]
    assert rep.ok, failed


def test_suite_covers_all_criteria():
    assert sorted(SUITES["paper-lemmas"]) == list(range(1, 16))
    assert [c.number for c in CRITERIA] == list(range(1, 16))
