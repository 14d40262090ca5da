"""Acceptance gate: one test per criterion, each backed by a reproduction item.

Every test prints a single PASS/FAIL line (visible with `pytest -s` or in the
captured output of a failing run) and asserts the item's verdict, so
`pytest tests/test_acceptance.py` is the acceptance suite. Criterion 12 is the
randomized/property item plus the dedicated property tests in the rest of the
suite.
"""
import time

import pytest

from radialtyz.reproduction import PASS, run_items

CRITERIA = [
    (1, "table-n2-h7"),
    (2, "table-n3-h5"),
    (2, "table-n4-h5"),
    (2, "table-n5-h4"),
    (3, "g4-at-1-signs"),
    (4, "eps-minus1-divergence"),
    (5, "noninteger-lambda-blowup"),
    (6, "ricci-flat-family"),
    (7, "curvature-norm-closed-form"),
    (8, "a3-vanishing-locus"),
    (9, "simanca-suite"),
    (10, "embedding-identity"),
    (11, "resolvability-criterion"),
    (12, "property-suite"),
]

# wall-clock budgets stated per criterion; items with "< 1 s" / "< 5 s"
# clauses also enforce them internally
BUDGETS = {
    "table-n2-h7": 1.0,
    "table-n3-h5": 1.0,
    "table-n4-h5": 1.0,
    "table-n5-h4": 1.0,
    "g4-at-1-signs": 5.0,
}


@pytest.mark.parametrize("criterion,item_id", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_acceptance(criterion, item_id):
    t0 = time.time()
    report = run_items(item_id)
    elapsed = time.time() - t0
    assert len(report.items) == 1
    item = report.items[0]
    status = item.status.upper()
    print(f"ACCEPTANCE {criterion:>2} [{item_id}]: {status} ({elapsed:.2f}s)")
    assert item.status == PASS, (
        f"criterion {criterion} ({item_id}) {status}: "
        f"expected {item.expected}; computed {item.computed}"
    )
    budget = BUDGETS.get(item_id)
    if budget is not None:
        assert item.runtime_s < budget, f"{item_id} exceeded {budget}s budget"
