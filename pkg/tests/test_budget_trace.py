import math

import pytest

from contpath import Budget, BudgetExhausted, RunTrace
from contpath.trace import TRACE_HEADER


def test_charge_and_remaining():
    b = Budget(10)
    b.charge(3)
    assert (b.used, b.remaining) == (3, 7)
    assert b.affordable(7) and not b.affordable(7, reserve=1)


def test_overdraft_raises_and_leaves_counter():
    b = Budget(2)
    with pytest.raises(BudgetExhausted):
        b.charge(3)
    assert b.used == 0


def test_child_charges_parent_and_is_capped():
    parent = Budget(10)
    parent.charge(4)
    child = parent.child(100)
    assert child.limit == 6
    child.charge(5)
    assert parent.used == 9 and parent.remaining == 1
    with pytest.raises(BudgetExhausted):
        child.charge(2)


def test_child_sees_parent_spending():
    parent = Budget(10)
    child = parent.child(8)
    parent.charge(5)
    assert child.remaining == 5


def test_negative_limit_rejected():
    with pytest.raises(ValueError):
        Budget(-1)


def test_trace_running_minimum_and_nan():
    tr = RunTrace()
    tr.log(0, 0, 0.0, float("nan"))
    assert math.isnan(tr.best)
    tr.log(1, 2, 0.1, 5.0)
    tr.log(2, 4, 0.2, 7.0)
    tr.log(3, 6, 0.3, float("nan"))
    tr.log(4, 8, 0.4, 1.0)
    assert [r.f_best for r in tr.records[1:]] == [5.0, 5.0, 5.0, 1.0]


def test_trace_rejects_decreasing_evals():
    tr = RunTrace()
    tr.log(0, 5, 0.0, 1.0)
    with pytest.raises(ValueError):
        tr.log(1, 4, 0.0, 1.0)


def test_trace_csv_round_trip_exact():
    tr = RunTrace()
    tr.log(0, 0, 0.0, 0.1 + 0.2)
    tr.log(10, 21, 1 / 3, 1e-300)
    text = tr.to_csv()
    assert text.splitlines()[0] == ",".join(TRACE_HEADER)
    back = RunTrace.from_csv(text)
    assert back.records == tr.records
    assert back.to_csv() == text


def test_trace_csv_bad_header():
    with pytest.raises(ValueError):
        RunTrace.from_csv("a,b,c,d\n")
