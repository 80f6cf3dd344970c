import pytest

from conftest import F101, semigroup_ring
from curveideals.battery import CHECK_NAMES, property_battery
from curveideals.errors import InputError


def test_dvr_passes_everything():
    rep = property_battery(semigroup_ring(1), seed=7, sample_count=10)
    assert rep.all_passed
    assert [c.name for c in rep.checks] == CHECK_NAMES


def test_small_ring_passes():
    rep = property_battery(semigroup_ring(4, 5, 6, field=F101), seed=0, sample_count=12)
    failing = [c.to_dict() for c in rep.checks if not c.ok]
    assert not failing


def test_corrupted_trace_formula_is_caught():
    R = semigroup_ring(5, 6, 7, field=F101)
    rep = property_battery(R, seed=0, sample_count=6, checks=["trace_formula"],
                           corrupt_trace_formula=True)
    res = rep.check("trace_formula")
    assert res.failed > 0 and "seed=0" in res.witness
    assert not rep.all_passed


def test_deterministic():
    R = semigroup_ring(3, 4, 5, field=F101)
    a = property_battery(R, seed=3, sample_count=5)
    b = property_battery(R, seed=3, sample_count=5)
    assert [c.to_dict() for c in a.checks] == [c.to_dict() for c in b.checks]


def test_unknown_check():
    with pytest.raises(InputError):
        property_battery(semigroup_ring(3, 4), checks=["no_such_check"])
