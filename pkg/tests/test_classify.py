import pytest

from conftest import F101, semigroup_ring
from curveideals.classify import (
    THEOREM_A_ITEMS, ag_ng_test, canonical_ideal, enumerate_submodules, extension_of,
    gorenstein_extension_test, has_minimal_multiplicity, is_symmetric, ring_profile,
    strongly_reflexive_test, verify_canonical,
)
from curveideals.errors import BudgetExceededError, ComputationError, InputError
from curveideals.ideals import (
    blowup, colon, dual_profile, end_ring, integral_closure, is_isomorphic, mu,
    normalization_extension, trace_profile,
)
from curveideals.series import FieldSpec

F3, F5 = FieldSpec.prime(3), FieldSpec.prime(5)


def values(M, upto):
    return [a for a in range(M.lo, upto) if M.is_value(a)]


def dual_value_set(R, upto):
    # a is a value of ω iff F - a is not a value of R
    return [a for a in range(0, upto) if not R.is_value(R.frobenius - a)]


# -- canonical ideal ----------------------------------------------------------

def test_canonical_gorenstein(r456):
    w = canonical_ideal(r456)
    assert is_symmetric(r456)
    assert is_isomorphic(w, r456.one).iso


def test_canonical_type_two(r345):
    w = canonical_ideal(r345)
    assert values(w, 8) == [0, 1, 3, 4, 5, 6, 7]
    assert values(w, 8) == dual_value_set(r345, 8)
    assert mu(w) == 2 == r345.cm_type


def test_canonical_dvr():
    R = semigroup_ring(1)
    assert canonical_ideal(R) == R.one


@pytest.mark.parametrize("gens", [(5, 6, 7), (4, 6, 7, 9), (3, 7, 8), (5, 6, 14)])
def test_canonical_value_duality(gens):
    R = semigroup_ring(*gens)
    w = canonical_ideal(R)
    assert values(w, R.c0 + 5) == dual_value_set(R, R.c0 + 5)
    assert colon(w, w) == R.one
    assert R.one <= w <= R.normalization


def test_verify_canonical_rejects_wrong_module(r345):
    with pytest.raises(ComputationError):
        verify_canonical(r345, r345.one)


def test_canonical_non_monomial():
    R = semigroup_ring(4, 6, 7, field=F101)
    R2 = type(R).from_texts(F101, ["t^4", "t^6 + t^7", "t^9"])
    w = canonical_ideal(R2)
    assert mu(w) == R2.cm_type


# -- profiles -----------------------------------------------------------------

def test_profile_4_5_6(r456):
    p = ring_profile(r456)
    assert (p.e, p.type) == (4, 1)
    assert p.flags["isGorenstein"] and not p.flags["hasMinimalMultiplicity"]


def test_profile_4_5_6_7():
    p = ring_profile(semigroup_ring(4, 5, 6, 7))
    assert p.flags["hasMinimalMultiplicity"] and p.flags["conductorEqualsMaximal"]
    assert p.type == 3


def test_profile_3_4_5(r345):
    p = ring_profile(r345)
    assert p.e == 3 == p.embdim
    assert p.type == 2 and p.flags["hasMinimalMultiplicity"]
    d = p.to_dict()
    assert d["valueSet"] == [0] and d["conductorExponent"] == 3


def test_profile_flag_implications():
    for gens in [(3, 4, 5), (4, 5, 6), (5, 6, 7), (4, 6, 7, 9), (3, 7, 8), (1,)]:
        R = semigroup_ring(*gens)
        f = ring_profile(R).flags
        if f["isAlmostGorenstein"]:
            assert f["isNearlyGorenstein"]
        assert f["isGorenstein"] == is_symmetric(R) == is_isomorphic(canonical_ideal(R), R.one).iso
        assert f["hasMinimalMultiplicity"] == has_minimal_multiplicity(R)


def test_ag_ng(r345, r456):
    assert ag_ng_test(r345)["almostGorenstein"]
    res = ag_ng_test(r456)
    assert res["almostGorenstein"] and res["nearlyGorenstein"]
    res = ag_ng_test(semigroup_ring(1))
    assert res["almostGorenstein"] and res["nearlyGorenstein"]


def test_not_almost_gorenstein():
    # pseudo-Frobenius numbers of ⟨3,7,8⟩ are {4, 5}; 5 - 4 = 1 is not among them
    assert not ag_ng_test(semigroup_ring(3, 7, 8))["almostGorenstein"]
    # ⟨4,6,7,9⟩ has pseudo-Frobenius numbers {2, 3, 5}, symmetric about 5
    assert ag_ng_test(semigroup_ring(4, 6, 7, 9))["almostGorenstein"]


# -- extensions ---------------------------------------------------------------

def _standard_extensions(R):
    yield "R", extension_of(R, R.one)
    yield "End(m)", end_ring(R.maximal_ideal)
    yield "B(omega)", blowup(canonical_ideal(R)).B
    yield "V", normalization_extension(R)


@pytest.mark.parametrize("gens", [(3, 4, 5), (4, 5, 6), (5, 6, 7), (4, 6, 7, 9)])
def test_theorem_a_consistency(gens):
    R = semigroup_ring(*gens)
    gor = R.cm_type == 1
    for name, S in _standard_extensions(R):
        rep = strongly_reflexive_test(R, S)
        assert rep.consistent, (name, rep.criteria)
        assert set(rep.criteria) == set(THEOREM_A_ITEMS)
        if name in ("V", "B(omega)"):
            assert rep.value is True
        if name == "R":
            assert rep.value is gor


def test_extension_from_generators(r456):
    S = extension_of(r456, ["t^7"])
    assert S.ideal == end_ring(r456.maximal_ideal).ideal
    with pytest.raises(InputError):
        extension_of(r456, ["t^-1"])


def test_gorenstein_extension(r345, r456):
    assert gorenstein_extension_test(r345, normalization_extension(r345)) == \
        {"gorenstein": True, "ulrichSide": True}
    S = end_ring(r345.maximal_ideal)
    assert S.ideal == r345.normalization
    assert gorenstein_extension_test(r345, S)["gorenstein"]
    res = gorenstein_extension_test(r456, end_ring(r456.maximal_ideal))
    assert res == {"gorenstein": False, "ulrichSide": False}


def test_gorenstein_extension_needs_reflexive():
    R = semigroup_ring(5, 6, 7)
    S = extension_of(R, ["t^3"])
    assert not dual_profile(S.ideal).is_reflexive
    with pytest.raises(InputError):
        gorenstein_extension_test(R, S)


# -- enumeration --------------------------------------------------------------

def test_trace_ideals_4_6_7_9():
    R = semigroup_ring(4, 6, 7, 9, field=F101)
    rep = enumerate_submodules(R, ["trace"])
    assert set(rep.lists["trace"]) == {R.conductor, R.maximal_ideal, R.one}
    assert rep.counts["trace"] == 3


def test_trace_ideals_4_5_6_7():
    R = semigroup_ring(4, 5, 6, 7, field=F101)
    rep = enumerate_submodules(R, ["trace"])
    assert set(rep.lists["trace"]) == {R.maximal_ideal, R.one}


def test_integrally_closed_4_5_6():
    R = semigroup_ring(4, 5, 6, field=F5)
    rep = enumerate_submodules(R)
    closed = rep.lists["integrallyClosed"]
    assert [I.lo for I in closed] == [4, 5, 6, 8]
    assert closed[0] == R.maximal_ideal and closed[-1] == R.conductor
    refl = rep.lists["reflexiveTrace"]
    for a in range(1, 5):
        I = R.ideal(f"t^4 - {a}*t^5", "t^6")
        assert I in refl and integral_closure(I) != I
    for I in rep.lists["trace"]:
        assert trace_profile(I).is_trace_ideal
    for I in refl:
        assert dual_profile(I).is_reflexive
    for I in closed:
        assert integral_closure(I) == I


@pytest.mark.parametrize("gens", [(4, 5, 6), (3, 5, 7), (4, 6, 7, 9), (5, 6, 7), (3, 4)])
@pytest.mark.parametrize("field", [F3, F5])
def test_sweeps_agree(gens, field):
    R = semigroup_ring(*gens, field=field)
    a = enumerate_submodules(R, ["trace", "reflexiveTrace"], sweep="conductor")
    b = enumerate_submodules(R, ["trace", "reflexiveTrace"], sweep="normalization")
    assert a.lists == b.lists
    assert [len(c) for c in a.iso_classes] == [len(c) for c in b.iso_classes]


def test_iso_classes_partition():
    R = semigroup_ring(4, 5, 6, field=F5)
    rep = enumerate_submodules(R, ["trace"])
    members = [I for cls in rep.iso_classes for I in cls]
    assert sorted(map(repr, members)) == sorted(map(repr, rep.lists["trace"]))
    for cls in rep.iso_classes:
        for I in cls[1:]:
            assert is_isomorphic(cls[0], I).iso


def test_enumeration_errors(r456):
    with pytest.raises(InputError):
        enumerate_submodules(r456)
    R = semigroup_ring(4, 5, 6, field=F101)
    with pytest.raises(BudgetExceededError):
        enumerate_submodules(R, ["trace"], budget=10)
    with pytest.raises(InputError):
        enumerate_submodules(R, ["bogus"])
    with pytest.raises(InputError):
        enumerate_submodules(semigroup_ring(7, 8, 9, 10, 11, 12, 13, field=F5), colength_bound=0)
