import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import F101, Q, semigroup_ring
from curveideals.errors import InputError, NormalizationError
from curveideals.ideals import (
    FracIdeal, blowup, colon, colon_in_ring, contract, core, dual, dual_profile,
    end_ring, ideal_arith, ideal_from_gens, integral_closure, is_isomorphic, is_ulrich, length,
    multiplicity, mu, normalization_extension, principal, principal_reduction, ring_new, trace,
    trace_profile,
)
from curveideals.sampling import random_ideal
from curveideals.series import FieldSpec, parse_series


def values(M, upto):
    return [a for a in range(M.lo, upto) if M.is_value(a)]


def semigroup(gens, upto):
    out = {0}
    for n in range(upto):
        if any(n - g in out for g in gens if n >= g):
            out.add(n)
    return sorted(out)


def i_a(R, a):
    return R.ideal(f"t^4 - {a}*t^5", "t^6")


# -- rings --------------------------------------------------------------------

def test_ring_4_5_6(r456):
    assert values(r456.one, 12) == [0, 4, 5, 6, 8, 9, 10, 11]
    assert (r456.frobenius, r456.c0, r456.multiplicity) == (7, 8, 4)
    assert length(r456.one, r456.conductor) == 4
    assert r456.conductor == r456.maximal_ideal ** 2


def test_ring_conductor_11():
    R = semigroup_ring(6, 8, 11, 13, 15)
    assert R.c0 == 11
    assert R.conductor == R.tail_ideal(11)
    assert R.conductor == R.ideal(*[f"t^{j}" for j in range(11, 17)])


def test_dvr():
    R = semigroup_ring(1)
    assert (R.frobenius, R.c0, R.multiplicity) == (-1, 0, 1)
    assert R.is_dvr and R.one == R.normalization


@pytest.mark.parametrize("gens", [(3, 4, 5), (5, 6, 7), (4, 6, 7, 9), (3, 5), (5, 6, 14)])
def test_value_set_matches_semigroup(gens):
    R = semigroup_ring(*gens)
    upto = R.c0 + 10
    assert values(R.one, upto) == semigroup(gens, upto)


def test_non_monomial_ring():
    # k[[t^4, t^6 + t^7]]: values 0,4,6,8,10,12,13,14,16,17,18,19,20,...
    R = ring_new(Q, ["t^4", "t^6+t^7"])
    assert R.multiplicity == 4
    assert R.is_value(13) and not R.is_value(7) and not R.is_value(11)


def test_ring_errors():
    with pytest.raises(NormalizationError):
        ring_new(Q, ["t^2", "t^4"])
    with pytest.raises(InputError):
        ring_new(Q, ["1", "t^3"])
    with pytest.raises(InputError):
        ring_new(Q, [])


def test_invariants(r456, r345, r567):
    assert (r456.embedding_dimension, r456.cm_type) == (3, 1)
    assert (r345.embedding_dimension, r345.cm_type) == (3, 2)
    assert semigroup_ring(3, 4).cm_type == 1
    assert r567.embedding_dimension == 3


# -- ideals -------------------------------------------------------------------

def test_ideal_from_gens(r567, r456):
    I = r567.ideal("t^5", "t^7")
    assert values(I, 20) == [5, 7, *range(10, 20)]
    assert r567.ideal("1") == r567.one
    assert values(r456.maximal_ideal, 12) == [4, 5, 6, 8, 9, 10, 11]


def test_ideal_needs_nonzero_generator(r456):
    with pytest.raises(InputError):
        ideal_from_gens(r456, [parse_series("0", Q)])


def test_arith_examples(r456):
    R = semigroup_ring(5, 6, 14)
    m = R.maximal_ideal
    assert values(m * m, 20) == [10, 11, 12, 15, 16, 17, 18, 19]
    S = semigroup_ring(6, 8, 11, 13, 15)
    n = S.maximal_ideal
    assert n ** 2 * S.element("t^6") == n ** 3
    m = r456.maximal_ideal
    assert ideal_arith("sum", m, r456.one) == r456.one
    assert ideal_arith("intersect", m, r456.conductor) == r456.conductor
    assert ideal_arith("product", m, r456.normalization) == r456.tail_ideal(4)


def test_colon_examples(r567):
    I = r567.ideal("t^5", "t^7")
    assert colon(r567.ideal("t^5"), I) == r567.ideal("t^5", "t^13", "t^14")
    R = semigroup_ring(5, 6, 14)
    d = dual(R.maximal_ideal ** 2)
    assert values(d, 12) == [0, 4, 5, 6, 7, 8, 9, 10, 11]
    assert colon(R.one, R.one) == R.one


def test_dual_profiles(r567):
    R = semigroup_ring(5, 6, 14)
    m2 = R.maximal_ideal ** 2
    prof = dual_profile(m2)
    t14 = R.element("t^14")
    assert not prof.is_reflexive
    assert t14 in prof.bidual and t14 not in m2
    I = r567.ideal("t^5", "t^7")
    assert dual_profile(I).bidual == r567.maximal_ideal
    assert dual_profile(r567.ideal("t^6 + t^7")).is_reflexive


def test_dual_of_m2_in_conductor_11_ring():
    R = semigroup_ring(6, 8, 11, 13, 15)
    m2 = R.maximal_ideal ** 2
    assert dual(m2) == R.conductor.shift(-12)
    assert R.element("t^13") in dual_profile(m2).bidual
    assert R.element("t^13") not in m2


def test_trace_examples(r567, r456, r345):
    I = r567.ideal("t^5", "t^7")
    tp = trace_profile(I)
    assert tp.trace == I and tp.is_trace_ideal
    for R in (r567, r456, r345):
        assert trace(R.maximal_ideal) == R.maximal_ideal
        assert trace(R.one) == R.one


def test_integral_closure(r456):
    m = r456.maximal_ideal
    for a in (1, 2, 5):
        assert integral_closure(i_a(r456, a)) == m
    assert integral_closure(r456.conductor) == r456.conductor
    assert integral_closure(r456.ideal("t^8")) == r456.conductor


def test_reduction(r456):
    red = principal_reduction(r456.maximal_ideal)
    assert red.x == r456.element("t^4") and red.reduction_number == 2
    assert principal_reduction(r456.ideal("t^5+t^9")).reduction_number == 0
    I = i_a(r456, 2)
    x = principal_reduction(I).x
    assert x == r456.element("t^4 - 2*t^5")


def test_length(r456):
    assert length(r456.one, r456.conductor) == 4
    assert length(r456.one, i_a(r456, 3)) == 2
    assert length(r456.maximal_ideal, r456.maximal_ideal) == 0
    with pytest.raises(InputError):
        length(r456.conductor, r456.one)


def test_multiplicity(r456):
    assert multiplicity(r456.maximal_ideal, r456.one) == 4
    # ℓ(R/t^8 R): values of R that are not 8 + a value of R
    vals = semigroup((4, 5, 6), 40)
    shifted = {8 + v for v in vals}
    expected = len([v for v in vals if v < 30 and v not in shifted])
    assert expected == 8
    assert multiplicity(r456.ideal("t^8"), r456.one) == expected
    assert multiplicity(r456.maximal_ideal, r456.normalization) == 4


def test_mu(r456, r345):
    assert mu(r456.maximal_ideal) == 3
    assert mu(r456.normalization) == 4
    assert mu(r345.ideal("t^3")) == 1


def test_ulrich(r456, r567):
    for R in (r456, r567):
        for I in (R.maximal_ideal, R.ideal("t^6", "t^8"), R.conductor):
            assert is_ulrich(R.normalization, I)
            assert is_ulrich(R.conductor, I)
        assert not is_ulrich(R.one, R.maximal_ideal)
    assert is_ulrich(r456.one, r456.ideal("t^5"))


def test_blowup(r456):
    bu = blowup(r456.maximal_ideal)
    assert bu.B.ideal == r456.normalization
    assert bu.b == r456.conductor
    assert blowup(r456.ideal("t^4+t^5")).B.ideal == r456.one
    assert blowup(r456.conductor).B.ideal == r456.normalization


def test_blowup_with_delayed_stabilization(r567):
    from curveideals.classify import canonical_ideal
    w = canonical_ideal(r567)
    x = principal_reduction(w).x
    B = blowup(w).B.ideal
    r = principal_reduction(w).reduction_number
    assert B == colon(w ** r, principal(r567, x) ** r)


def test_core(r456, r567):
    for R in (r456, r567):
        P = R.ideal("t^5")
        assert core(P) == P
    assert core(r456.maximal_ideal) == r456.tail_ideal(12)
    rng = random.Random(3)
    for _ in range(5):
        I = random_ideal(r567, rng)
        assert core(I) <= I


def test_core_characteristic_guard():
    R = semigroup_ring(4, 5, 6, field=FieldSpec.prime(2))
    with pytest.raises(InputError):
        core(R.maximal_ideal)


def test_end_ring(r456, r4679):
    assert values(end_ring(r456.maximal_ideal).ideal, 12) == semigroup((4, 5, 6, 7), 12)
    E = end_ring(r4679.maximal_ideal)
    assert values(E.ideal, 12) == semigroup((2, 3), 12)
    assert E.ring.c0 == 2
    assert end_ring(r456.one).ideal == r456.one
    assert normalization_extension(r456).ring.is_dvr


def test_isomorphism(r567):
    R = semigroup_ring(6, 8, 11, 13, 15)
    d = dual(R.maximal_ideal ** 2)
    res = is_isomorphic(d, R.conductor)
    assert res.iso and principal(R, res.witness) * R.conductor == d
    I = r567.ideal("t^5", "t^7")
    assert is_isomorphic(dual_profile(I).bidual, r567.maximal_ideal).iso
    assert not is_isomorphic(I, r567.maximal_ideal).iso
    assert is_isomorphic(I, r567.ideal("t^6", "t^8")).iso


def test_contract(r456):
    S = end_ring(r456.maximal_ideal)
    for a in (1, 2):
        I = i_a(r456, a)
        c = contract(I, S)
        assert c.J == I and c.colength_two_criterion is True
        assert length(S.ideal, I * S.ideal) == 3
    c = contract(r456.conductor, normalization_extension(r456))
    assert c.J == r456.conductor and c.colength_two_criterion is None


def test_field_mismatch_between_rings(r456):
    other = semigroup_ring(4, 5, 6, field=F101)
    with pytest.raises(InputError):
        colon(r456.one, other.one)


# -- properties over random ideals --------------------------------------------

RINGS = {g: semigroup_ring(*g) for g in [(3, 4, 5), (4, 5, 6), (5, 6, 7), (3, 5)]}
ring_and_seed = st.tuples(st.sampled_from(sorted(RINGS)), st.integers(0, 10_000))


def _pick(rs, k=1):
    gens, seed = rs
    R = RINGS[gens]
    rng = random.Random(seed)
    return R, [random_ideal(R, rng) for _ in range(k)]


@settings(max_examples=25)
@given(ring_and_seed)
def test_canonical_form(rs):
    R, (M,) = _pick(rs)
    tail = [R.element(f"t^{j}") for j in range(M.h, M.h + R.multiplicity)]
    assert ideal_from_gens(R, [*M.basis_series(), *tail]) == M
    assert ideal_from_gens(R, M.generator_series()) == M
    N = FracIdeal.canonical(R, M.space(M.lo - 2, M.h + 3))
    assert (N.lo, N.h, N.model) == (M.lo, M.h, M.model)


@settings(max_examples=25)
@given(ring_and_seed)
def test_dual_stability_and_trace_idempotence(rs):
    R, (M,) = _pick(rs)
    assert dual(dual_profile(M).bidual) == dual(M)
    assert trace(trace(M)) == trace(M)
    assert R.conductor <= trace(M) <= R.one


@settings(max_examples=25)
@given(ring_and_seed)
def test_trace_formula(rs):
    R, (I,) = _pick(rs)
    x = principal_reduction(I).x
    X = principal(R, x)
    assert trace(I) == colon_in_ring(I * colon_in_ring(X, I), X)


@settings(max_examples=25)
@given(ring_and_seed)
def test_closure_is_reflexive(rs):
    R, (I,) = _pick(rs)
    J = integral_closure(I)
    assert I <= J and integral_closure(J) == J
    assert dual_profile(J).is_reflexive


@settings(max_examples=20)
@given(ring_and_seed)
def test_arith_laws(rs):
    R, (M, N) = _pick(rs, 2)
    assert M & N <= M <= M + N
    assert M * N == N * M
    assert colon(M * N, N) >= M
    assert length(M + N, M) == length(N, M & N)
    assert (M * N).tail <= min(M.tail + N.lo, N.tail + M.lo)
