import pytest
from hypothesis import given, strategies as st

from curveideals.errors import CapError, InputError
from curveideals.linalg import echelonize, stable_hull, subspace_ops
from curveideals.series import FieldSpec, TruncSeries, parse_series

Q = FieldSpec.rationals()
F5 = FieldSpec.prime(5)


def s(text, cap=30, field=Q):
    return parse_series(text, field, cap)


def test_echelonize_examples():
    E = echelonize([s("t^4+t^5"), s("t^5")], (0, 8))
    assert E.pivots == (4, 5)
    assert [b.coeffs for b in E.basis] == [{4: 1}, {5: 1}]
    assert echelonize([], (0, 8), Q).dim == 0
    E = echelonize([s("t^3"), s("2*t^3")], (0, 5))
    assert E.dim == 1 and [b.coeffs for b in E.basis] == [{3: 1}]


def test_echelonize_rejects_outside_window():
    with pytest.raises(CapError):
        echelonize([s("t^9")], (0, 8))
    with pytest.raises(CapError):
        echelonize([s("t^2", cap=5)], (0, 8))


def test_sum_intersect_member():
    A = echelonize([s("t^4")], (0, 8))
    B = echelonize([s("t^5")], (0, 8))
    assert subspace_ops("sum", A, B).pivots == (4, 5)
    # (t^4+t^5)a + t^6 b = t^4 c + t^6 d forces a = 0, so only span{t^6} survives
    A = echelonize([s("t^4+t^5"), s("t^6")], (0, 8))
    B = echelonize([s("t^4"), s("t^6")], (0, 8))
    assert subspace_ops("intersect", A, B) == echelonize([s("t^6")], (0, 8))
    assert subspace_ops("member", echelonize([s("t^4"), s("t^5")], (0, 8)), s("t^7")) is False
    assert subspace_ops("member", A, s("2*t^4+2*t^5-t^6")) is True


def test_quotient_dim():
    A = echelonize([s("t^4"), s("t^5"), s("t^6")], (0, 8))
    B = echelonize([s("t^5")], (0, 8))
    assert subspace_ops("quotient_dim", A, B) == 2
    with pytest.raises(InputError):
        subspace_ops("quotient_dim", B, A)


def test_hull_examples():
    gens = [s("t^4"), s("t^5"), s("t^6")]
    assert stable_hull([s("1")], gens, (0, 8), 8).pivots == (0, 4, 5, 6)
    H = stable_hull([s("t^5"), s("t^7")], [s("t^5"), s("t^6"), s("t^7")], (0, 15), 15)
    # 5+5, 5+6, 5+7, 7+6, 7+7 fill 10..14
    assert H.pivots == (5, 7, 10, 11, 12, 13, 14)
    seeds = [s("t^2+t^3"), s("t^3")]
    assert stable_hull(seeds, [], (0, 8), 8) == echelonize(seeds, (0, 8))


# -- properties ---------------------------------------------------------------

WIDTH = 7
vecs = st.lists(st.lists(st.integers(0, 4), min_size=WIDTH, max_size=WIDTH), max_size=5)


def _space(rows):
    return echelonize([TruncSeries.from_dense(F5, 0, F5.array(r), WIDTH) for r in rows], (0, WIDTH), F5)


@given(vecs)
def test_idempotence(rows):
    S = _space(rows)
    assert echelonize(S.basis, (0, WIDTH), F5) == S


@given(vecs, vecs)
def test_modularity(ra, rb):
    A, B = _space(ra), _space(rb)
    assert A.dim + B.dim == subspace_ops("sum", A, B).dim + subspace_ops("intersect", A, B).dim


@given(vecs, vecs)
def test_intersection_inside_both(ra, rb):
    A, B = _space(ra), _space(rb)
    for v in subspace_ops("intersect", A, B).basis:
        assert subspace_ops("member", A, v) and subspace_ops("member", B, v)


@given(st.lists(st.integers(1, 12), min_size=1, max_size=3),
       st.lists(st.integers(0, 9), min_size=1, max_size=3))
def test_hull_is_closed(mult_exps, seed_exps):
    tail = 14
    mults = [TruncSeries.monomial(F5, e) + TruncSeries.monomial(F5, e + 1, 2) for e in mult_exps]
    seeds = [TruncSeries.monomial(F5, e, cap=tail) for e in seed_exps]
    H = stable_hull(seeds, mults, (0, tail), tail)
    for b in H.basis:
        for m in mults:
            assert subspace_ops("member", H, (b * m).truncate(tail))
