"""Seeded random elements and ideals for verification batteries."""

from __future__ import annotations

import random

from .ideals import CurveRing, FracIdeal, ideal_from_gens, ideal_product
from .series import TruncSeries


def _coeff(R: CurveRing, rng: random.Random, nonzero=False):
    f = R.field
    if f.kind == "Q":
        choices = [-3, -2, -1, 1, 2, 3] if nonzero else [-2, -1, 0, 0, 1, 2]
        return f.scalar(rng.choice(choices))
    return f.random_scalar(rng, nonzero=nonzero)


def random_series(R: CurveRing, rng: random.Random, order: int, span: int,
                  density: float = 0.5) -> TruncSeries:
    """Exact polynomial of the given order with random higher terms below order + span."""
    coeffs = {order: _coeff(R, rng, nonzero=True)}
    for k in range(order + 1, order + span):
        if rng.random() < density:
            coeffs[k] = _coeff(R, rng)
    return TruncSeries(R.field, coeffs)


def random_ring_element(R: CurveRing, rng: random.Random, order: int) -> TruncSeries:
    """A random element of R of the given value (which must be a value of R)."""
    f = R.field
    if not R.is_value(order):
        raise ValueError(f"{order} is not a value of the ring")
    out = TruncSeries.monomial(f, order) * _coeff(R, rng, nonzero=True)
    if order < R.c0:
        out = TruncSeries.from_dense(f, 0, R.model.row(order)) * _coeff(R, rng, nonzero=True)
    for p, row in zip(R.model.pivots, R.model.rows):
        if p > order and rng.random() < 0.5:
            out = out + TruncSeries.from_dense(f, 0, row) * _coeff(R, rng)
    for k in range(max(order + 1, R.c0), order + R.c0 + 2):
        if rng.random() < 0.5:
            out = out + TruncSeries.monomial(f, k) * _coeff(R, rng)
    return out


def random_values(R: CurveRing, rng: random.Random, lo: int, hi: int, k: int) -> list[int]:
    vals = [a for a in range(lo, hi) if R.is_value(a)]
    return [rng.choice(vals) for _ in range(k)]


def random_ideal(R: CurveRing, rng: random.Random, max_gens: int = 3,
                 valuation_range: int | None = None) -> FracIdeal:
    """A regular ideal contained in R, generated by 1..max_gens random elements."""
    if R.is_dvr:
        return R.tail_ideal(rng.randrange(0, 4))
    vr = valuation_range or (R.c0 + R.multiplicity)
    k = rng.randint(1, max_gens)
    orders = random_values(R, rng, 1, 1 + vr, k)
    return ideal_from_gens(R, [random_ring_element(R, rng, s) for s in orders])


def random_fractional(R: CurveRing, rng: random.Random, max_gens: int = 3,
                      valuation_range: int | None = None) -> FracIdeal:
    """A regular fractional ideal with generic (non-ring) generators."""
    vr = valuation_range or (R.c0 + R.multiplicity)
    k = rng.randint(1, max_gens)
    shift = rng.randint(-2, 2)
    gens = [random_series(R, rng, shift + rng.randrange(0, vr), R.c0 + 2) for _ in range(k)]
    return ideal_from_gens(R, gens)


def random_colength_two(R: CurveRing, rng: random.Random) -> FracIdeal | None:
    """A random hyperplane of m containing m² (None when m² has colength < 2)."""
    m = R.maximal_ideal
    m2 = ideal_product(m, m)
    cands = [s for s in m.pivots if not m2.is_value(s)]
    cands += [s for s in range(m.h, m2.h) if not m2.is_value(s)]
    if len(cands) < 2:
        return None
    # m/m² has a basis indexed by cands; pick a random hyperplane through m²
    drop = rng.randrange(len(cands))
    gens = []
    f = R.field
    for i, s in enumerate(cands):
        if i == drop:
            continue
        g = random_ring_element(R, rng, s)
        if i < drop:
            g = g + random_ring_element(R, rng, cands[drop]) * _coeff(R, rng)
        gens.append(g)
    gens += [TruncSeries.from_dense(f, m2.lo, r) for r in m2.model.rows]
    gens.append(TruncSeries.monomial(f, m2.h))
    return ideal_from_gens(R, gens)
