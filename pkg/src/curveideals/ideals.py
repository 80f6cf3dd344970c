"""Rings R ⊆ k[[t]] and their regular fractional ideals.

A regular fractional ideal M is stored as a pair (tail h, window model):
``t^h k[[t]] ⊆ M`` and the model is the reduced echelon basis of M/t^h k[[t]]
on the window [lo, h), lo being the least order of an element of M.  With h
minimal the representation is canonical, so ideal equality is equality of
representations.

Every operation below is finite linear algebra on such windows:

* sums, intersections: common window, subspace sum/intersection;
* products: products of module generators closed under the ring generators;
* colons M:N: the solution space of ``q*g ∈ M`` for generators g of N, with
  unknown q ranging over [lo_M - lo_N, h_M - lo_N).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (CapInsufficientError, EngineFault, InputError,
                     NonStabilizationError, NormalizationError)
from .linalg import (EchelonSubspace, hull_dense, nullspace, poly_mul, subspace_intersect,
                     subspace_sum)
from .series import FieldSpec, TruncSeries, parse_series, render_series

DEFAULT_CAP_SLACK = 8
DEFAULT_CAP_RETRIES = 5


def _poly_of(series: TruncSeries) -> tuple[int, np.ndarray]:
    """Exact (lo, dense) form of a nonzero exact series."""
    lo = series.order
    return lo, series.dense(lo, max(series.coeffs) + 1)


class CurveRing:
    """A complete local domain k[[g_1, ..., g_r]] ⊆ k[[t]] with gcd of values 1."""

    def __init__(self, field: FieldSpec, gens: Sequence[TruncSeries], model: EchelonSubspace,
                 c0: int, cap: int, max_iter: int | None = None):
        self.field = field
        self.gens = list(gens)
        self.model = model
        self.c0 = c0
        self.cap = cap
        self._mults = [_poly_of(g) for g in self.gens]
        self._value_set = frozenset(model.pivots)
        self._max_iter = max_iter
        self._cache: dict = {}

    # construction ------------------------------------------------------

    @classmethod
    def from_texts(cls, field: FieldSpec, texts: Sequence[str], cap="auto",
                   max_iter: int | None = None) -> CurveRing:
        gens = [parse_series(t, field) for t in texts]
        return cls.from_gens(field, gens, cap=cap, max_iter=max_iter)

    @classmethod
    def from_gens(cls, field: FieldSpec, gens: Sequence[TruncSeries], cap="auto",
                  max_iter: int | None = None) -> CurveRing:
        if not gens:
            raise InputError("a ring needs at least one generator")
        exact = []
        for g in gens:
            if g.field != field:
                raise InputError(f"generator over {g.field}, ring over {field}")
            if g.is_zero() or g.order < 1:
                raise InputError(f"generator {render_series(g)!r} must have order >= 1")
            if g.cap is not None:
                raise InputError("ring generators must be exact polynomials")
            exact.append(g)
        max_ord = max(g.order for g in exact)
        if cap == "auto":
            nominal = 2 * max_ord * max_ord + DEFAULT_CAP_SLACK
            # a run of e consecutive values certifies c0 at any cap, so try cheap
            # windows first; the reported cap is never below the nominal one
            attempts = []
            n = 4 * max_ord + DEFAULT_CAP_SLACK
            while n < nominal:
                attempts.append(n)
                n *= 2
            attempts += [nominal * 2**i for i in range(DEFAULT_CAP_RETRIES + 1)]
        else:
            nominal = int(cap)
            attempts = [nominal]
        mults = [_poly_of(g) for g in exact]
        one = field.zeros(1)
        one[0] = 1
        pivots: tuple[int, ...] = ()
        for n in attempts:
            seed = field.zeros(n)
            seed[0] = 1
            space = hull_dense(field, 0, n, [seed], mults)
            pivots = space.pivots
            positive = [p for p in pivots if p > 0]
            if not positive:
                continue
            e = positive[0]
            c = n
            pset = set(pivots)
            while c - 1 >= 0 and (c - 1) in pset:
                c -= 1
            if n - c >= e:
                model = space.reembed(0, c)
                return cls(field, exact, model, c, max(n, nominal), max_iter)
        positive = [p for p in pivots if p > 0]
        if positive and math.gcd(*positive) != 1:
            raise NormalizationError(
                f"values have gcd {math.gcd(*positive)}; the normalization is not k[[t]]")
        raise CapInsufficientError(f"conductor not certified below cap {attempts[-1]}")

    # invariants --------------------------------------------------------

    @property
    def values_below_conductor(self) -> tuple[int, ...]:
        return self.model.pivots

    def is_value(self, a: int) -> bool:
        return a >= self.c0 or a in self._value_set

    @property
    def frobenius(self) -> int:
        return self.c0 - 1

    @property
    def multiplicity(self) -> int:
        for a in range(1, self.c0 + 2):
            if self.is_value(a):
                return a
        return 1

    @property
    def is_dvr(self) -> bool:
        return self.c0 == 0

    @property
    def max_gen_order(self) -> int:
        return max(g.order for g in self.gens)

    @property
    def max_iter(self) -> int:
        if self._max_iter is not None:
            return self._max_iter
        return 4 * (self.frobenius + self.max_gen_order) + 4

    def __eq__(self, other):
        if not isinstance(other, CurveRing):
            return NotImplemented
        return self is other or (self.field == other.field and self.c0 == other.c0
                                 and self.model == other.model)

    def __hash__(self):
        return hash((self.field, self.c0, self.model.pivots))

    def __repr__(self):
        gens = ", ".join(render_series(g) for g in self.gens)
        return f"CurveRing({self.field}, [{gens}])"

    def describe(self) -> str:
        return "k[[" + ", ".join(render_series(g) for g in self.gens) + "]]"

    def element(self, text: str) -> TruncSeries:
        return parse_series(text, self.field)

    # distinguished ideals (cached) ------------------------------------

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def one(self) -> FracIdeal:
        """R itself as a fractional ideal."""
        return self._cached("R", lambda: FracIdeal(self, 0, self.c0, self.model))

    @property
    def normalization(self) -> FracIdeal:
        """V = k[[t]]."""
        return self._cached("V", lambda: FracIdeal.tail_only(self, 0))

    @property
    def maximal_ideal(self) -> FracIdeal:
        def build():
            if self.is_dvr:
                return FracIdeal.tail_only(self, 1)
            rows = [r for p, r in zip(self.model.pivots, self.model.rows) if p > 0]
            space = EchelonSubspace.from_rows(self.field, 0, self.c0, rows)
            return FracIdeal.canonical(self, space)
        return self._cached("m", build)

    @property
    def conductor(self) -> FracIdeal:
        return self._cached("c", lambda: FracIdeal.tail_only(self, self.c0))

    def tail_ideal(self, h: int) -> FracIdeal:
        return FracIdeal.tail_only(self, h)

    def ideal(self, *gens) -> FracIdeal:
        """Ideal generated by series or expression strings."""
        series = [self.element(g) if isinstance(g, str) else g for g in gens]
        return ideal_from_gens(self, series)

    @property
    def embedding_dimension(self) -> int:
        def build():
            m = self.maximal_ideal
            return length(m, m * m)
        return self._cached("embdim", build)

    @property
    def cm_type(self) -> int:
        def build():
            m = self.maximal_ideal
            return length(colon(self.one, m), self.one)
        return self._cached("type", build)

    def colength_of_conductor(self) -> int:
        return len(self.values_below_conductor)


def ring_new(field: FieldSpec, generator_texts: Sequence[str], cap_policy="auto",
             max_iter: int | None = None) -> CurveRing:
    return CurveRing.from_texts(field, generator_texts, cap=cap_policy, max_iter=max_iter)


class FracIdeal:
    """A regular fractional ideal in canonical (tail, window model) form."""

    __slots__ = ("ring", "lo", "h", "model", "_cache")

    def __init__(self, ring: CurveRing, lo: int, h: int, model: EchelonSubspace):
        # trusted constructor; use canonical() for arbitrary spans
        self.ring = ring
        self.lo = lo
        self.h = h
        self.model = model
        self._cache: dict = {}

    @classmethod
    def tail_only(cls, ring: CurveRing, h: int) -> FracIdeal:
        return cls(ring, h, h, EchelonSubspace(ring.field, h, h, ring.field.zeros((0, 0)), ()))

    @classmethod
    def canonical(cls, ring: CurveRing, space: EchelonSubspace) -> FracIdeal:
        """Ideal whose quotient by t^H k[[t]] is ``space`` on [a, H); minimizes the tail."""
        pivots = list(space.pivots)
        H = space.hi
        while pivots and pivots[-1] == H - 1:
            pivots.pop()
            H -= 1
        if not pivots:
            return cls.tail_only(ring, H)
        lo = pivots[0]
        rows = space.rows[:len(pivots), lo - space.lo:H - space.lo]
        return cls(ring, lo, H, EchelonSubspace(ring.field, lo, H, rows, pivots))

    # representation helpers -------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    @property
    def tail(self) -> int:
        return self.h

    @property
    def pivots(self) -> tuple[int, ...]:
        return self.model.pivots

    def is_value(self, a: int) -> bool:
        return a >= self.h or a in self.model._pivot_index

    def value_set(self) -> tuple[list[int], int]:
        """(values below the tail, tail): the value set is the list plus [tail, ∞)."""
        return list(self.model.pivots), self.h

    def space(self, lo: int, H: int) -> EchelonSubspace:
        """M / t^H k[[t]] on the window [lo, H); requires lo <= self.lo."""
        f = self.field
        if H <= self.h:
            return self.model.reembed(lo, H)
        base = self.model.reembed(lo, H)
        extra = f.zeros((H - self.h, H - lo))
        for i, j in enumerate(range(self.h, H)):
            extra[i, j - lo] = 1
        rows = np.vstack([base.rows, extra]) if base.dim else extra
        return EchelonSubspace(f, lo, H, rows, [*base.pivots, *range(self.h, H)])

    def minimal_values(self) -> list[int]:
        """Values of M not of the form a + b, a ∈ v(m), b ∈ v(M)."""
        R = self.ring
        e = R.multiplicity
        out = []
        for s in [*self.model.pivots, *range(self.h, self.h + e)]:
            if all(not (R.is_value(a) and self.is_value(s - a)) for a in range(1, s - self.lo + 1)):
                out.append(s)
        return out

    def generators(self) -> list[tuple[int, np.ndarray]]:
        """R-module generators (lo, dense) – one per minimal value."""
        f = self.field
        gens = []
        for s in self.minimal_values():
            if s < self.h:
                gens.append((self.lo, self.model.row(s)))
            else:
                v = f.zeros(1)
                v[0] = 1
                gens.append((s, v))
        return gens

    def generator_series(self) -> list[TruncSeries]:
        return [TruncSeries.from_dense(self.field, lo, arr) for lo, arr in self.generators()]

    def basis_series(self) -> list[TruncSeries]:
        # window rows only; the tail t^h V is implicit
        return [TruncSeries.from_dense(self.field, self.lo, r) for r in self.model.rows]

    def contains_series(self, x: TruncSeries) -> bool:
        if x.is_zero():
            return True
        if x.order < self.lo:
            return False
        if x.cap is not None and x.cap < self.h:
            raise CapInsufficientError(f"cap {x.cap} below ideal tail {self.h}")
        if self.h == self.lo:
            return True
        vec = x.truncate(self.h).dense(self.lo, self.h)
        return self.model.contains_vector(vec)

    def __contains__(self, x):
        return self.contains_series(x)

    def __eq__(self, other):
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return (self.lo == other.lo and self.h == other.h and self.ring == other.ring
                and self.model == other.model)

    def __hash__(self):
        return hash((self.lo, self.h, self.model.pivots,
                     tuple(self.model.rows.ravel().tolist())))

    def __repr__(self):
        vals, h = self.value_set()
        return f"FracIdeal(values={vals} + [{h},∞))"

    def __add__(self, other):
        return ideal_arith("sum", self, other)

    def __mul__(self, other):
        if isinstance(other, FracIdeal):
            return ideal_arith("product", self, other)
        if isinstance(other, TruncSeries):
            return ideal_arith("product", principal(self.ring, other), self)
        return NotImplemented

    __rmul__ = __mul__

    def __and__(self, other):
        return ideal_arith("intersect", self, other)

    def __le__(self, other):
        return is_subset(self, other)

    def __ge__(self, other):
        return is_subset(other, self)

    def __pow__(self, n: int):
        return power(self, n)

    def shift(self, n: int) -> FracIdeal:
        m = self.model
        shifted = EchelonSubspace(self.field, m.lo + n, m.hi + n, m.rows,
                                  [p + n for p in m.pivots])
        return FracIdeal(self.ring, self.lo + n, self.h + n, shifted)

    def over(self, ring: CurveRing) -> FracIdeal:
        """The same subset of Q(R), regarded over another ring (checked)."""
        if ring is self.ring:
            return self
        out = FracIdeal(ring, self.lo, self.h, self.model)
        tail = [TruncSeries.monomial(self.field, j)
                for j in range(self.h, self.h + ring.c0 + ring.multiplicity)]
        if ideal_from_gens(ring, [*self.basis_series(), *tail]) != out:
            raise InputError("not a module over the target ring")
        return out

    def is_contained_in_ring(self) -> bool:
        return is_subset(self, self.ring.one)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]


# ------------------------------------------------------------- constructors

def ideal_from_gens(ring: CurveRing, gens: Sequence[TruncSeries]) -> FracIdeal:
    """Least R-submodule of Q(R) containing ``gens``."""
    nz = [g for g in gens if not g.is_zero()]
    if not nz:
        raise InputError("a regular fractional ideal needs a nonzero generator")
    for g in nz:
        if g.field != ring.field:
            raise InputError(f"generator over {g.field}, ring over {ring.field}")
    lo = min(g.order for g in nz)
    H = lo + ring.c0
    if H == lo:
        return FracIdeal.tail_only(ring, lo)
    seeds = []
    for g in nz:
        if g.cap is not None and g.cap < H:
            raise CapInsufficientError(f"generator cap {g.cap} below required tail {H}")
        seeds.append(g.truncate(H).dense(lo, H))
    space = hull_dense(ring.field, lo, H, seeds, ring._mults)
    return FracIdeal.canonical(ring, space)


def principal(ring: CurveRing, x: TruncSeries) -> FracIdeal:
    return ideal_from_gens(ring, [x])


def monomial_ideal(ring: CurveRing, exponents: Sequence[int]) -> FracIdeal:
    return ideal_from_gens(ring, [TruncSeries.monomial(ring.field, k) for k in exponents])


def _same_ring(M: FracIdeal, N: FracIdeal):
    if M.ring != N.ring:
        raise InputError("ideals over different rings")


# ------------------------------------------------------------- arithmetic

def ideal_sum(M: FracIdeal, N: FracIdeal) -> FracIdeal:
    _same_ring(M, N)
    H = min(M.h, N.h)
    lo = min(M.lo, N.lo)
    return FracIdeal.canonical(M.ring, subspace_sum(M.space(lo, H), N.space(lo, H)))


def ideal_intersect(M: FracIdeal, N: FracIdeal) -> FracIdeal:
    _same_ring(M, N)
    H = max(M.h, N.h)
    lo = min(M.lo, N.lo)
    return FracIdeal.canonical(M.ring, subspace_intersect(M.space(lo, H), N.space(lo, H)))


def ideal_product(M: FracIdeal, N: FracIdeal) -> FracIdeal:
    _same_ring(M, N)
    ring = M.ring
    lo = M.lo + N.lo
    H = min(M.h + N.lo, N.h + M.lo)
    if H == lo:
        return FracIdeal.tail_only(ring, lo)
    f = ring.field
    seeds = [poly_mul(a_lo, a, b_lo, b, f, lo, H)
             for a_lo, a in M.generators() for b_lo, b in N.generators()]
    return FracIdeal.canonical(ring, hull_dense(f, lo, H, seeds, ring._mults))


def ideal_arith(kind: str, M: FracIdeal, N: FracIdeal) -> FracIdeal:
    if kind == "sum":
        return ideal_sum(M, N)
    if kind == "product":
        return ideal_product(M, N)
    if kind == "intersect":
        return ideal_intersect(M, N)
    raise ValueError(f"unknown ideal operation {kind!r}")


def power(M: FracIdeal, n: int) -> FracIdeal:
    if n < 0:
        raise InputError("negative powers are not supported")
    key = ("pow", n)
    if key in M._cache:
        return M._cache[key]
    if n == 0:
        out = M.ring.one
    elif n == 1:
        out = M
    else:
        out = ideal_product(power(M, n - 1), M)
    M._cache[key] = out
    return out


def is_subset(M: FracIdeal, N: FracIdeal) -> bool:
    _same_ring(M, N)
    if M.lo < N.lo:
        return False
    if M.h < N.h:
        # t^j for M.h <= j < N.h must lie in N
        if any(not N.is_value(j) for j in range(M.h, N.h)):
            return False
    return ideal_sum(M, N) == N


def colon(M: FracIdeal, N: FracIdeal) -> FracIdeal:
    """M : N = {q ∈ Q(R) : qN ⊆ M}."""
    _same_ring(M, N)
    ring = M.ring
    f = ring.field
    a = M.lo - N.lo
    b = M.h - N.lo
    width = b - a
    if width == 0:
        return FracIdeal.tail_only(ring, b)
    wM = M.h - M.lo
    nonpiv = [c for c in range(wM) if (M.lo + c) not in M.model._pivot_index]
    piv_idx = [p - M.lo for p in M.model.pivots]
    blocks = []
    for g_lo, g in N.generators():
        U = f.zeros((width, wM))
        off = g_lo - N.lo  # >= 0
        for j in range(width):
            start = j + off
            if start >= wM:
                break
            n = min(g.size, wM - start)
            U[j, start:start + n] = g[:n]
        if piv_idx:
            U = f.reduce(U - U[:, piv_idx] @ M.model.rows)
        blocks.append(U[:, nonpiv])
    C = np.hstack(blocks) if blocks else f.zeros((width, 0))
    sols = nullspace(C.T, f, width) if C.shape[1] else nullspace(f.zeros((0, width)), f, width)
    space = EchelonSubspace.from_rows(f, a, b, list(sols))
    return FracIdeal.canonical(ring, space)


def colon_in_ring(M: FracIdeal, N: FracIdeal) -> FracIdeal:
    """M :_R N = (M : N) ∩ R."""
    return ideal_intersect(colon(M, N), M.ring.one)


def dual(M: FracIdeal) -> FracIdeal:
    return M.cached("dual", lambda: colon(M.ring.one, M))


def bidual(M: FracIdeal) -> FracIdeal:
    return M.cached("bidual", lambda: dual(dual(M)))


def is_reflexive(M: FracIdeal) -> bool:
    return bidual(M) == M


@dataclass
class DualProfile:
    dual: FracIdeal
    bidual: FracIdeal
    is_reflexive: bool


def dual_profile(M: FracIdeal) -> DualProfile:
    d = dual(M)
    bd = bidual(M)
    return DualProfile(d, bd, bd == M)


def trace(M: FracIdeal) -> FracIdeal:
    return M.cached("trace", lambda: ideal_product(dual(M), M))


def is_trace_ideal(M: FracIdeal) -> bool:
    return colon(M, M) == dual(M)


@dataclass
class TraceProfile:
    trace: FracIdeal
    is_trace_ideal: bool


def trace_profile(M: FracIdeal) -> TraceProfile:
    tr = trace(M)
    flag = is_trace_ideal(M)
    if flag != (tr == M):
        raise EngineFault("trace-ideal test M:M = R:M disagrees with tr(M) = M")
    if not is_subset(tr, M.ring.one):
        raise EngineFault("trace not contained in R")
    return TraceProfile(tr, flag)


def integral_closure(I: FracIdeal) -> FracIdeal:
    """{r ∈ R : v(r) >= v(I)} for a regular ideal I ⊆ R."""
    R = I.ring
    if not I.is_contained_in_ring():
        raise InputError("integral closure is computed for ideals contained in R")
    return ideal_intersect(R.one, FracIdeal.tail_only(R, I.lo))


# ------------------------------------------------------------- reductions

def reduction_element(I: FracIdeal) -> TruncSeries:
    """The canonical principal reduction: echelon basis vector of least order."""
    if I.h == I.lo:
        return TruncSeries.monomial(I.field, I.lo)
    return TruncSeries.from_dense(I.field, I.lo, I.model.row(I.lo))


@dataclass
class Reduction:
    x: TruncSeries
    reduction_number: int


def principal_reduction(I: FracIdeal, max_iter: int | None = None) -> Reduction:
    def build():
        limit = max_iter or I.ring.max_iter
        x = reduction_element(I)
        X = principal(I.ring, x)
        for n in range(limit + 1):
            if ideal_product(X, power(I, n)) == power(I, n + 1):
                return Reduction(x, n)
        raise NonStabilizationError(f"x*I^n != I^(n+1) for all n <= {limit}")
    if max_iter is not None:
        return build()
    return I.cached("reduction", build)


def length(M: FracIdeal, N: FracIdeal) -> int:
    """ℓ(M/N) for N ⊆ M."""
    if not is_subset(N, M):
        raise InputError("length(M, N) requires N ⊆ M")
    H = max(M.h, N.h)
    lo = min(M.lo, N.lo)
    return M.space(lo, H).dim - N.space(lo, H).dim


def multiplicity(I: FracIdeal, M: FracIdeal) -> int:
    """e_I(M) = ℓ(M/xM) for the canonical principal reduction x of I."""
    x = principal_reduction(I).x
    return length(M, M * x)


def mu(M: FracIdeal) -> int:
    """Minimal number of generators, dim M/mM."""
    return length(M, M.ring.maximal_ideal * M)


# ------------------------------------------------------------- Ulrich & blow-up

def _ulrich_raw(M: FracIdeal, I: FracIdeal) -> bool:
    x = principal_reduction(I).x
    return ideal_product(I, M) == M * x


def is_ulrich(M: FracIdeal, I: FracIdeal, cross_check: bool = True) -> bool:
    """IM = xM, cross-checked against IM ≅ M and B(I)M = M."""
    _same_ring(M, I)
    flag = _ulrich_raw(M, I)
    if cross_check:
        iso = is_isomorphic(ideal_product(I, M), M, want_witness=False).iso
        B = blowup(I).B.ideal
        module = ideal_product(B, M) == M
        if not (flag == iso == module):
            raise EngineFault(f"Ulrich criteria disagree: IM=xM {flag}, IM≅M {iso}, "
                              f"B(I)M=M {module}")
    return flag


@dataclass
class ExtensionRing:
    """A birational extension R ⊆ S ⊆ k[[t]], held both as an R-ideal and as a ring."""

    ideal: FracIdeal
    ring: CurveRing

    @property
    def base(self) -> CurveRing:
        return self.ideal.ring


def as_extension(E: FracIdeal) -> ExtensionRing:
    R = E.ring
    key = "as_extension"
    if key in E._cache:
        return E._cache[key]
    if not E.contains_series(TruncSeries.monomial(R.field, 0)):
        raise EngineFault("extension candidate does not contain 1")
    if ideal_product(E, E) != E:
        raise EngineFault("extension candidate is not closed under products")
    if E.lo != 0:
        raise EngineFault("extension candidate has elements of negative order")
    f = R.field
    if E.h == 0:
        gens = [TruncSeries.monomial(f, 1)]
        ring = CurveRing(f, gens, EchelonSubspace(f, 0, 0, f.zeros((0, 0)), ()), 0, R.cap,
                         R._max_iter)
    else:
        gens = [TruncSeries.from_dense(f, 0, r) for p, r in zip(E.model.pivots, E.model.rows)
                if p > 0]
        e = next(p for p in [*E.model.pivots[1:], E.h])
        gens += [TruncSeries.monomial(f, j) for j in range(E.h, E.h + e)]
        ring = CurveRing(f, gens, E.model, E.h, R.cap, R._max_iter)
    out = ExtensionRing(E, ring)
    E._cache[key] = out
    return out


def end_ring(M: FracIdeal) -> ExtensionRing:
    return M.cached("end", lambda: as_extension(colon(M, M)))


def normalization_extension(R: CurveRing) -> ExtensionRing:
    return as_extension(R.normalization)


@dataclass
class Blowup:
    B: ExtensionRing
    b: FracIdeal
    stabilized_at: int


def blowup(I: FracIdeal, max_iter: int | None = None) -> Blowup:
    """B(I) = I^n:I^n for large n, and b(I) = R:B(I).

    The chain can pause before it stabilizes, so two consecutive equal terms only
    end the loop once n is at least the reduction number r (from there on
    I^n:I^n = I^r/x^r); the result is checked against x^(-r) I^r.
    """
    def build():
        limit = max_iter or I.ring.max_iter
        red = principal_reduction(I)
        r = max(red.reduction_number, 1)
        prev = None
        for n in range(1, limit + 2):
            P = power(I, n)
            E = colon(P, P)
            if prev is not None and E == prev and n - 1 >= r:
                xr = power(principal(I.ring, red.x), r)
                if colon(power(I, r), xr) != E:
                    raise EngineFault("blow-up chain disagrees with R[I/x]")
                return Blowup(as_extension(E), dual(E), n - 1)
            prev = E
        raise NonStabilizationError(f"I^n:I^n did not stabilize within {limit} steps")
    if max_iter is not None:
        return build()
    return I.cached("blowup", build)


def core(I: FracIdeal, max_iter: int | None = None) -> FracIdeal:
    """core(I) as the stabilized x^(n+1) :_R I^n."""
    def build():
        if not I.is_contained_in_ring():
            raise InputError("core is computed for ideals contained in R")
        red = principal_reduction(I)
        p = I.field.characteristic
        if p and p <= red.reduction_number:
            raise InputError(f"core formula needs char 0 or char > {red.reduction_number}")
        limit = max_iter or I.ring.max_iter
        X = principal(I.ring, red.x)
        prev = None
        for n in range(max(red.reduction_number, 0), red.reduction_number + limit + 1):
            C = colon_in_ring(power(X, n + 1), power(I, n))
            if prev is not None and C == prev:
                return C
            prev = C
        raise NonStabilizationError(f"x^(n+1):I^n did not stabilize within {limit} steps")
    return I.cached("core", build)


# ------------------------------------------------------------- isomorphism

@dataclass
class IsoResult:
    iso: bool
    witness: TruncSeries | None = None
    certificate: tuple[FracIdeal, FracIdeal] | None = None


def is_isomorphic(M: FracIdeal, N: FracIdeal, want_witness: bool = True,
                  seed: int = 0, attempts: int = 64) -> IsoResult:
    """M ≅ N iff (M:N)(N:M) = M:M; optional witness q with qN = M."""
    _same_ring(M, N)
    A = colon(M, N)
    prod = ideal_product(A, colon(N, M))
    E = colon(M, M)
    if prod != E:
        return IsoResult(False, certificate=(prod, E))
    if not want_witness:
        return IsoResult(True)
    target = M.lo - N.lo
    if A.lo != target:
        raise EngineFault("isomorphic ideals but no colon element of the right order")
    ring = M.ring
    rows = A.basis_series()
    lead = reduction_element(A)
    if ideal_product(principal(ring, lead), N) == M:
        return IsoResult(True, lead)
    rng = random.Random(seed)
    f = ring.field
    for _ in range(attempts):
        q = lead
        for r in rows[1:]:
            q = q + r * f.random_scalar(rng)
        if ideal_product(principal(ring, q), N) == M:
            return IsoResult(True, q)
    raise EngineFault("witness search exhausted although (M:N)(N:M) = M:M")


# ------------------------------------------------------------- contraction

@dataclass
class Contraction:
    J: FracIdeal
    colength_two_criterion: bool | None


def contract(I: FracIdeal, S: ExtensionRing) -> Contraction:
    """J = IS ∩ R; for colength-two I and S = End(m) also ℓ(S/IS) > type(R) + 1."""
    R = I.ring
    if not I.is_contained_in_ring():
        raise InputError("contract expects an ideal of R")
    IS = ideal_product(I, S.ideal)
    J = ideal_intersect(IS, R.one)
    crit = None
    if length(R.one, I) == 2 and S.ideal == end_ring(R.maximal_ideal).ideal:
        crit = length(S.ideal, IS) > R.cm_type + 1
        if crit != (J == I):
            raise EngineFault("colength-two contraction criterion disagrees with IS ∩ R = I")
    return Contraction(J, crit)
