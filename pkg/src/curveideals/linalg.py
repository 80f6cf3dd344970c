"""Reduced-echelon linear algebra on a finite exponent window [lo, hi).

Vectors are dense coefficient arrays indexed by ``exponent - lo``.  A
subspace is stored in reduced echelon form keyed by the *least* exponent of
each basis vector, so the pivot set of a subspace of k((t)) is exactly the
set of t-adic orders it realizes inside the window.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import CapError, CapInsufficientError, FieldMismatchError, InputError
from .series import FieldSpec, TruncSeries


def rref(mat: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Row-reduce ``mat``; returns (nonzero rows, pivot column indices)."""
    A = field.reduce(np.array(mat, dtype=field.dtype, copy=True))
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0), []
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        piv = A[r, c]
        if piv != 1:
            A[r] = field.reduce(A[r] * field.inv(piv))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = field.reduce(A[hit] - np.outer(col[hit], A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace(mat: np.ndarray, field: FieldSpec, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : mat @ x = 0}."""
    if ncols is None:
        ncols = mat.shape[1]
    if mat.shape[0] == 0:
        basis = field.zeros((ncols, ncols))
        for i in range(ncols):
            basis[i, i] = 1
        return basis
    R, piv = rref(mat, field)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = field.zeros((len(free), ncols))
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = field.reduce(-R[i, f]) if field.p else -R[i, f]
    return out


def poly_mul(a_lo: int, a: np.ndarray, b_lo: int, b: np.ndarray, field: FieldSpec,
             lo: int, hi: int) -> np.ndarray:
    """Product of two exact Laurent polynomials, restricted to [lo, hi).

    The product must not have terms below ``lo``.
    """
    out = field.zeros(max(hi - lo, 0))
    if a.size == 0 or b.size == 0 or hi <= lo:
        return out
    if field.p:
        prod = np.convolve(a, b) % field.p
    else:
        prod = np.convolve(a, b)
    start = a_lo + b_lo
    for i in np.flatnonzero(prod[: max(lo - start, 0)]):
        raise CapError(f"product has a term t^{start + int(i)} below window start {lo}")
    s = max(lo - start, 0)
    e = min(hi - start, prod.size)
    if e > s:
        out[start + s - lo:start + e - lo] = prod[s:e]
    return out


def shift_into(vec: np.ndarray, vec_lo: int, lo: int, hi: int, field: FieldSpec) -> np.ndarray:
    """Re-embed a vector living on [vec_lo, vec_lo+len) into [lo, hi), dropping terms >= hi."""
    out = field.zeros(hi - lo)
    for i in np.flatnonzero(vec):
        k = vec_lo + int(i)
        if k < lo:
            raise CapError(f"term t^{k} lies below window start {lo}")
        if k < hi:
            out[k - lo] = vec[i]
    return out


class EchelonSubspace:
    """A k-subspace of the coefficient window [lo, hi) in canonical form."""

    __slots__ = ("field", "lo", "hi", "pivots", "rows", "_pivot_index")

    def __init__(self, field: FieldSpec, lo: int, hi: int, rows: np.ndarray,
                 pivots: Sequence[int]):
        # trusted constructor: rows already reduced, pivots absolute exponents
        self.field = field
        self.lo = lo
        self.hi = hi
        self.rows = rows
        self.pivots = tuple(pivots)
        self._pivot_index = {p: i for i, p in enumerate(self.pivots)}

    @classmethod
    def from_rows(cls, field: FieldSpec, lo: int, hi: int, vectors) -> EchelonSubspace:
        width = hi - lo
        if width < 0:
            raise InputError(f"empty window [{lo}, {hi})")
        vectors = list(vectors)
        if not vectors or width == 0:
            return cls(field, lo, hi, field.zeros((0, width)), ())
        mat = np.vstack([np.asarray(v) for v in vectors])
        R, piv = rref(mat, field)
        return cls(field, lo, hi, R, [lo + c for c in piv])

    @classmethod
    def full(cls, field, lo, hi):
        rows = field.zeros((hi - lo, hi - lo))
        for i in range(hi - lo):
            rows[i, i] = 1
        return cls(field, lo, hi, rows, range(lo, hi))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def width(self) -> int:
        return self.hi - self.lo

    @property
    def basis(self) -> list[TruncSeries]:
        return [TruncSeries.from_dense(self.field, self.lo, r, self.hi) for r in self.rows]

    def row(self, pivot: int) -> np.ndarray:
        return self.rows[self._pivot_index[pivot]]

    def __eq__(self, other):
        if not isinstance(other, EchelonSubspace):
            return NotImplemented
        return (self.field == other.field and self.lo == other.lo and self.hi == other.hi
                and self.pivots == other.pivots and np.array_equal(self.rows, other.rows))

    def __hash__(self):
        return hash((self.lo, self.hi, self.pivots, tuple(self.rows.ravel().tolist())))

    def __repr__(self):
        return f"EchelonSubspace([{self.lo}, {self.hi}), pivots={list(self.pivots)})"

    def residual(self, vec: np.ndarray) -> np.ndarray:
        """vec minus its projection onto the span along pivot coordinates."""
        if not self.pivots:
            return vec
        idx = [p - self.lo for p in self.pivots]
        coeffs = vec[idx]
        if not np.any(coeffs != 0):
            return vec
        return self.field.reduce(vec - coeffs @ self.rows)

    def contains_vector(self, vec: np.ndarray) -> bool:
        return not np.any(self.residual(vec) != 0)

    def reembed(self, lo: int, hi: int) -> EchelonSubspace:
        """The image in the window [lo, hi): pads below, truncates at hi."""
        if lo > self.lo and any(p < lo for p in self.pivots):
            raise CapError(f"subspace has vectors below new window start {lo}")
        vecs = [shift_into(r, self.lo, lo, hi, self.field) for r in self.rows]
        if hi >= self.hi and lo <= self.lo:
            rows = np.vstack(vecs) if vecs else self.field.zeros((0, hi - lo))
            return EchelonSubspace(self.field, lo, hi, rows, self.pivots)
        return EchelonSubspace.from_rows(self.field, lo, hi, vecs)


def _window_of(series: TruncSeries, window) -> np.ndarray:
    lo, hi = window
    if series.cap is not None and series.cap < hi:
        raise CapError(f"cap {series.cap} below window end {hi}")
    if not series.is_zero() and (series.order < lo or max(series.coeffs) >= hi):
        raise CapError(f"support of {series!r} leaves window [{lo}, {hi})")
    return series.dense(lo, hi)


def echelonize(vectors: Iterable[TruncSeries], window: tuple[int, int],
               field: FieldSpec | None = None) -> EchelonSubspace:
    vectors = list(vectors)
    if field is None:
        if not vectors:
            raise InputError("field required for an empty vector list")
        field = vectors[0].field
    for v in vectors:
        if v.field != field:
            raise FieldMismatchError(f"{v.field} vs {field}")
    lo, hi = window
    return EchelonSubspace.from_rows(field, lo, hi, [_window_of(v, window) for v in vectors])


def _compatible(A: EchelonSubspace, B: EchelonSubspace):
    if A.field != B.field:
        raise FieldMismatchError(f"{A.field} vs {B.field}")
    if (A.lo, A.hi) != (B.lo, B.hi):
        raise InputError(f"windows differ: [{A.lo},{A.hi}) vs [{B.lo},{B.hi})")


def subspace_sum(A: EchelonSubspace, B: EchelonSubspace) -> EchelonSubspace:
    _compatible(A, B)
    if not B.dim:
        return A
    if not A.dim:
        return B
    return EchelonSubspace.from_rows(A.field, A.lo, A.hi, [*A.rows, *B.rows])


def subspace_intersect(A: EchelonSubspace, B: EchelonSubspace) -> EchelonSubspace:
    """A ∩ B as the combinations of A's basis whose residual modulo B vanishes."""
    _compatible(A, B)
    f = A.field
    if not A.dim or not B.dim:
        return EchelonSubspace(f, A.lo, A.hi, f.zeros((0, A.width)), ())
    res = np.vstack([B.residual(r) for r in A.rows])  # dim A x width
    # combinations alpha with alpha @ res == 0
    alphas = nullspace(res.T, f, A.dim)
    if alphas.shape[0] == 0:
        return EchelonSubspace(f, A.lo, A.hi, f.zeros((0, A.width)), ())
    vecs = f.reduce(alphas @ A.rows)
    return EchelonSubspace.from_rows(f, A.lo, A.hi, list(vecs))


def subspace_ops(kind: str, A: EchelonSubspace, B=None):
    """sum | intersect | member | dim | quotient_dim."""
    if kind == "sum":
        return subspace_sum(A, B)
    if kind == "intersect":
        return subspace_intersect(A, B)
    if kind == "member":
        if isinstance(B, TruncSeries):
            try:
                vec = _window_of(B, (A.lo, A.hi))
            except CapError:
                return False
            return A.contains_vector(vec)
        return A.contains_vector(np.asarray(B))
    if kind == "dim":
        return A.dim
    if kind == "quotient_dim":
        _compatible(A, B)
        if any(not A.contains_vector(r) for r in B.rows):
            raise InputError("quotient_dim requires B ⊆ A")
        return A.dim - B.dim
    raise ValueError(f"unknown subspace operation {kind!r}")


class _Builder:
    """Incrementally maintained reduced echelon basis (used by closures)."""

    def __init__(self, field: FieldSpec, lo: int, hi: int):
        self.field = field
        self.lo = lo
        self.hi = hi
        self.rows: dict[int, np.ndarray] = {}

    def reduce(self, vec):
        f = self.field
        for p, row in self.rows.items():
            c = vec[p]
            if c != 0:
                vec = f.reduce(vec - c * row)
        return vec

    def insert(self, vec) -> np.ndarray | None:
        f = self.field
        vec = self.reduce(f.reduce(np.array(vec, dtype=f.dtype, copy=True)))
        nz = np.flatnonzero(vec)
        if nz.size == 0:
            return None
        p = int(nz[0])
        if vec[p] != 1:
            vec = f.reduce(vec * f.inv(vec[p]))
        for q, row in self.rows.items():
            c = row[p]
            if c != 0:
                self.rows[q] = f.reduce(row - c * vec)
        self.rows[p] = vec
        return vec

    def freeze(self) -> EchelonSubspace:
        keys = sorted(self.rows)
        width = self.hi - self.lo
        rows = np.vstack([self.rows[k] for k in keys]) if keys else self.field.zeros((0, width))
        return EchelonSubspace(self.field, self.lo, self.hi, rows, [self.lo + k for k in keys])


def hull_dense(field: FieldSpec, lo: int, tail: int, seeds, multipliers) -> EchelonSubspace:
    """Closure of dense seed vectors on [lo, tail) under exact multipliers mod t^tail.

    ``multipliers`` are (lo, array) exact polynomials of order >= 0.
    """
    b = _Builder(field, lo, tail)
    queue = []
    for s in seeds:
        v = b.insert(s)
        if v is not None:
            queue.append(v)
    while queue:
        v = queue.pop()
        for m_lo, m in multipliers:
            prod = poly_mul(lo, v, m_lo, m, field, lo, tail)
            w = b.insert(prod)
            if w is not None:
                queue.append(w)
    return b.freeze()


def stable_hull(seeds: Sequence[TruncSeries], multipliers: Sequence[TruncSeries],
                window: tuple[int, int], tail: int) -> EchelonSubspace:
    """Least subspace containing ``seeds`` and closed under the multipliers modulo t^tail."""
    lo, hi = window
    if tail != hi:
        raise InputError("tail must equal the window end")
    if not seeds:
        raise InputError("stable_hull needs at least one seed")
    field = seeds[0].field
    dense_seeds = []
    for s in seeds:
        if s.field != field:
            raise FieldMismatchError(f"{s.field} vs {field}")
        dense_seeds.append(_window_of(s.truncate(hi), window))
    mults = []
    for m in multipliers:
        if m.field != field:
            raise FieldMismatchError(f"{m.field} vs {field}")
        if m.is_zero():
            continue
        # a product s*m is certified below min(cap_s + ord_m, cap_m + ord_s)
        if m.cap is not None and m.cap + lo < tail:
            raise CapInsufficientError(
                f"multiplier cap {m.cap} cannot certify products up to t^{tail}")
        m_lo = m.order
        mults.append((m_lo, m.dense(m_lo, max(m.coeffs) + 1)))
    for s in seeds:
        if s.cap is not None:
            for m_lo, _ in mults:
                if s.cap + m_lo < tail:
                    raise CapInsufficientError(
                        f"seed cap {s.cap} cannot certify products up to t^{tail}")
    return hull_dense(field, lo, tail, dense_seeds, mults)
