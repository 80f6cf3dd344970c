"""Canonical ideals, ring flags, extension tests and finite-field enumeration."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BudgetExceededError, EngineFault, InputError
from .ideals import (CurveRing, ExtensionRing, FracIdeal, as_extension, bidual, blowup,
                     colon, colon_in_ring, core, dual, dual_profile,
                     ideal_from_gens, ideal_product, integral_closure, is_isomorphic,
                     is_reflexive, is_subset, is_ulrich, length, mu, principal,
                     reduction_element, trace, trace_profile)
from .linalg import EchelonSubspace, nullspace
from .sampling import _coeff, random_fractional, random_ideal
from .series import TruncSeries

CANONICAL_SAMPLES = 20


# ------------------------------------------------------------- canonical ideal

def _residue_module(R: CurveRing) -> FracIdeal:
    """{g ∈ k[[t]] : coefficient of t^F in r*g vanishes for all r ∈ R}."""
    f = R.field
    c0, F = R.c0, R.frobenius
    A = f.zeros((R.model.dim, c0))
    for k, row in enumerate(R.model.rows):
        for i in range(F + 1):
            A[k, F - i] = row[i]
    sols = nullspace(A, f, c0)
    return FracIdeal.canonical(R, EchelonSubspace.from_rows(f, 0, c0, list(sols)))


def verify_canonical(R: CurveRing, omega: FracIdeal, seed: int = 0,
                     samples: int = CANONICAL_SAMPLES) -> None:
    F = R.frobenius
    if colon(omega, omega) != R.one:
        raise EngineFault("canonical ideal: ω:ω != R")
    for a in range(-1, R.c0 + 1):
        if omega.is_value(a) != (a >= 0 and not R.is_value(F - a)):
            raise EngineFault(f"canonical ideal: value {a} violates v(ω) = {{a : F-a ∉ v(R)}}")
    if not (is_subset(R.one, omega) and is_subset(omega, R.normalization)):
        raise EngineFault("canonical ideal: R ⊆ ω ⊆ V fails")
    if mu(omega) != R.cm_type:
        raise EngineFault(f"canonical ideal: μ(ω) = {mu(omega)} != type {R.cm_type}")
    rng = random.Random(seed)
    for i in range(samples):
        J = random_fractional(R, rng) if i % 2 else random_ideal(R, rng)
        if colon(omega, colon(omega, J)) != J:
            raise EngineFault(f"canonical ideal: ω:(ω:J) != J for J = {J!r}")


def canonical_ideal(R: CurveRing, seed: int = 0) -> FracIdeal:
    """The canonical ideal with R ⊆ ω ⊆ V, verified before it is returned."""
    def build():
        if R.is_dvr:
            return R.one
        K0 = _residue_module(R)
        w = reduction_element(K0)
        omega = colon(K0, principal(R, w))
        verify_canonical(R, omega, seed)
        return omega
    return R._cached("omega", build)


# ------------------------------------------------------------- ring profile

@dataclass
class RingProfile:
    e: int
    embdim: int
    type: int
    frobenius: int
    c0: int
    values: list[int]
    colength_conductor: int
    flags: dict[str, bool]

    def to_dict(self) -> dict:
        return {"multiplicity": self.e, "embdim": self.embdim, "type": self.type,
                "frobenius": self.frobenius, "conductorExponent": self.c0,
                "valueSet": self.values, "tail": self.c0,
                "colengthConductor": self.colength_conductor, "flags": dict(self.flags)}


def has_minimal_multiplicity(R: CurveRing) -> bool:
    if R.is_dvr:
        return True
    m = R.maximal_ideal
    return ideal_product(m, m) == m * reduction_element(m)


def is_symmetric(R: CurveRing) -> bool:
    F = R.frobenius
    return all(R.is_value(a) != R.is_value(F - a) for a in range(0, F + 1))


def ring_profile(R: CurveRing) -> RingProfile:
    omega = canonical_ideal(R)
    t = R.cm_type
    if mu(omega) != t:
        raise EngineFault("type via (R:m)/R disagrees with μ(ω)")
    ag = ag_ng_test(R)
    m = R.maximal_ideal
    flags = {
        "isDVR": R.is_dvr,
        "isGorenstein": t == 1,
        "hasMinimalMultiplicity": has_minimal_multiplicity(R),
        "isAlmostGorenstein": ag["almostGorenstein"],
        "isNearlyGorenstein": ag["nearlyGorenstein"],
        "conductorEqualsMaximal": R.conductor == m,
    }
    return RingProfile(R.multiplicity, 1 if R.is_dvr else R.embedding_dimension, t,
                       R.frobenius, R.c0, list(R.values_below_conductor),
                       R.colength_of_conductor(), flags)


def ag_ng_test(R: CurveRing, seed: int = 0, samples: int = 8) -> dict:
    def build():
        if R.is_dvr:
            return {"almostGorenstein": True, "nearlyGorenstein": True, "reductionsTried": 0}
        omega = canonical_ideal(R)
        m = R.maximal_ideal
        mw = ideal_product(m, omega)
        a0 = reduction_element(omega)
        cands = [a0]
        rng = random.Random(seed)
        rows = omega.basis_series()[1:]
        for _ in range(samples):
            a = a0
            for r in rows:
                a = a + r * _coeff(R, rng)
            cands.append(a)
        almost = any(is_subset(mw, principal(R, a)) for a in cands)
        nearly = is_subset(m, trace(omega))
        if almost and not is_ulrich(m, omega):
            raise EngineFault("almost Gorenstein but m is not ω-Ulrich")
        if almost and not nearly:
            raise EngineFault("almost Gorenstein but not nearly Gorenstein")
        return {"almostGorenstein": almost, "nearlyGorenstein": nearly,
                "reductionsTried": len(cands)}
    return R._cached(("agng", seed, samples), build)


# ------------------------------------------------------------- extensions

THEOREM_A_ITEMS = (
    "omegaS_reflexive",
    "omegaS_iso_dualS",
    "omegaS_times_iso_S",
    "S_omega_ulrich",
    "S_reflexive_trace_in_b_omega",
    "S_equals_KS",
    "K_in_S",
    "S_reflexive_conductor_in_a_colon_omega",
    "S_reflexive_conductor_in_core_colon",
)


@dataclass
class ExtensionReport:
    criteria: dict[str, bool | None]
    consistent: bool
    sampled_cm_check: tuple[int, int]
    field_dependent: bool = False

    @property
    def value(self) -> bool | None:
        vals = {v for v in self.criteria.values() if v is not None}
        return vals.pop() if len(vals) == 1 else None

    def to_dict(self) -> dict:
        return {"criteria": dict(self.criteria), "consistent": self.consistent,
                "sampledCMCheck": {"passed": self.sampled_cm_check[0],
                                   "total": self.sampled_cm_check[1]},
                "fieldDependent": self.field_dependent}


def core_colon_omega(R: CurveRing) -> FracIdeal | None:
    """core(ω):_R ω, computed on the integral copy t^c0·ω (None if char too small)."""
    def build():
        omega = canonical_ideal(R)
        shifted = omega.shift(R.c0)
        try:
            C = core(shifted)
        except InputError:
            return None
        return colon_in_ring(C, shifted)
    return R._cached("core_colon_omega", build)


def extension_of(R: CurveRing, texts_or_ideal) -> ExtensionRing:
    """Birational extension R[gens] given as series texts, or from an R-ideal ring."""
    if isinstance(texts_or_ideal, FracIdeal):
        return as_extension(texts_or_ideal)
    f = R.field
    gens = [R.element(t) if isinstance(t, str) else t for t in texts_or_ideal]
    for g in gens:
        if g.is_zero() or g.order < 0:
            raise InputError("extension generators must lie in k[[t]]")
    # R[g_1..g_k] as an R-module: close {1} ∪ gens under products with gens
    E = ideal_from_gens(R, [TruncSeries.monomial(f, 0), *gens])
    for _ in range(R.max_iter):
        nxt = ideal_product(E, E)
        if nxt == E:
            return as_extension(E)
        E = nxt
    raise InputError("extension generators do not give a finite birational extension")


def strongly_reflexive_test(R: CurveRing, S: ExtensionRing, seed: int = 0,
                            samples: int = 6) -> ExtensionReport:
    omega = canonical_ideal(R)
    Sid = S.ideal
    if S.base != R:
        raise InputError("extension over a different ring")
    if not is_subset(R.one, Sid):
        raise InputError("S must contain R")
    a = reduction_element(omega)
    K = colon(omega, principal(R, a))
    omega_S = colon(omega, Sid)
    S_dual = dual(Sid)
    if trace(Sid) != S_dual:
        raise EngineFault("tr(S) != R:S for a birational extension")
    S_refl = is_reflexive(Sid)
    cc = core_colon_omega(R)
    crit: dict[str, bool | None] = {
        "omegaS_reflexive": is_reflexive(omega_S),
        "omegaS_iso_dualS": is_isomorphic(omega_S, S_dual, want_witness=False).iso,
        "omegaS_times_iso_S": is_isomorphic(ideal_product(omega, Sid), Sid,
                                             want_witness=False).iso,
        "S_omega_ulrich": is_ulrich(Sid, omega),
        "S_reflexive_trace_in_b_omega": S_refl and is_subset(S_dual, blowup(omega).b),
        "S_equals_KS": ideal_product(K, Sid) == Sid,
        "K_in_S": is_subset(K, Sid),
        "S_reflexive_conductor_in_a_colon_omega":
            S_refl and is_subset(S_dual, colon(principal(R, a), omega)),
        "S_reflexive_conductor_in_core_colon":
            None if cc is None else (S_refl and is_subset(S_dual, cc)),
    }
    vals = {v for v in crit.values() if v is not None}
    consistent = len(vals) == 1
    rng = random.Random(seed)
    passed = 0
    for _ in range(samples):
        J = random_fractional(S.ring, rng)
        JR = FracIdeal(R, J.lo, J.h, J.model)
        passed += bidual(JR) == JR
    small = R.field.kind == "Fp" and R.field.p < 50
    return ExtensionReport(crit, consistent, (passed, samples), small)


def gorenstein_extension_test(R: CurveRing, S: ExtensionRing) -> dict:
    Sid = S.ideal
    if not is_reflexive(Sid):
        raise InputError("S is not a reflexive R-module")
    omega = canonical_ideal(R)
    gor = is_isomorphic(colon(omega, Sid), Sid, want_witness=False).iso
    I = dual(Sid)
    ulrich = (is_isomorphic(I, ideal_product(I, I), want_witness=False).iso
              and is_isomorphic(I, ideal_product(I, omega), want_witness=False).iso)
    if gor != ulrich:
        raise EngineFault(f"Gorenstein side {gor} disagrees with Ulrich side {ulrich}")
    return {"gorenstein": gor, "ulrichSide": ulrich}


# ------------------------------------------------------------- enumeration

FILTERS = ("trace", "reflexiveTrace", "integrallyClosed")
DEFAULT_BUDGET = 250_000


@dataclass
class EnumerationReport:
    field: str
    sweep: str
    swept: int
    lists: dict[str, list[FracIdeal]]
    iso_classes: list[list[FracIdeal]]
    timing: float
    field_dependent: bool = dc_field(default=False)

    @property
    def counts(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.lists.items()}


def _sort_key(I: FracIdeal):
    return (I.lo, I.h, I.pivots, tuple(int(x) for x in I.model.rows.ravel().tolist()))


def _closed_patterns(values: list[int], member, R: CurveRing):
    """Pivot patterns P ⊆ range(len(values)) whose value set is a v(R)-module."""
    gens_vals = sorted({a for a in range(1, R.c0 + 1) if R.is_value(a)})
    n = len(values)
    for k in range(n + 1):
        for P in itertools.combinations(range(n), k):
            vals = {values[i] for i in P}
            if all(member(v + a) or (v + a) in vals for v in vals for a in gens_vals):
                yield P


def _param_count(P, n):
    Ps = set(P)
    return sum(1 for i in P for j in range(i + 1, n) if j not in Ps)


def _sweep(R: CurveRing, basis: list[np.ndarray], lo: int, base_gens: list[TruncSeries],
           patterns, expected_len):
    """All R-modules base + span(W), W running over subspaces with the given pivot patterns."""
    f = R.field
    p = f.p
    n = len(basis)
    for P in patterns:
        Ps = set(P)
        free = [(i, j) for i in P for j in range(i + 1, n) if j not in Ps]
        for coeffs in itertools.product(range(p), repeat=len(free)):
            rows = {i: basis[i].copy() for i in P}
            for (i, j), c in zip(free, coeffs):
                if c:
                    rows[i] = f.reduce(rows[i] + c * basis[j])
            gens = [TruncSeries.from_dense(f, lo, r) for r in rows.values()] + base_gens
            I = ideal_from_gens(R, gens)
            if expected_len(I) == len(P):
                yield I


def enumerate_submodules(R: CurveRing, filters=FILTERS, budget: int = DEFAULT_BUDGET,
                         colength_bound: int = 6, sweep: str = "auto") -> EnumerationReport:
    """Exhaustive lists of trace / reflexive trace / integrally closed ideals in [𝔠, R]."""
    t0 = time.perf_counter()
    f = R.field
    if f.kind != "Fp":
        raise InputError("enumeration needs a prime field")
    filters = tuple(filters)
    for name in filters:
        if name not in FILTERS:
            raise InputError(f"unknown filter {name!r}; choose from {', '.join(FILTERS)}")
    n = R.colength_of_conductor()
    if n > colength_bound:
        raise InputError(f"ℓ(R/𝔠) = {n} exceeds the enumeration bound {colength_bound}")
    if sweep not in ("auto", "conductor", "normalization"):
        raise InputError(f"unknown sweep {sweep!r}")
    lists: dict[str, list[FracIdeal]] = {}
    chosen = "none"
    swept = 0
    need_traces = any(x in filters for x in ("trace", "reflexiveTrace"))
    if need_traces:
        c = R.conductor
        vals = list(R.values_below_conductor)
        pats_a = list(_closed_patterns(vals, lambda v: v >= R.c0, R))
        cost_a = sum(f.p ** _param_count(P, len(vals)) for P in pats_a)
        gaps = [g for g in range(R.c0) if not R.is_value(g)]
        pats_b = list(_closed_patterns(gaps, R.is_value, R))
        cost_b = sum(f.p ** _param_count(P, len(gaps)) for P in pats_b)
        if sweep == "auto":
            sweep = "conductor" if cost_a <= cost_b else "normalization"
        cost = cost_a if sweep == "conductor" else cost_b
        if cost > budget:
            raise BudgetExceededError(f"enumeration needs {cost} subspaces, "
                                      f"budget {budget}; no partial result is reported")
        found: set[FracIdeal] = set()
        chosen = sweep
        if sweep == "conductor":
            # ideals between 𝔠 and R, tested directly
            basis = [r.copy() for r in R.model.rows]
            base = [TruncSeries.monomial(f, j) for j in range(R.c0, R.c0 + R.multiplicity)]
            for I in _sweep(R, basis, 0, base, pats_a, lambda I: length(I, c)):
                swept += 1
                if trace(I) == I:
                    found.add(I)
        else:
            # every regular ideal is isomorphic to some J with R ⊆ J ⊆ V; traces are
            # isomorphism invariants, so T(R) = {tr(J)}
            basis = []
            for g in gaps:
                v = f.zeros(R.c0)
                v[g] = 1
                basis.append(v)
            base = [TruncSeries.monomial(f, 0)]
            for J in _sweep(R, basis, 0, base, pats_b, lambda J: length(J, R.one)):
                swept += 1
                found.add(trace(J))
        traces = sorted(found, key=_sort_key)
        for I in traces:
            if not trace_profile(I).is_trace_ideal:
                raise EngineFault(f"enumerated trace ideal {I!r} fails trace_profile")
        if "trace" in filters:
            lists["trace"] = traces
        if "reflexiveTrace" in filters:
            refl = [I for I in traces if dual_profile(I).is_reflexive]
            lists["reflexiveTrace"] = refl
    if "integrallyClosed" in filters:
        # integrally closed ideals are value-determined: R ∩ t^a V, proper ones in [𝔠, R]
        closed = []
        for a in range(1, R.c0 + 1):
            if R.is_value(a):
                I = R.one & R.tail_ideal(a)
                if integral_closure(I) != I:
                    raise EngineFault("R ∩ t^a V is not integrally closed")
                closed.append(I)
        lists["integrallyClosed"] = closed
    seen: list[FracIdeal] = []
    for items in lists.values():
        for I in items:
            if I not in seen:
                seen.append(I)
    classes: list[list[FracIdeal]] = []
    for I in seen:
        key = (tuple(p - I.lo for p in I.pivots), I.h - I.lo)
        for cls in classes:
            J = cls[0]
            if (tuple(p - J.lo for p in J.pivots), J.h - J.lo) == key and \
                    is_isomorphic(I, J, want_witness=False).iso:
                cls.append(I)
                break
        else:
            classes.append([I])
    return EnumerationReport(str(f), chosen, swept, lists, classes,
                             time.perf_counter() - t0, f.p < 50)
