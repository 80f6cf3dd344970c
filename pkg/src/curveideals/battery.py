"""Seeded property battery: every structural invariant, checked on random ideals.

Each check is a function of one sample (random ideals drawn from a seeded
stream) returning True (pass), False (fail) or None (hypothesis not met).
Ring-level checks run once.  Failures carry a replayable witness: the seed,
the sample index and the generators of the ideals involved.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .classify import (ag_ng_test, canonical_ideal, extension_of, has_minimal_multiplicity,
                       is_symmetric, ring_profile, strongly_reflexive_test)
from .errors import InputError
from .ideals import (CurveRing, FracIdeal, bidual, blowup, colon, colon_in_ring, core, dual,
                     end_ring, ideal_from_gens, integral_closure, is_isomorphic, is_reflexive,
                     is_subset, is_ulrich, mu, normalization_extension, power, principal,
                     principal_reduction, trace)
from .sampling import random_colength_two, random_fractional, random_ideal
from .series import render_series


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "failed": self.failed,
                "skipped": self.skipped, "witness": self.witness}


@dataclass
class BatteryReport:
    ring: str
    field: str
    seed: int
    samples: int
    checks: list[CheckResult]
    timing: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)


def _gens_text(M: FracIdeal) -> str:
    return "(" + ", ".join(render_series(g) for g in M.generator_series()) + ")"


class Sample:
    """Random ideals for one battery round; derived objects are built on demand."""

    def __init__(self, R: CurveRing, rng: random.Random, max_gens: int, vr: int | None):
        self.R = R
        self.I = random_ideal(R, rng, max_gens, vr)
        self.M = random_fractional(R, rng, max_gens, vr)
        self.N = random_fractional(R, rng, max_gens, vr)
        self.X = random_ideal(R, rng, max_gens, vr)
        self.Y = random_ideal(R, rng, max_gens, vr)
        self.C2 = random_colength_two(R, rng) if not R.is_dvr else None
        self._memo: dict = {}

    def memo(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    @property
    def x(self):
        return principal_reduction(self.I).x

    @property
    def xR(self) -> FracIdeal:
        return self.memo("xR", lambda: principal(self.R, self.x))

    @property
    def B(self) -> FracIdeal:
        return blowup(self.I).B.ideal

    @property
    def U1(self) -> FracIdeal:
        """An I-Ulrich ideal: a B(I)-module."""
        return self.memo("U1", lambda: self.B * self.X)

    @property
    def U2(self) -> FracIdeal:
        return self.memo("U2", lambda: self.B * self.Y)

    @property
    def omega_ulrich(self) -> FracIdeal:
        omega = canonical_ideal(self.R)
        return self.memo("Uw", lambda: blowup(omega).B.ideal * self.X)

    def extensions(self):
        R = self.R
        return [end_ring(R.maximal_ideal) if not R.is_dvr else normalization_extension(R),
                normalization_extension(R), blowup(self.I).B, end_ring(self.M)]

    def describe(self) -> str:
        return (f"I={_gens_text(self.I)} M={_gens_text(self.M)} N={_gens_text(self.N)} "
                f"X={_gens_text(self.X)} Y={_gens_text(self.Y)}")


# ------------------------------------------------------------- sample checks

def chk_canonical_form(s: Sample):
    M = s.M
    return ideal_from_gens(s.R, M.generator_series()) == M and \
        ideal_from_gens(s.R, [*M.basis_series(), *M.generator_series()[::-1]]) == M


def chk_dual_stability(s: Sample):
    return dual(bidual(s.M)) == dual(s.M)


def chk_trace_idempotence(s: Sample):
    return trace(trace(s.M)) == trace(s.M)


def chk_conductor_bound(s: Sample):
    return is_subset(s.R.conductor, trace(s.I))


def _trace_formula_rhs(s: Sample, corrupt: bool) -> FracIdeal:
    inner = s.I * colon_in_ring(s.xR, s.I)
    if corrupt:
        return inner
    return colon_in_ring(inner, s.xR)


def chk_trace_formula(s: Sample, corrupt: bool = False):
    return trace(s.I) == _trace_formula_rhs(s, corrupt)


def chk_reduction_number_one(s: Sample):
    I = s.I
    if I * I != s.xR * I:
        return None
    ok = trace(I) == colon_in_ring(s.xR, I)
    if ok and trace(I) == I:
        ok = bidual(I) == I
    return ok


def chk_shifted_containment(s: Sample):
    J = colon(s.I, s.xR)
    return is_subset(s.R.conductor, dual(J))


def chk_ulrich_lattice(s: Sample):
    U1, U2 = s.U1, s.U2
    return (is_ulrich(U1, s.I) and is_ulrich(U2, s.I) and is_ulrich(U1 + U2, s.I)
            and is_ulrich(U1 & U2, s.I))


def chk_ulrich_colon(s: Sample):
    return is_ulrich(colon(s.N, s.U1), s.I)


def chk_ulrich_trace(s: Sample):
    return is_ulrich(trace(s.U1), s.I)


def chk_largest_ulrich(s: Sample):
    R = s.R
    J = s.U1
    while not is_subset(J, R.one):
        J = s.xR * J
    b = blowup(s.I).b
    ok = is_ulrich(J, s.I) and is_subset(J, b)
    if ok and is_ulrich(s.X, s.I, cross_check=False):
        ok = is_subset(s.X, b)
    return ok


def chk_trace_interval(s: Sample):
    mid = colon_in_ring(s.xR, s.I)
    return is_subset(trace(s.U1), mid) and is_subset(mid, trace(s.I))


def chk_core_identity(s: Sample):
    p = s.R.field.characteristic
    if p and p <= principal_reduction(s.I).reduction_number:
        return None
    return blowup(s.I).b == colon_in_ring(core(s.I), s.I)


def chk_hom_shift(s: Sample):
    # S:M = I:(IM) = I:(xM), so I:M = x(S:M); in particular I:M ≅ S:M
    lhs = colon(s.I, s.U1)
    rhs = colon(end_ring(s.I).ideal, s.U1)
    return lhs == s.xR * rhs and is_isomorphic(lhs, rhs, want_witness=False).iso


def chk_omega_duality(s: Sample):
    omega = canonical_ideal(s.R)
    for M in (s.M, s.omega_ulrich):
        lhs = is_ulrich(M, omega)
        rhs = is_isomorphic(dual(M), colon(omega, M), want_witness=False).iso
        if lhs != rhs:
            return False
    return True


def chk_omega_ulrich_reflexive(s: Sample):
    omega = canonical_ideal(s.R)
    U = s.omega_ulrich
    ok = is_ulrich(U, omega) and is_reflexive(U)
    if ok and is_ulrich(s.M, omega):
        ok = is_reflexive(s.M)
    return ok


def chk_closure_reflexive(s: Sample):
    C = integral_closure(s.I)
    return bidual(C) == C


def chk_faber(s: Sample):
    M = bidual(s.M)
    for S in s.extensions():
        if (S.ideal * M == M) != is_subset(trace(M), dual(S.ideal)):
            return False
    return True


def chk_conductor_roundtrip(s: Sample):
    tried = False
    for S in s.extensions():
        if not is_reflexive(S.ideal):
            continue
        tried = True
        I = dual(S.ideal)
        if trace(I) != I or not is_reflexive(I):
            return False
        if dual(end_ring(I).ideal) != I or end_ring(I).ideal != S.ideal:
            return False
    return True if tried else None


def chk_colength_two_minmult(s: Sample):
    if s.C2 is None or not has_minimal_multiplicity(s.R):
        return None
    I = s.C2
    return is_reflexive(I) == (integral_closure(I) == I or mu(I) == 1)


def chk_canonical_duality(s: Sample):
    omega = canonical_ideal(s.R)
    return all(colon(omega, colon(omega, J)) == J for J in (s.M, s.I))


def chk_theorem_a(s: Sample):
    rep = strongly_reflexive_test(s.R, end_ring(s.M), samples=1)
    return rep.consistent


SAMPLE_CHECKS: list[tuple[str, Callable]] = [
    ("canonical_form", chk_canonical_form),
    ("dual_stability", chk_dual_stability),
    ("trace_idempotence", chk_trace_idempotence),
    ("conductor_in_trace", chk_conductor_bound),
    ("trace_formula", chk_trace_formula),
    ("reduction_number_one", chk_reduction_number_one),
    ("shifted_containment", chk_shifted_containment),
    ("ulrich_lattice", chk_ulrich_lattice),
    ("ulrich_colon", chk_ulrich_colon),
    ("ulrich_trace", chk_ulrich_trace),
    ("largest_ulrich", chk_largest_ulrich),
    ("trace_interval", chk_trace_interval),
    ("core_identity", chk_core_identity),
    ("ulrich_hom_shift", chk_hom_shift),
    ("omega_duality", chk_omega_duality),
    ("omega_ulrich_reflexive", chk_omega_ulrich_reflexive),
    ("closure_reflexive", chk_closure_reflexive),
    ("faber_criterion", chk_faber),
    ("conductor_roundtrip", chk_conductor_roundtrip),
    ("colength_two_minmult", chk_colength_two_minmult),
    ("canonical_duality", chk_canonical_duality),
    ("theorem_a_consistency", chk_theorem_a),
]


# ------------------------------------------------------------- ring checks

def rchk_gorenstein_triangulation(R: CurveRing):
    omega = canonical_ideal(R)
    a = R.cm_type == 1
    b = is_isomorphic(omega, R.one, want_witness=False).iso
    c = is_symmetric(R)
    return a == b == c


def rchk_almost_gorenstein_powers(R: CurveRing):
    if R.is_dvr or not ag_ng_test(R)["almostGorenstein"]:
        return None
    m = R.maximal_ideal
    return all(is_reflexive(power(m, n)) for n in range(1, 6))


def rchk_profile_invariants(R: CurveRing):
    prof = ring_profile(R)
    fl = prof.flags
    ok = (not fl["isAlmostGorenstein"]) or fl["isNearlyGorenstein"]
    ok = ok and fl["isGorenstein"] == (prof.type == 1)
    if not R.is_dvr:
        ok = ok and fl["hasMinimalMultiplicity"] == (prof.e == prof.embdim)
    return ok


def rchk_theorem_a_standard(R: CurveRing):
    omega = canonical_ideal(R)
    exts = [normalization_extension(R), extension_of(R, R.one), blowup(omega).B]
    if not R.is_dvr:
        exts.append(end_ring(R.maximal_ideal))
    reps = [strongly_reflexive_test(R, S, samples=2) for S in exts]
    return all(r.consistent for r in reps) and reps[0].value is True


RING_CHECKS: list[tuple[str, Callable]] = [
    ("gorenstein_triangulation", rchk_gorenstein_triangulation),
    ("almost_gorenstein_powers", rchk_almost_gorenstein_powers),
    ("profile_invariants", rchk_profile_invariants),
    ("theorem_a_standard_extensions", rchk_theorem_a_standard),
]

CHECK_NAMES = [n for n, _ in SAMPLE_CHECKS] + [n for n, _ in RING_CHECKS]


def _record(res: CheckResult, outcome, witness: Callable[[], str]):
    if outcome is None:
        res.skipped += 1
    elif outcome:
        res.passed += 1
    else:
        res.failed += 1
        if res.witness is None:
            res.witness = witness()


def property_battery(R: CurveRing, seed: int = 0, sample_count: int = 50, max_gens: int = 3,
                     valuation_range: int | None = None, checks=None,
                     corrupt_trace_formula: bool = False) -> BatteryReport:
    """Run the invariant checks on ``sample_count`` seeded samples.

    ``corrupt_trace_formula`` replaces the trace formula by a wrong one, to
    confirm that the harness does detect failures.
    """
    t0 = time.perf_counter()
    wanted = set(checks) if checks is not None else set(CHECK_NAMES)
    unknown = wanted - set(CHECK_NAMES)
    if unknown:
        raise InputError(f"unknown checks: {', '.join(sorted(unknown))}")
    results = {n: CheckResult(n) for n in CHECK_NAMES if n in wanted}
    rng = random.Random(seed)
    for i in range(sample_count):
        s = Sample(R, rng, max_gens, valuation_range)
        for name, fn in SAMPLE_CHECKS:
            if name not in results:
                continue
            if name == "trace_formula":
                outcome = fn(s, corrupt_trace_formula)
            else:
                outcome = fn(s)
            _record(results[name], outcome,
                    lambda: f"seed={seed} sample={i} {s.describe()}")
    for name, fn in RING_CHECKS:
        if name in results:
            _record(results[name], fn(R), lambda: f"ring-level check on {R.describe()}")
    return BatteryReport(R.describe(), str(R.field), seed, sample_count,
                         list(results.values()), time.perf_counter() - t0)
