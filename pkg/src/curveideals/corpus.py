"""Fixed table of worked examples from the literature, each with its exact expected output."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .classify import enumerate_submodules, extension_of, ring_profile, strongly_reflexive_test
from .errors import InputError
from .ideals import (CurveRing, FracIdeal, bidual, colon, contract, dual, end_ring,
                     integral_closure, is_isomorphic, is_reflexive, is_ulrich, length,
                     normalization_extension, power, ring_new, trace)
from .series import FieldSpec, TruncSeries

Q = FieldSpec.rationals()


def _ring(gens: str, field: FieldSpec = Q) -> CurveRing:
    return ring_new(field, gens.split(","))


def _values(M: FracIdeal) -> tuple[list[int], int]:
    return M.value_set()


def _semigroup_values(gens: list[int], upto: int) -> set[int]:
    vals = {0}
    for n in range(1, upto):
        if any(n - g in vals for g in gens if n >= g):
            vals.add(n)
    return vals


def _same_values_as_semigroup(M: FracIdeal, gens: list[int]) -> bool:
    upto = M.h + max(gens) + 1
    sg = _semigroup_values(gens, upto)
    return all(M.is_value(a) == (a in sg) for a in range(0, upto))


# each row returns (passed, detail)

def row_values_4_5_6():
    R = _ring("t^4,t^5,t^6")
    ok = (list(R.values_below_conductor) == [0, 4, 5, 6] and R.frobenius == 7 and R.c0 == 8
          and R.multiplicity == 4 and length(R.one, R.conductor) == 4)
    return ok, f"values {list(R.values_below_conductor)}+[{R.c0},∞), F={R.frobenius}"


def row_conductor_6_8():
    R = _ring("t^6,t^8,t^11,t^13,t^15")
    return R.c0 == 11 and R.conductor == R.tail_ideal(11), f"c0={R.c0}"


def row_m2_values():
    R = _ring("t^5,t^6,t^14")
    m2 = power(R.maximal_ideal, 2)
    return _values(m2) == ([10, 11, 12], 15), f"m² values {_values(m2)}"


def row_t6m2_m3():
    R = _ring("t^6,t^8,t^11,t^13,t^15")
    m = R.maximal_ideal
    lhs = power(m, 2) * TruncSeries.monomial(Q, 6)
    return lhs == power(m, 3), "t^6·m² vs m³"


def row_colon_5_6_7():
    R = _ring("t^5,t^6,t^7")
    J = colon(R.ideal("t^5"), R.ideal("t^5", "t^7"))
    return J == R.ideal("t^5", "t^13", "t^14"), f"(t^5):(t^5,t^7) values {_values(J)}"


def row_dual_m2():
    R = _ring("t^5,t^6,t^14")
    d = dual(power(R.maximal_ideal, 2))
    return _values(d) == ([0], 4), f"R:m² values {_values(d)}"


def row_m2_not_reflexive():
    R = _ring("t^5,t^6,t^14")
    m2 = power(R.maximal_ideal, 2)
    t14 = TruncSeries.monomial(Q, 14)
    ok = not is_reflexive(m2) and t14 in bidual(m2) and t14 not in m2
    return ok, "t^14 ∈ (m²)** \\ m²"


def row_bidual_5_7():
    R = _ring("t^5,t^6,t^7")
    bd = bidual(R.ideal("t^5", "t^7"))
    ok = bd == R.maximal_ideal and is_isomorphic(bd, R.maximal_ideal).iso
    return ok, f"bidual values {_values(bd)}"


def row_trace_5_7():
    R = _ring("t^5,t^6,t^7")
    I = R.ideal("t^5", "t^7")
    return trace(I) == I, "tr(I) = I"


def row_trace_m():
    ok = True
    for gens in ("t^4,t^5,t^6", "t^5,t^6,t^7", "t^3,t^4,t^5", "t^6,t^8,t^11,t^13,t^15"):
        R = _ring(gens)
        ok = ok and trace(R.maximal_ideal) == R.maximal_ideal
    return ok, "tr(m) = m on four rings"


def row_closure_Ia():
    R = _ring("t^4,t^5,t^6")
    ok = all(integral_closure(R.ideal(f"t^4 - {a}*t^5", "t^6")) == R.maximal_ideal
             for a in (1, 2, 3, 4))
    return ok, "closure of I_a is m"


def row_colength_Ia():
    R = _ring("t^4,t^5,t^6")
    ok = all(length(R.one, R.ideal(f"t^4 - {a}*t^5", "t^6")) == 2 for a in (1, 2, 3))
    return ok and length(R.one, R.conductor) == 4, "ℓ(R/I_a) = 2, ℓ(R/𝔠) = 4"


def row_ulrich_conductor():
    ok = True
    for gens in ("t^4,t^5,t^6", "t^5,t^6,t^7"):
        R = _ring(gens)
        for I in (R.maximal_ideal, R.ideal("t^5", "t^6") if gens.startswith("t^4") else
                  R.ideal("t^5", "t^7")):
            ok = ok and is_ulrich(R.normalization, I) and is_ulrich(R.conductor, I)
            ok = ok and not is_ulrich(R.one, I)
        ok = ok and is_ulrich(R.one, R.ideal("t^5"))
    return ok, "V, 𝔠 Ulrich; R Ulrich only for principal I"


def row_end_m_4_5_6():
    R = _ring("t^4,t^5,t^6")
    E = end_ring(R.maximal_ideal).ideal
    return _same_values_as_semigroup(E, [4, 5, 6, 7]), f"End(m) values {_values(E)}"


def row_end_m_4_6_7_9():
    R = _ring("t^4,t^6,t^7,t^9")
    E = end_ring(R.maximal_ideal).ideal
    return _same_values_as_semigroup(E, [2, 3]), f"End(m) values {_values(E)}"


def row_dual_m2_conductor():
    R = _ring("t^6,t^8,t^11,t^13,t^15")
    d = dual(power(R.maximal_ideal, 2))
    ok = d == R.conductor.shift(-12) and is_isomorphic(d, R.conductor).iso
    ok = ok and not is_reflexive(power(R.maximal_ideal, 2))
    return ok, f"(m²)* values {_values(d)}"


def row_contract_Ia():
    R = _ring("t^4,t^5,t^6")
    S = end_ring(R.maximal_ideal)
    ok = True
    for a in (1, 2):
        Ia = R.ideal(f"t^4 - {a}*t^5", "t^6")
        res = contract(Ia, S)
        ok = ok and res.J == Ia and res.colength_two_criterion is True
        ok = ok and length(S.ideal, Ia * S.ideal) == 3
    return ok, "I_a·S ∩ R = I_a, ℓ(S/I_aS) = 3"


def row_profile_4_5_6():
    p = ring_profile(_ring("t^4,t^5,t^6"))
    ok = p.e == 4 and p.type == 1 and p.flags["isGorenstein"] \
        and not p.flags["hasMinimalMultiplicity"]
    return ok, f"e={p.e} type={p.type}"


def row_profile_4_5_6_7():
    p = ring_profile(_ring("t^4,t^5,t^6,t^7"))
    ok = p.flags["hasMinimalMultiplicity"] and p.flags["conductorEqualsMaximal"]
    return ok, f"flags {p.flags}"


def row_ext_V():
    ok = True
    for gens in ("t^4,t^5,t^6", "t^5,t^6,t^7", "t^3,t^4,t^5"):
        R = _ring(gens)
        rep = strongly_reflexive_test(R, normalization_extension(R))
        ok = ok and rep.consistent and rep.value is True
    return ok, "S = V: all criteria true"


def row_ext_R():
    R = _ring("t^4,t^5,t^6")
    gor = strongly_reflexive_test(R, extension_of(R, R.one))
    R2 = _ring("t^5,t^6,t^7")
    non = strongly_reflexive_test(R2, extension_of(R2, R2.one))
    ok = gor.consistent and gor.value is True and non.consistent and non.value is False
    return ok, "S = R: true iff Gorenstein"


def row_trace_ideals_4_6_7_9():
    R = ring_new(FieldSpec.prime(101), ["t^4", "t^6", "t^7", "t^9"])
    T = enumerate_submodules(R, ["trace"]).lists["trace"]
    ok = set(T) == {R.conductor, R.maximal_ideal, R.one}
    return ok, f"{len(T)} trace ideals"


def row_trace_ideals_4_5_6_7():
    R = ring_new(FieldSpec.prime(101), ["t^4", "t^5", "t^6", "t^7"])
    T = enumerate_submodules(R, ["trace"]).lists["trace"]
    ok = set(T) == {R.maximal_ideal, R.one}
    return ok, f"{len(T)} trace ideals"


def row_closed_ideals_4_5_6():
    F5 = FieldSpec.prime(5)
    R = ring_new(F5, ["t^4", "t^5", "t^6"])
    rep = enumerate_submodules(R)
    want = [R.one & R.tail_ideal(a) for a in (4, 5, 6, 8)]
    ok = rep.lists["integrallyClosed"] == want and R.conductor == want[-1]
    ok = ok and all(R.ideal(f"t^4 - {a}*t^5", "t^6") in rep.lists["reflexiveTrace"]
                    for a in range(1, 5))
    return ok, f"counts {rep.counts}"


@dataclass
class CorpusRow:
    id: str
    description: str
    run: Callable[[], tuple[bool, str]]


ROWS = [
    CorpusRow("values-4-5-6", "k[[t^4,t^5,t^6]]: values, F = 7, c0 = 8, ℓ(R/𝔠) = 4", row_values_4_5_6),
    CorpusRow("conductor-6-8-11-13-15", "k[[t^6,t^8,t^11,t^13,t^15]]: 𝔠 = t^11 V", row_conductor_6_8),
    CorpusRow("m2-values-5-6-14", "k[[t^5,t^6,t^14]]: m² = (t^10,t^11,t^12,t^15,…)", row_m2_values),
    CorpusRow("t6m2-m3-6-8-11-13-15", "k[[t^6,…,t^15]]: t^6·m² = m³", row_t6m2_m3),
    CorpusRow("colon-5-6-7", "k[[t^5,t^6,t^7]]: (t^5):(t^5,t^7) = (t^5,t^13,t^14)", row_colon_5_6_7),
    CorpusRow("dual-m2-5-6-14", "k[[t^5,t^6,t^14]]: R:m² = (1,t^4,t^5,t^6,…)", row_dual_m2),
    CorpusRow("m2-not-reflexive-5-6-14", "k[[t^5,t^6,t^14]]: t^14 ∈ (m²)** but not in m²",
              row_m2_not_reflexive),
    CorpusRow("bidual-5-7", "k[[t^5,t^6,t^7]]: (t^5,t^7)** = m", row_bidual_5_7),
    CorpusRow("trace-5-7", "k[[t^5,t^6,t^7]]: (t^5,t^7) is a trace ideal", row_trace_5_7),
    CorpusRow("trace-m", "m is a trace ideal in non-DVR rings", row_trace_m),
    CorpusRow("closure-Ia-4-5-6", "k[[t^4,t^5,t^6]]: integral closure of I_a is m", row_closure_Ia),
    CorpusRow("colength-Ia-4-5-6", "k[[t^4,t^5,t^6]]: ℓ(R/I_a) = 2", row_colength_Ia),
    CorpusRow("ulrich-V-conductor", "V and 𝔠 are I-Ulrich; R only for principal I",
              row_ulrich_conductor),
    CorpusRow("end-m-4-5-6", "k[[t^4,t^5,t^6]]: End(m) = k[[t^4,t^5,t^6,t^7]]", row_end_m_4_5_6),
    CorpusRow("end-m-4-6-7-9", "k[[t^4,t^6,t^7,t^9]]: End(m) = k[[t^2,t^3]]", row_end_m_4_6_7_9),
    CorpusRow("dual-m2-6-8-11-13-15", "k[[t^6,…,t^15]]: (m²)* = t^-12·𝔠", row_dual_m2_conductor),
    CorpusRow("contract-Ia-4-5-6", "k[[t^4,t^5,t^6]]: I_a·End(m) ∩ R = I_a", row_contract_Ia),
    CorpusRow("profile-4-5-6", "k[[t^4,t^5,t^6]]: e = 4, Gorenstein, not minimal multiplicity",
              row_profile_4_5_6),
    CorpusRow("profile-4-5-6-7", "k[[t^4,…,t^7]]: minimal multiplicity, 𝔠 = m", row_profile_4_5_6_7),
    CorpusRow("extension-V", "S = V is strongly reflexive", row_ext_V),
    CorpusRow("extension-R", "S = R strongly reflexive iff R Gorenstein", row_ext_R),
    CorpusRow("trace-ideals-4-6-7-9", "F_101, k[[t^4,t^6,t^7,t^9]]: T(R) = {𝔠, m, R}",
              row_trace_ideals_4_6_7_9),
    CorpusRow("trace-ideals-4-5-6-7", "F_101, k[[t^4,…,t^7]]: T(R) = {m, R}",
              row_trace_ideals_4_5_6_7),
    CorpusRow("closed-ideals-4-5-6", "F_5, k[[t^4,t^5,t^6]]: integrally closed ideals in [𝔠, R]",
              row_closed_ideals_4_5_6),
]

ROW_IDS = [r.id for r in ROWS]


@dataclass
class CorpusResult:
    id: str
    description: str
    passed: bool
    detail: str
    timing: float

    def to_dict(self) -> dict:
        return {"id": self.id, "description": self.description, "passed": self.passed,
                "detail": self.detail, "timing": round(self.timing, 4)}


def run_corpus(ids=None) -> list[CorpusResult]:
    """Run the selected rows (all by default); unknown ids are an input error."""
    if ids is None:
        rows = ROWS
    else:
        ids = list(ids)
        unknown = [i for i in ids if i not in ROW_IDS]
        if unknown:
            raise InputError(f"unknown corpus row(s): {', '.join(unknown)}")
        rows = [r for r in ROWS if r.id in ids]
    out = []
    for row in rows:
        t0 = time.perf_counter()
        passed, detail = row.run()
        out.append(CorpusResult(row.id, row.description, bool(passed), detail,
                                time.perf_counter() - t0))
    return out
