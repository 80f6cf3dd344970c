"""Command-line front end.

Exit codes: 0 success, 1 computational failure (non-stabilization, budget,
internal consistency, failing corpus rows or battery checks), 2 input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .battery import CHECK_NAMES, property_battery
from .classify import (FILTERS, ag_ng_test, canonical_ideal, enumerate_submodules, extension_of,
                       gorenstein_extension_test, ring_profile, strongly_reflexive_test)
from .corpus import run_corpus
from .errors import ComputationError, InputError
from .ideals import (CurveRing, FracIdeal, bidual, blowup, core, dual, end_ring,
                     ideal_from_gens, integral_closure, is_subset, length, multiplicity,
                     normalization_extension, principal_reduction, ring_new, trace)
from .report import FORMATS, Report, ideal_payload, render_report
from .series import FieldSpec, render_series


def _split(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    if not all(parts):
        raise InputError(f"empty entry in generator list {text!r}")
    return parts


class Context:
    """Ring, field and named ideals resolved from --spec and the flags."""

    def __init__(self, args):
        spec = {}
        if getattr(args, "spec", None):
            try:
                with open(args.spec, encoding="utf-8") as fh:
                    spec = json.load(fh)
            except OSError as exc:
                raise InputError(f"cannot read spec file: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise InputError(f"spec file is not valid json: {exc}") from exc
            if not isinstance(spec, dict):
                raise InputError("spec file must hold a json object")
        self.field = self._field(args, spec)
        ring = args.ring if getattr(args, "ring", None) else spec.get("ring")
        if isinstance(ring, str):
            ring = _split(ring)
        self.ring_texts = list(ring) if ring else None
        self.ideals = {k: list(v) for k, v in spec.get("ideals", {}).items()}
        self.cap = args.cap if getattr(args, "cap", None) is not None else spec.get("cap", "auto")
        self.max_iter = args.max_iter if getattr(args, "max_iter", None) is not None \
            else spec.get("maxIter")
        self.seed = args.seed if getattr(args, "seed", None) is not None else spec.get("seed", 0)
        self._ring = None

    @staticmethod
    def _field(args, spec) -> FieldSpec:
        if getattr(args, "p", None) is not None:
            return FieldSpec.prime(args.p)
        fd = spec.get("field")
        if fd is None:
            return FieldSpec.rationals()
        if not isinstance(fd, dict) or fd.get("kind") not in ("Q", "Fp"):
            raise InputError("field must be {\"kind\": \"Q\"} or {\"kind\": \"Fp\", \"p\": <prime>}")
        if fd["kind"] == "Q":
            return FieldSpec.rationals()
        if "p" not in fd:
            raise InputError("prime field needs \"p\"")
        return FieldSpec.prime(fd["p"])

    @property
    def ring(self) -> CurveRing:
        if self._ring is None:
            if not self.ring_texts:
                raise InputError("no ring given (use --ring or --spec)")
            self._ring = ring_new(self.field, self.ring_texts, self.cap, self.max_iter)
        return self._ring

    def ideal(self, text: str) -> FracIdeal:
        gens = self.ideals[text] if text in self.ideals else _split(text)
        return ideal_from_gens(self.ring, [self.ring.element(g) for g in gens])

    def inputs(self, **extra) -> dict:
        d = {"field": self.field.to_json(), "ring": self.ring_texts,
             "cap": self.cap, "maxIter": self.max_iter, "seed": self.seed}
        d.update({k: v for k, v in extra.items() if v is not None})
        return d

    def report(self, command: str, **extra) -> Report:
        return Report(command, str(self.field), self.ring_texts or [], self.inputs(**extra))


# ------------------------------------------------------------- subcommands

def _profile_payload(R: CurveRing) -> dict:
    prof = ring_profile(R)
    d = prof.to_dict()
    d["canonicalIdeal"] = ideal_payload(canonical_ideal(R))
    if not R.is_dvr:
        d["endMaximal"] = ideal_payload(end_ring(R.maximal_ideal).ideal)
        d["reductionNumberMaximal"] = principal_reduction(R.maximal_ideal).reduction_number
    return d


def cmd_analyze(ctx: Context, args) -> Report:
    rep = ctx.report("analyze")
    rep.payload = _profile_payload(ctx.ring)
    return rep


def cmd_classify(ctx: Context, args) -> Report:
    R = ctx.ring
    rep = ctx.report("classify")
    rep.payload = _profile_payload(R)
    rep.payload["almostNearly"] = ag_ng_test(R, seed=ctx.seed)
    return rep


def cmd_ideal(ctx: Context, args) -> Report:
    R = ctx.ring
    if not args.ideal:
        raise InputError("--ideal is required")
    M = ctx.ideal(args.ideal)
    rep = ctx.report("ideal", ideal=args.ideal)
    tr = trace(M)
    d = {
        "ideal": ideal_payload(M),
        "valueSet": M.value_set()[0],
        "tail": M.h,
        "dual": ideal_payload(dual(M)),
        "bidual": ideal_payload(bidual(M)),
        "trace": ideal_payload(tr),
        "flags": {"reflexive": bidual(M) == M, "traceIdeal": tr == M,
                  "insideRing": is_subset(M, R.one)},
        "endomorphismRing": ideal_payload(end_ring(M).ideal),
    }
    red = principal_reduction(M)
    d["reduction"] = {"element": render_series(red.x), "reductionNumber": red.reduction_number}
    bl = blowup(M)
    d["blowup"] = ideal_payload(bl.B.ideal)
    d["largestUlrich"] = ideal_payload(bl.b)
    if d["flags"]["insideRing"]:
        d["colength"] = length(R.one, M)
        d["multiplicity"] = multiplicity(M, R.one)
        d["integralClosure"] = ideal_payload(integral_closure(M))
        d["flags"]["integrallyClosed"] = integral_closure(M) == M
        try:
            d["core"] = ideal_payload(core(M))
        except InputError as exc:
            d["core"] = str(exc)
    rep.payload = d
    return rep


def _extension(ctx: Context, text: str):
    R = ctx.ring
    key = text.strip()
    if key in ("V", "normalization"):
        return normalization_extension(R)
    if key in ("R",):
        return extension_of(R, R.one)
    if key in ("End(m)", "Endm"):
        return end_ring(R.maximal_ideal)
    if key in ("B(omega)", "Bomega"):
        return blowup(canonical_ideal(R)).B
    return extension_of(R, _split(key))


def cmd_extension(ctx: Context, args) -> Report:
    R = ctx.ring
    if not args.ext:
        raise InputError("--ext is required (generators, or one of V, R, End(m), B(omega))")
    S = _extension(ctx, args.ext)
    ext = strongly_reflexive_test(R, S, seed=ctx.seed)
    rep = ctx.report("extension", ext=args.ext)
    d = {"extension": ideal_payload(S.ideal), "criteria": ext.criteria,
         "consistent": ext.consistent,
         "sampledCMCheck": {"passed": ext.sampled_cm_check[0], "total": ext.sampled_cm_check[1]},
         "fieldDependent": ext.field_dependent}
    if bidual(S.ideal) == S.ideal:
        d["gorensteinExtension"] = gorenstein_extension_test(R, S)
    else:
        d["gorensteinExtension"] = None
    rep.payload = d
    rep.ok = ext.consistent
    return rep


def cmd_enumerate(ctx: Context, args) -> Report:
    R = ctx.ring
    filters = _split(args.filters) if args.filters else list(FILTERS)
    res = enumerate_submodules(R, filters, budget=args.budget, colength_bound=args.bound)
    rep = ctx.report("enumerate", filters=filters)
    rep.payload = {"sweep": res.sweep, "swept": res.swept, "counts": res.counts,
                   "isomorphismClasses": len(res.iso_classes),
                   "fieldDependent": res.field_dependent}
    rep.columns = ["filter", "index", "valueSet", "tail", "generators", "isoClass"]
    cls_of = {}
    for k, cls in enumerate(res.iso_classes):
        for I in cls:
            cls_of[I] = k
    for name in filters:
        for i, I in enumerate(res.lists.get(name, [])):
            p = ideal_payload(I)
            rep.items.append({"filter": name, "index": i, "valueSet": p["valueSet"],
                              "tail": p["tail"], "generators": p["generators"],
                              "isoClass": cls_of[I], "text": p["text"]})
    return rep


def cmd_battery(ctx: Context, args) -> Report:
    R = ctx.ring
    checks = _split(args.checks) if args.checks else None
    res = property_battery(R, seed=ctx.seed, sample_count=args.samples, checks=checks)
    rep = ctx.report("battery", samples=args.samples, checks=checks)
    rep.payload = {"allPassed": res.all_passed,
                   "counts": {"checks": len(res.checks),
                              "failing": sum(not c.ok for c in res.checks)}}
    rep.columns = ["name", "passed", "failed", "skipped", "witness"]
    rep.items = [c.to_dict() for c in res.checks]
    rep.ok = res.all_passed
    return rep


def cmd_corpus(ctx: Context, args) -> Report:
    rows = run_corpus(_split(args.row) if args.row else None)
    rep = Report("corpus", "mixed", [], {"rows": args.row})
    rep.payload = {"counts": {"rows": len(rows), "passed": sum(r.passed for r in rows)}}
    rep.columns = ["id", "passed", "detail", "description"]
    rep.items = [{k: v for k, v in r.to_dict().items() if k != "timing"} for r in rows]
    rep.ok = all(r.passed for r in rows)
    return rep


COMMANDS = {
    "analyze": cmd_analyze,
    "ideal": cmd_ideal,
    "classify": cmd_classify,
    "extension": cmd_extension,
    "enumerate": cmd_enumerate,
    "battery": cmd_battery,
    "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="comma-separated ring generators, e.g. 't^4,t^5,t^6'")
    common.add_argument("--spec", help="json ring-spec file")
    common.add_argument("-p", type=int, help="work over F_p instead of the rationals")
    common.add_argument("--cap", type=int, help="explicit truncation cap")
    common.add_argument("--max-iter", type=int, help="iteration cap for stabilization loops")
    common.add_argument("--seed", type=int, help="seed for sampled checks")
    common.add_argument("--format", choices=FORMATS, default="plain")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing")

    parser = argparse.ArgumentParser(prog="curveideals", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="ring profile")
    sub.add_parser("classify", parents=[common], help="profile, canonical ideal, AG/NG flags")
    p = sub.add_parser("ideal", parents=[common], help="duals, trace, reductions of one ideal")
    p.add_argument("--ideal", help="ideal name from --spec, or comma-separated generators")
    p = sub.add_parser("extension", parents=[common], help="strongly reflexive extension test")
    p.add_argument("--ext", help="generators of S over R, or V, R, End(m), B(omega)")
    p = sub.add_parser("enumerate", parents=[common], help="trace / reflexive / closed ideals")
    p.add_argument("--filters", help=f"comma-separated subset of {', '.join(FILTERS)}")
    p.add_argument("--budget", type=int, default=250_000)
    p.add_argument("--bound", type=int, default=6, help="largest allowed ℓ(R/𝔠)")
    p = sub.add_parser("battery", parents=[common], help="seeded property battery")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--checks", help=f"comma-separated subset of the {len(CHECK_NAMES)} checks")
    p = sub.add_parser("corpus", parents=[common], help="worked examples with expected output")
    p.add_argument("--row", help="comma-separated row ids (default: all)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        ctx = Context(args)
        rep = COMMANDS[args.command](ctx, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.timing:
        rep.timing = time.perf_counter() - t0
    sys.stdout.write(render_report(rep, args.format))
    return 0 if rep.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
