"""Reports: payload builders and plain / json / tsv rendering."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from importlib import metadata

from .ideals import FracIdeal
from .series import render_series

FORMATS = ("plain", "json", "tsv")


def engine_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return "0+unknown"


def input_digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def value_set_text(M: FracIdeal) -> str:
    vals, h = M.value_set()
    head = ", ".join(str(v) for v in vals)
    return f"{{{head}{', ' if head else ''}≥{h}}}"


def ideal_payload(M: FracIdeal) -> dict:
    vals, h = M.value_set()
    return {"valueSet": vals, "tail": h, "order": M.lo,
            "generators": [render_series(g) for g in M.generator_series()],
            "text": value_set_text(M)}


@dataclass
class Report:
    command: str
    field: str
    ring: list[str]
    inputs: dict
    payload: dict = dc_field(default_factory=dict)
    items: list[dict] = dc_field(default_factory=list)
    columns: list[str] = dc_field(default_factory=list)
    timing: float | None = None
    ok: bool = True

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "field": self.field,
            "ring": self.ring,
            "input": {"digest": input_digest(self.inputs), **self.inputs},
            "engineVersion": engine_version(),
            "timing": None if self.timing is None else round(self.timing, 4),
            "items": self.items,
            "ok": self.ok,
        }
        out.update(self.payload)
        return out


def _plain_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return {True: "true", False: "false", None: "n/a"}[v]
    if isinstance(v, dict) and "text" in v:
        return v["text"] + ("  gens: " + ", ".join(v["generators"]) if v.get("generators") else "")
    if isinstance(v, list):
        return ", ".join(_plain_value(x) for x in v) if v else "(none)"
    if isinstance(v, dict):
        return "; ".join(f"{k}={_plain_value(x)}" for k, x in v.items())
    return str(v)


def _plain(report: Report) -> str:
    lines = [f"{report.command}: {report.field}  k[[{', '.join(report.ring)}]]" if report.ring
             else f"{report.command}: {report.field}"]
    for key, val in report.payload.items():
        if key in ("criteria", "flags") and isinstance(val, dict):
            lines.append(f"{key}:")
            lines += [f"  {k}: {_plain_value(v)}" for k, v in val.items()]
        else:
            lines.append(f"{key}: {_plain_value(val)}")
    if report.items:
        lines.append("items:")
        for it in report.items:
            lines.append("  " + "  ".join(f"{c}={_plain_value(it.get(c))}" for c in report.columns))
    if report.timing is not None:
        lines.append(f"timing: {report.timing:.3f}s")
    return "\n".join(lines) + "\n"


def _tsv_cell(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, ensure_ascii=False, sort_keys=True)
    if isinstance(v, bool) or v is None:
        return _plain_value(v)
    return str(v).replace("\t", " ")


def render_report(report: Report, fmt: str = "plain") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt == "tsv":
        rows = ["\t".join(report.columns)]
        rows += ["\t".join(_tsv_cell(it.get(c)) for c in report.columns) for it in report.items]
        return "\n".join(rows) + "\n"
    if fmt == "plain":
        return _plain(report)
    raise ValueError(f"unknown format {fmt!r}")
