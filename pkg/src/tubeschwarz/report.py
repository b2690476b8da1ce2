"""Report carriers and deterministic JSON/CSV emission.

Reals are always rendered with 17 significant digits so serialized reports
round-trip exactly and identical (config, seed) pairs yield byte-identical
output.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field


def fmt17(x: float) -> str:
    """17-significant-digit rendering; round-trips any finite double."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.17g}"


@dataclass(frozen=True)
class BoundReport:
    """One inequality check: computed value against its closed-form bound."""

    name: str
    value: float
    bound: float
    satisfied: bool
    margin: float

    @classmethod
    def check(cls, name: str, value: float, bound: float, tol: float = 0.0) -> "BoundReport":
        return cls(
            name=name,
            value=float(value),
            bound=float(bound),
            satisfied=bool(value <= bound + tol),
            margin=float(bound - value),
        )


@dataclass(frozen=True)
class ReportRow:
    """One sweep result row; `ell`/`seed` are None for grid-independent checks."""

    suite: str
    name: str
    value: float
    bound: float
    satisfied: bool
    margin: float
    ell: float | None = None
    seed: int | None = None
    formula: str = ""

    @classmethod
    def from_bound(
        cls,
        suite: str,
        rep: BoundReport,
        ell: float | None = None,
        seed: int | None = None,
        formula: str = "",
    ) -> "ReportRow":
        return cls(
            suite=suite,
            name=rep.name,
            value=rep.value,
            bound=rep.bound,
            satisfied=rep.satisfied,
            margin=rep.margin,
            ell=ell,
            seed=seed,
            formula=formula,
        )


@dataclass
class ReportDocument:
    version: str
    config: dict
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(r.satisfied for r in self.rows)

    def sorted_rows(self) -> list[ReportRow]:
        def key(r: ReportRow):
            return (r.suite, r.ell if r.ell is not None else -1.0,
                    r.seed if r.seed is not None else -1, r.name)

        return sorted(self.rows, key=key)


def _json_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt17(v)
    if isinstance(v, int):
        return str(v)
    return '"' + str(v).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _json_value(v, indent: int) -> str:
    pad = "  " * indent
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{pad}  "{k}": {_json_value(val, indent + 1)}' for k, val in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        items = [f"{pad}  {_json_value(val, indent + 1)}" for val in v]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _json_scalar(v)


CSV_COLUMNS = ("suite", "name", "value", "bound", "satisfied", "margin", "ell", "seed")


def emit_report(doc: ReportDocument, format: str) -> bytes:
    """Serialize a report document to UTF-8 JSON or CSV bytes."""
    rows = doc.sorted_rows()
    if format == "json":
        payload = {
            "tool": "tubeschwarz",
            "version": doc.version,
            "config": doc.config,
            "overall_pass": doc.overall_pass,
            "rows": [
                {
                    "suite": r.suite,
                    "name": r.name,
                    "value": r.value,
                    "bound": r.bound,
                    "satisfied": r.satisfied,
                    "margin": r.margin,
                    "ell": r.ell,
                    "seed": r.seed,
                    "formula": r.formula,
                }
                for r in rows
            ],
        }
        return (_json_value(payload, 0) + "\n").encode("utf-8")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.suite,
                    r.name,
                    fmt17(r.value),
                    fmt17(r.bound),
                    "true" if r.satisfied else "false",
                    fmt17(r.margin),
                    "" if r.ell is None else fmt17(r.ell),
                    "" if r.seed is None else str(r.seed),
                ]
            )
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unsupported report format: {format!r}")
