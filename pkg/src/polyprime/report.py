"""Deterministic JSON / CSV / text rendering of the typed results."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import singledispatch
from math import log

from .analysis import APReport, CountTable, FitResult, OQTable
from .errors import InvalidArgument
from .quadform import CaseReport, CombinationReport

FORMATS = ("json", "csv", "text")

CASE_HEADER = ("case", "a", "b", "c", "e", "f", "g", "delta", "D", "content", "regime")
PLOT_HEADER = ("N", "count", "predicted_dense", "predicted_sparse")


def real(x: float) -> float:
    """Round to 6 significant digits."""
    return float(f"{x:.6g}")


@dataclass(frozen=True)
class Tabular:
    """Plain header + rows result for ad hoc reports (counts, identity checks)."""

    header: tuple[str, ...]
    rows: tuple[tuple, ...]
    record: dict


@singledispatch
def to_record(result) -> object:
    raise InvalidArgument(f"cannot serialize {type(result).__name__}")


@to_record.register
def _(result: CaseReport) -> dict:
    q = result.form
    return {
        "case": result.case.value,
        "form": str(q),
        "a": q.a, "b": q.b, "c": q.c, "e": q.e, "f": q.f, "g": q.g,
        "x_origin": q.x_origin, "y_origin": q.y_origin,
        "delta": result.delta,
        "D": result.big_d,
        "alpha": result.alpha,
        "beta": result.beta,
        "content": result.content,
        "primitive": result.primitive,
        "irreducible_over_Z": result.irreducible_over_Z,
        "regime": result.regime.name,
    }


@to_record.register
def _(result: CombinationReport) -> dict:
    return {"overall": result.overall.name, "cases": [to_record(c) for c in result.cases]}


@to_record.register
def _(result: CountTable) -> dict:
    return {"rows": [{"N": n, "count": k} for n, k in result.rows]}


@to_record.register
def _(result: FitResult) -> dict:
    return {"exponent": real(result.exponent), "scale": real(result.scale),
            "residual": real(result.residual)}


@to_record.register
def _(result: APReport) -> dict:
    return {
        "modulus": result.modulus,
        "N": result.limit,
        "rows": [{"residue": row.residue, "admissible": row.admissible, "primes": row.primes,
                  "representable_primes": row.representable_primes, "ratio": real(row.ratio),
                  "empty": row.empty} for row in result.rows],
    }


@to_record.register
def _(result: list) -> list:
    return [to_record(item) for item in result]


@to_record.register
def _(result: OQTable) -> dict:
    return {
        "modulus": result.modulus,
        "checkpoints": list(result.checkpoints),
        "counts": {str(a): list(ks) for a, ks in result.counts.items()},
        "empty_residues": list(result.empty_residues),
    }


@to_record.register
def _(result: Tabular) -> dict:
    return result.record


@singledispatch
def to_rows(result) -> tuple[tuple[str, ...], list[tuple]]:
    raise InvalidArgument(f"cannot tabulate {type(result).__name__}")


@to_rows.register
def _(result: CombinationReport):
    rows = [(c.case.value, c.form.a, c.form.b, c.form.c, c.form.e, c.form.f, c.form.g,
             c.delta, c.big_d, c.content, c.regime.name) for c in result.cases]
    return CASE_HEADER, rows


@to_rows.register
def _(result: CountTable):
    return ("N", "count"), list(result.rows)


@to_rows.register
def _(result: FitResult):
    return ("exponent", "scale", "residual"), [
        (real(result.exponent), real(result.scale), real(result.residual))]


@to_rows.register
def _(result: list):
    rows = []
    for rep in result:
        for row in rep.rows:
            rows.append((rep.limit, rep.modulus, row.residue, row.admissible, row.primes,
                         row.representable_primes, real(row.ratio), row.empty))
    return ("N", "modulus", "residue", "admissible", "primes", "representable_primes",
            "ratio", "empty"), rows


@to_rows.register
def _(result: OQTable):
    rows = [(a, n, k) for a, ks in result.counts.items() for n, k in zip(result.checkpoints, ks)]
    return ("residue", "N", "count"), rows


@to_rows.register
def _(result: Tabular):
    return result.header, list(result.rows)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _text(header, rows) -> str:
    cells = [[_cell(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def emit_report(result, fmt: str, meta: dict | None = None) -> str:
    """Serialize ``result``; ``meta`` entries lead the JSON object and the text preamble."""
    if fmt not in FORMATS:
        raise InvalidArgument(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if fmt == "json":
        record = to_record(result)
        if meta:
            record = {**meta, **record} if isinstance(record, dict) else {**meta, "reports": record}
        return json.dumps(record, indent=2) + "\n"
    header, rows = to_rows(result)
    if fmt == "csv":
        return _csv(header, rows)
    preamble = "".join(f"{k}: {_cell(v)}\n" for k, v in (meta or {}).items())
    return preamble + _text(header, rows)


def plot_rows(table: CountTable) -> tuple[tuple[str, ...], list[tuple]]:
    """N, count and both model curves, each model scaled to match the last count."""
    n_last, k_last = table.rows[-1]
    dense_scale = k_last / (n_last / log(n_last))
    sparse_scale = k_last / (n_last / log(n_last) ** 1.5)
    rows = [(n, k, real(dense_scale * n / log(n)), real(sparse_scale * n / log(n) ** 1.5))
            for n, k in table.rows]
    return PLOT_HEADER, rows


def plot_csv(table: CountTable) -> str:
    return _csv(*plot_rows(table))
