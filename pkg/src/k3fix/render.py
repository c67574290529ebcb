"""Text renderings of the classification tables: JSON, CSV and aligned markdown."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Optional, Sequence

from .classify import (
    TABLE1_COLUMNS,
    TABLE2_COLUMNS,
    ClassRow,
    Genus1Case,
    build_table1,
    build_table2,
    genus1_case,
    printed_table1,
    table1_cells,
    table2_cells,
)

FORMATS = ("json", "csv", "markdown")

TABLE1_HEADERS = ("#", "g", "n", "k", "ii", "iv", "ii*", "iv*", "p(3,4)", "p(2,5)", "l-1",
                  "F0", "Finf", "p(3,4)", "p(2,5)", "l")
TABLE2_HEADERS = ("#", "g", "n", "k", "p(3,4)", "p(2,5)", "l")
GENUS1_COLUMNS = ("id", "g", "n", "k", "p34", "p25", "l", "genus")
GENUS1_HEADERS = ("#", "g", "n", "k", "p(3,4)", "p(2,5)", "l", "curve genus")


def _show(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value.replace("star", "*")
    return str(value)


def markdown_table(headers: Sequence[str], rows: Iterable[Sequence]) -> str:
    body = [[_show(v) for v in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in body]) for i, h in enumerate(headers)]

    def line(cells):
        return "| " + " | ".join(c.rjust(w) for c, w in zip(cells, widths)) + " |"

    sep = "|" + "|".join("-" * (w + 1) + ":" for w in widths) + "|"
    return "\n".join([line(headers), sep] + [line(r) for r in body]) + "\n"


def csv_table(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: "" if r.get(k) is None else r[k] for k in columns})
    return buf.getvalue()


def _table2_g(cells: list[dict]) -> list[dict]:
    return [{**c, "g": "-" if c["g"] is None else c["g"]} for c in cells]


def genus1_cells(case: Optional[Genus1Case] = None) -> list[dict]:
    r = (case or genus1_case()).row
    fx = r.fixed_locus
    return [{"id": r.id, "g": r.order3.g, "n": r.order3.n, "k": r.order3.k,
             "p34": fx.p34, "p25": fx.p25, "l": fx.rational_curves, "genus": list(fx.genus_list)[0]}]


def row_metadata(r: ClassRow) -> dict:
    out: dict = {"component": r.component}
    if r.elliptic:
        out["x1_determines_x2"] = r.x1_determines_x2
        if r.shares_fixed_locus_with:
            out["shares_fixed_locus_with"] = list(r.shares_fixed_locus_with)
    if r.canonical_factorization is not None:
        out["canonical_factorization"] = r.canonical_factorization
    if r.model:
        out["model"] = r.model
    if r.notes:
        out["notes"] = list(r.notes)
    return out


def table1_json() -> list[dict]:
    rows = build_table1()
    out = []
    for (rid, r, opt), cells in zip(printed_table1(rows), table1_cells(rows)):
        entry = {**cells, **row_metadata(r)}
        if opt is not None:
            s = opt.stratum
            entry["stratum"] = [s.m, s.n]
        out.append(entry)
    return out


def table2_json() -> list[dict]:
    rows = build_table2()
    return [{**c, **row_metadata(r)} for c, r in zip(table2_cells(rows), rows)]


def genus1_json() -> dict:
    case = genus1_case()
    return {
        **genus1_cells(case)[0],
        **row_metadata(case.row),
        "cube_fixed": case.cube_fixed,
        "witness": {
            "mults": list(case.witness_profile.multiplicities),
            "action": list(case.witness_action.exponents),
            "omega_character": case.witness_character,
        },
        "fiber_candidates": list(case.fiber_candidates),
        "justification": list(case.justification),
    }


def render(tables: Sequence[str], fmt: str = "json") -> str:
    """Render any of ``"table1"``, ``"table2"``, ``"genus1"`` in one format."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    if fmt == "json":
        builders = {"table1": table1_json, "table2": table2_json, "genus1": genus1_json}
        payload = {t: builders[t]() for t in tables}
        return json.dumps(payload, indent=2) + "\n"
    parts = []
    for t in tables:
        if t == "table1":
            cols, heads, cells = TABLE1_COLUMNS, TABLE1_HEADERS, table1_cells()
        elif t == "table2":
            cols, heads, cells = TABLE2_COLUMNS, TABLE2_HEADERS, _table2_g(table2_cells())
        elif t == "genus1":
            cols, heads, cells = GENUS1_COLUMNS, GENUS1_HEADERS, genus1_cells()
        else:
            raise ValueError(f"unknown table {t!r}")
        if fmt == "csv":
            parts.append(csv_table(cols, cells))
        else:
            parts.append(markdown_table(heads, ([c[k] for k in cols] for c in cells)))
    return "\n".join(parts)
