"""Classification pipeline: from order-3 fixed loci to order-6 fixed loci.

Every order-6 automorphism ``zeta`` squares to an order-3 one, so the
search starts from the known order-3 fixed loci ``(g, n, k)``.  When the
surface carries a ``zeta``-stable elliptic fibration the order-6 locus is
assembled fiber by fiber; otherwise a short list of candidate point
configurations is filtered by parity and counting rules.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional

from .data_files import DataFileError, load_json
from .elliptic import (
    FiberMultiset,
    RootProfile,
    WeightedAutomorphism,
    fiber_counts_from_nk,
    involution_decompositions,
    normalize_pair,
    omega_character,
    stratum_of_pair,
)
from .lattice import divisibility, named_lattice
from .lefschetz import FixedLocus3, FixedLocus6, verify_holomorphic
from .localact import INVOLUTION, TRIVIAL, LocalFixedData, fiber_fixed_locus

# --- seeds -------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    """An order-3 fixed locus, tagged by whether the surface is elliptic for it."""

    locus: FixedLocus3
    elliptic: bool
    picard_lattice: Optional[str] = None

    @property
    def g(self) -> Optional[int]:
        return self.locus.g

    @property
    def n(self) -> int:
        return self.locus.n

    @property
    def k(self) -> int:
        return self.locus.k

    def label(self) -> str:
        g = "-" if self.g is None else str(self.g)
        return f"({self.n},{self.k},{g})"


# (g, n, k) in table order
_ELLIPTIC_GNK = [
    (5, 0, 2), (4, 1, 2), (3, 2, 2), (2, 3, 2), (3, 3, 3), (1, 4, 2),
    (2, 4, 3), (3, 4, 4), (0, 5, 2), (1, 5, 3), (2, 5, 4), (0, 6, 3),
    (1, 6, 4), (0, 7, 4), (1, 7, 5), (0, 8, 5), (1, 8, 6), (0, 9, 6),
]
_NON_ELLIPTIC_GNK = [(4, 0, 1), (3, 1, 1), (2, 2, 1), (None, 3, 0), (1, 3, 1), (0, 4, 1)]
_PICARD = {(1, 3, 1): "U(3)+A2^3"}


def order3_seed() -> list[Seed]:
    seeds = [Seed(FixedLocus3(n, k, g), True) for g, n, k in _ELLIPTIC_GNK]
    seeds += [Seed(FixedLocus3(n, k, g), False, _PICARD.get((g, n, k))) for g, n, k in _NON_ELLIPTIC_GNK]
    return seeds


def elliptic_seeds() -> list[Seed]:
    return [s for s in order3_seed() if s.elliptic]


def nonelliptic_seeds() -> list[Seed]:
    return [s for s in order3_seed() if not s.elliptic]


# --- rows --------------------------------------------------------------------


@dataclass(frozen=True)
class InvolutionOption:
    """Fibers over the two base-fixed points and the resulting fixed locus."""

    pair: tuple[str, str]
    locus: FixedLocus6
    remainder: FiberMultiset

    @property
    def stratum(self):
        return stratum_of_pair(self.pair)


@dataclass(frozen=True)
class ClassRow:
    """One row of a classification table.

    ``fixed_locus`` is the locus for a trivial base action on elliptic rows
    and the only locus on the other rows.
    """

    id: str
    order3: FixedLocus3
    elliptic: bool
    fixed_locus: Optional[FixedLocus6] = None
    fiber_counts: Optional[FiberMultiset] = None
    involution_options: tuple[InvolutionOption, ...] = ()
    component: str = ""
    canonical_factorization: Optional[bool] = None
    shares_fixed_locus_with: tuple[str, ...] = ()
    notes: tuple[str, ...] = field(default=())
    model: Optional[str] = None

    @property
    def trivial_fixed(self) -> Optional[FixedLocus6]:
        return self.fixed_locus if self.elliptic else None

    @property
    def x1_determines_x2(self) -> bool:
        return not self.shares_fixed_locus_with

    def loci(self) -> list[FixedLocus6]:
        out = [] if self.fixed_locus is None else [self.fixed_locus]
        return out + [o.locus for o in self.involution_options]


def moduli_component(k: int) -> str:
    """Irreducible component of the order-3 moduli containing a seed with ``k`` curves."""
    if k >= 2:
        return "closure of M_{0,2}"
    if k == 1:
        return "closure of M_{0,1}"
    return "closure of M_{3,0}"


@lru_cache(maxsize=None)
def _local(fiber: str, base_action: str) -> LocalFixedData:
    return fiber_fixed_locus(fiber, base_action)


def _as_locus(d: LocalFixedData) -> FixedLocus6:
    return FixedLocus6(d.p34, d.p25, d.fixed_rational_curves)


def trivial_base_locus(fm: FiberMultiset) -> FixedLocus6:
    """Sum over the singular fibers, plus the fixed section."""
    total = LocalFixedData(0, 0, 1)
    for name, count in fm.counts().items():
        total = total + _local(name, TRIVIAL).scaled(count)
    return _as_locus(total)


def involution_locus(pair: tuple[str, str]) -> FixedLocus6:
    """Everything fixed lies in the two fibers over the base-fixed points."""
    return _as_locus(_local(pair[0], INVOLUTION) + _local(pair[1], INVOLUTION))


def _mark_shared(rows: list[ClassRow]) -> list[ClassRow]:
    by_locus = defaultdict(list)
    for r in rows:
        by_locus[r.fixed_locus].append(r.id)
    return [replace(r, shares_fixed_locus_with=tuple(i for i in by_locus[r.fixed_locus] if i != r.id))
            for r in rows]


def build_table1() -> list[ClassRow]:
    """The 18 elliptic rows, each with all of its base-involution options."""
    rows = []
    for i, seed in enumerate(elliptic_seeds(), start=1):
        fm = fiber_counts_from_nk(seed.n, seed.k)
        options = tuple(
            InvolutionOption(pair, involution_locus(pair), rest)
            for pair, rest in involution_decompositions(fm)
        )
        rows.append(ClassRow(
            id=str(i),
            order3=seed.locus,
            elliptic=True,
            fixed_locus=trivial_base_locus(fm),
            fiber_counts=fm,
            involution_options=options,
            component=moduli_component(seed.k),
        ))
    rows = _mark_shared(rows)
    for idx, r in enumerate(rows):
        if len(r.involution_options) > 1:
            rows[idx] = replace(r, notes=r.notes + (
                "options differ by the choice of the two base-fixed points",))
    six = next(i for i, r in enumerate(rows) if r.id == "6")
    rows[six] = replace(rows[six], notes=rows[six].notes + (
        "a further action, composing the two base involutions, is topologically "
        "equivalent to the second option (not modeled)",))
    return rows


def printed_table1(rows: Optional[list[ClassRow]] = None) -> list[tuple[str, ClassRow, Optional[InvolutionOption]]]:
    """Rows in printed order: one line per base row, then primed lines for extra options."""
    rows = build_table1() if rows is None else rows
    main, extra = [], []
    for r in rows:
        opts = list(r.involution_options)
        main.append((r.id, r, opts[0] if opts else None))
        extra += [(r.id + "'" * j, r, o) for j, o in enumerate(opts[1:], start=1)]
    return main + extra


# --- non-elliptic triage -----------------------------------------------------

POINT_PROFILES = ((6, 0), (4, 1), (2, 2), (0, 3))

RULE_N_GE_P25 = "n>=p25"
RULE_PARITY = "parity"
RULE_NEEDS_CURVE = "needs-fixed-curve"
RULE_INVOLUTION_POINTS = "involution-2-points"
RULE_ODD_MULTISECTION = "odd-multisection"
TRIAGE_RULES = (RULE_N_GE_P25, RULE_PARITY, RULE_NEEDS_CURVE, RULE_INVOLUTION_POINTS)


@dataclass(frozen=True)
class Candidate:
    p34: int
    p25: int
    seed: Seed

    def label(self) -> str:
        g = "-" if self.seed.g is None else str(self.seed.g)
        return f"({self.p34},{self.p25};{self.seed.n},{self.seed.k},{g})"

    @property
    def locus(self) -> FixedLocus6:
        return FixedLocus6(self.p34, self.p25, 0)


def _first_violation(c: Candidate) -> Optional[str]:
    s = c.seed
    # isolated points of type (2,5) stay isolated for zeta^2
    if s.n < c.p25:
        return RULE_N_GE_P25
    # zeta swaps the remaining isolated zeta^2-fixed points in pairs
    if (s.n - c.p25) % 2:
        return RULE_PARITY
    # points of type (3,4) lie on curves fixed by zeta^2
    if c.p34 and s.k == 0:
        return RULE_NEEDS_CURVE
    # zeta moves each rational fixed curve of zeta^2 with two fixed points
    if s.g == 0 and c.p34 > 2 * s.k:
        return RULE_INVOLUTION_POINTS
    return None


def _odd_multisection(c: Candidate) -> bool:
    """A free involution on the elliptic curve against an odd-degree multisection.

    When zeta^2 fixes an elliptic curve E and zeta has no fixed point on it,
    a zeta-stable multisection meets E in an even number of points.  The
    multisection degree is the divisibility of the fiber class in the
    Picard lattice.
    """
    s = c.seed
    if s.g != 1 or c.p34 != 0 or s.picard_lattice is None:
        return False
    lat = named_lattice(s.picard_lattice)
    fiber_class = [1] + [0] * (lat.rank - 1)
    return divisibility(lat, fiber_class) % 2 == 1


@dataclass(frozen=True)
class TriageReport:
    entries: tuple[tuple[Candidate, Optional[str]], ...]

    def survivors(self) -> list[Candidate]:
        return [c for c, v in self.entries if v is None]

    def rejected(self, rule: str) -> list[Candidate]:
        return [c for c, v in self.entries if v == rule]

    def counts(self) -> dict[str, int]:
        out = {"candidates": len(self.entries)}
        for rule in TRIAGE_RULES + (RULE_ODD_MULTISECTION,):
            if self.rejected(rule) or rule in TRIAGE_RULES:
                out[rule] = len(self.rejected(rule))
        out["survivors"] = len(self.survivors())
        return out

    def ledger(self) -> str:
        c = self.counts()
        parts = [str(c["candidates"])] + [str(c[r]) for r in TRIAGE_RULES]
        if RULE_ODD_MULTISECTION in c:
            parts.append(str(c[RULE_ODD_MULTISECTION]))
        return "-".join(parts) + f"={c['survivors']}"

    def verdict(self, label: str) -> Optional[str]:
        for c, v in self.entries:
            if c.label() == label:
                return v or "survives"
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "ledger": self.ledger(),
            "entries": [{"candidate": c.label(), "verdict": v or "survives"} for c, v in self.entries],
        }


def triage_nonelliptic() -> TriageReport:
    """Cross the point-only order-6 profiles with the non-elliptic order-3 seeds."""
    entries = tuple(
        (c, _first_violation(c))
        for c in (Candidate(p34, p25, s) for s, (p34, p25) in itertools.product(nonelliptic_seeds(), POINT_PROFILES))
    )
    return TriageReport(entries)


def apply_oddness_rule(report: TriageReport) -> TriageReport:
    return TriageReport(tuple(
        (c, RULE_ODD_MULTISECTION if v is None and _odd_multisection(c) else v)
        for c, v in report.entries
    ))


# projective models of zeta^2 for the surviving cases, keyed by (n, k, g)
_MODELS = {
    (0, 1, 4): "F2(x0..x3) = 0, F3(x0..x3) + b x4^3 = 0 in P^4",
    (1, 1, 3): "F4(x0,x1,x2) + F1(x0,x1,x2) x3^3 = 0 in P^3",
    (2, 1, 2): "y^2 = F6(x0,x1) + F3(x0,x1) x2^3 + b x2^6",
    (3, 0, None): "F2(x0,x1) + x2 (b x3 + c x4) = 0, f3(x0,x1) + d x2^3 + G3(x3,x4) + x2 F1 G1 = 0 in P^4",
    (3, 1, 1): "x3 F1 + x4 G1 = 0, F3(x0,x1,x2) + G3(x3,x4) = 0 in P^4",
    (4, 1, 0): "F4(x0,x1) + F3(x2,x3) F1(x0,x1) = 0 in P^3",
}


def build_table2() -> list[ClassRow]:
    survivors = apply_oddness_rule(triage_nonelliptic()).survivors()
    main, extra = [], []
    for i, seed in enumerate(nonelliptic_seeds(), start=1):
        mine = [c for c in survivors if c.seed == seed]
        for j, c in enumerate(mine):
            canonical = None
            if (seed.n, seed.k, seed.g) == (2, 1, 2):
                # zeta^2 always extends when the fixed points are all of type (3,4)
                canonical = c.p34 == 6
            row = ClassRow(
                id=str(i) + "'" * j,
                order3=seed.locus,
                elliptic=False,
                fixed_locus=c.locus,
                component=moduli_component(seed.k),
                canonical_factorization=canonical,
                model=_MODELS[(seed.n, seed.k, seed.g)],
            )
            (extra if j else main).append(row)
    return main + extra


# --- genus 1 -----------------------------------------------------------------


@dataclass(frozen=True)
class Genus1Case:
    row: ClassRow
    cube_fixed: str
    witness_profile: RootProfile
    witness_action: WeightedAutomorphism
    fiber_candidates: tuple[str, ...]
    justification: tuple[str, ...]

    @property
    def witness_character(self) -> int:
        return omega_character(self.witness_action)


def genus1_fiber_candidates(max_euler: int = 24) -> list[str]:
    """Fiber types whose Euler number is a multiple of 6 (the rest come in 6-orbits)."""
    names = ["I0"] + [f"I{n}" for n in range(6, max_euler + 1, 6)]
    names += ["I0star"] + [f"I{n}star" for n in range(6, max_euler - 5, 6)]
    return names


def genus1_case() -> Genus1Case:
    row = ClassRow(
        id="g1",
        order3=FixedLocus3(3, 1, 1),
        elliptic=False,
        fixed_locus=FixedLocus6(0, 3, 0, (1,)),
        component=moduli_component(1),
        notes=("zeta and zeta^2 have the same fixed locus",),
    )
    candidates = genus1_fiber_candidates()
    return Genus1Case(
        row=row,
        cube_fixed="two elliptic curves; the second passes through the three isolated points",
        witness_profile=RootProfile((2,) * 6),
        witness_action=WeightedAutomorphism(0, 0, 1),
        fiber_candidates=tuple(candidates),
        justification=(
            "the fixed elliptic curve spans a fibration on which zeta acts on the base with order 6",
            "the base action has two fixed points; all other fibers lie in orbits of size 6",
            "Euler number 24 forces the second invariant fiber to have Euler number divisible by 6: "
            + ", ".join(candidates),
            "every singular candidate would carry a fixed rational curve, so that fiber is smooth (I0)",
        ),
    )


# --- golden comparison -------------------------------------------------------

TABLE1_COLUMNS = ("id", "g", "n", "k", "ii", "iv", "iistar", "ivstar",
                  "p34", "p25", "l_minus_1", "F0", "Finf", "inv_p34", "inv_p25", "inv_l")
TABLE2_COLUMNS = ("id", "g", "n", "k", "p34", "p25", "l")
PAIR_CELL = "F0/Finf"

KNOWN_ERRATA = {
    ("table1", "18", PAIR_CELL): "printed fibers give (6,0,0); the printed locus (4,1,0) "
                                 "comes from the pair I0, IV, the only even decomposition",
}


def table1_cells(rows: Optional[list[ClassRow]] = None) -> list[dict]:
    out = []
    for rid, r, opt in printed_table1(rows):
        fm, fx = r.fiber_counts, r.fixed_locus
        ii, iv, iistar, ivstar = fm.as_tuple()
        cell = {
            "id": rid, "g": r.order3.g, "n": r.order3.n, "k": r.order3.k,
            "ii": ii, "iv": iv, "iistar": iistar, "ivstar": ivstar,
            "p34": fx.p34, "p25": fx.p25, "l_minus_1": fx.rational_curves - 1,
            "F0": None, "Finf": None, "inv_p34": None, "inv_p25": None, "inv_l": None,
        }
        if opt is not None:
            cell.update(F0=opt.pair[0], Finf=opt.pair[1], inv_p34=opt.locus.p34,
                        inv_p25=opt.locus.p25, inv_l=opt.locus.rational_curves)
        out.append(cell)
    return out


def table2_cells(rows: Optional[list[ClassRow]] = None) -> list[dict]:
    rows = build_table2() if rows is None else rows
    return [
        {"id": r.id, "g": r.order3.g, "n": r.order3.n, "k": r.order3.k,
         "p34": r.fixed_locus.p34, "p25": r.fixed_locus.p25, "l": r.fixed_locus.rational_curves}
        for r in rows
    ]


@dataclass(frozen=True)
class Diff:
    table: str
    row: str
    column: str
    expected: object
    actual: object
    kind: str  # "failure" or "known-erratum"

    def __str__(self) -> str:
        return f"{self.table} row {self.row} {self.column}: embedded {self.expected!r}, generated {self.actual!r}"


@dataclass(frozen=True)
class DiffReport:
    diffs: tuple[Diff, ...]
    cells_compared: int

    @property
    def failures(self) -> list[Diff]:
        return [d for d in self.diffs if d.kind == "failure"]

    @property
    def errata(self) -> list[Diff]:
        return [d for d in self.diffs if d.kind == "known-erratum"]

    def ok(self, strict: bool = False) -> bool:
        return not self.failures and not (strict and self.errata)


def _pair(cell: dict) -> Optional[tuple[str, str]]:
    if cell.get("F0") is None and cell.get("Finf") is None:
        return None
    return normalize_pair((cell["F0"], cell["Finf"]))


def _compare(table: str, columns: tuple[str, ...], embedded: list, generated: list[dict]) -> tuple[list[Diff], int]:
    diffs, n = [], 0

    def add(row, col, exp, act):
        kind = "known-erratum" if (table, row, col) in KNOWN_ERRATA else "failure"
        diffs.append(Diff(table, row, col, exp, act, kind))

    if not isinstance(embedded, list) or not all(isinstance(r, dict) and "id" in r for r in embedded):
        raise DataFileError(f"{table}: expected a list of rows with an 'id'")
    emb = {str(r["id"]): r for r in embedded}
    gen = {r["id"]: r for r in generated}
    if [str(r["id"]) for r in embedded] != [r["id"] for r in generated] and set(emb) == set(gen):
        add("*", "row order", [str(r["id"]) for r in embedded], [r["id"] for r in generated])
    for rid in sorted(set(emb) | set(gen), key=lambda x: (len(x), x)):
        if rid not in gen:
            add(rid, "row", emb[rid], None)
            continue
        if rid not in emb:
            add(rid, "row", None, gen[rid])
            continue
        e, g = emb[rid], gen[rid]
        for col in columns:
            if col in ("F0", "Finf"):
                continue
            n += 1
            if e.get(col) != g.get(col):
                add(rid, col, e.get(col), g.get(col))
        if "F0" in columns:
            n += 1
            try:
                ep = _pair(e)
            except (KeyError, ValueError):
                ep = (e.get("F0"), e.get("Finf"))
            if ep != _pair(g):
                add(rid, PAIR_CELL, ep, _pair(g))
    return diffs, n


def verify_against_embedded() -> DiffReport:
    """Cell-by-cell comparison of the generated tables with the embedded copies."""
    diffs, n = [], 0
    for table, columns, cells in (
        ("table1", TABLE1_COLUMNS, table1_cells()),
        ("table2", TABLE2_COLUMNS, table2_cells()),
    ):
        data = load_json(f"{table}.json")
        rows = data.get("rows") if isinstance(data, dict) else None
        d, m = _compare(table, columns, rows, cells)
        diffs += d
        n += m
    return DiffReport(tuple(diffs), n)


def all_generated_loci() -> list[tuple[str, object]]:
    """Every order-6 and order-3 locus produced by the pipeline, labeled."""
    out: list[tuple[str, object]] = []
    for r in build_table1() + build_table2() + [genus1_case().row]:
        out.append((f"{r.id}:order3", r.order3))
        if r.fixed_locus is not None:
            out.append((f"{r.id}:fixed", r.fixed_locus))
        for o in r.involution_options:
            out.append((f"{r.id}:{'/'.join(o.pair)}", o.locus))
    return out


def holomorphic_failures() -> list[str]:
    return [label for label, locus in all_generated_loci() if not verify_holomorphic(locus)]
