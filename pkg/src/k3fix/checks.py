"""Self-checks run by ``k3fix verify``; each touches a different engine."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Union

from .classify import (
    DiffReport,
    all_generated_loci,
    apply_oddness_rule,
    build_table1,
    build_table2,
    genus1_case,
    holomorphic_failures,
    order3_seed,
    triage_nonelliptic,
    verify_against_embedded,
)
from .data_files import DataFileError
from .elliptic import fibers_from_profile, profile_from_fibers
from .lattice import classify_fixed_picard, discriminant_group, mirror_pair, named_lattice
from .lefschetz import FixedLocus3, FixedLocus6, verify_holomorphic
from .localact import FIBER_CATALOG, P01, P25, P34, chain_sequence, fiber_fixed_locus

NUMERIC_TOL = 1e-9
BLANK_INVOLUTION_ROWS = {"8", "11", "13", "14", "15", "16"}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    errata: tuple[str, ...] = field(default=())


def numeric_holomorphic_sum(locus: Union[FixedLocus6, FixedLocus3]) -> complex:
    """Floating-point evaluation of the local terms, independent of the exact field."""
    order = 6 if isinstance(locus, FixedLocus6) else 3
    z = cmath.exp(2j * cmath.pi / order)

    def point(k, kp):
        return 1 / ((1 - z ** k) * (1 - z ** kp))

    def curve(g):
        return (1 - g) / (1 - z) - z * (2 * g - 2) / (1 - z) ** 2

    if order == 6:
        total = locus.p34 * point(3, 4) + locus.p25 * point(2, 5) + locus.rational_curves * curve(0)
        return total + sum(curve(g) for g in locus.genus_list)
    return locus.n * point(2, 2) + sum(curve(g) for g in locus.curve_genera())


def numeric_trace(order: int) -> complex:
    return 1 + cmath.exp(-2j * cmath.pi / order)


def check_golden() -> tuple[CheckResult, DiffReport]:
    report = verify_against_embedded()
    detail = f"{report.cells_compared} cells, {len(report.failures)} failures, {len(report.errata)} known errata"
    if report.failures:
        detail += ": " + "; ".join(str(d) for d in report.failures[:5])
    return CheckResult("golden tables", not report.failures, detail,
                       tuple(str(d) for d in report.errata)), report


def check_lefschetz() -> CheckResult:
    bad = holomorphic_failures()
    worst = 0.0
    for _, locus in all_generated_loci():
        order = 6 if isinstance(locus, FixedLocus6) else 3
        worst = max(worst, abs(numeric_holomorphic_sum(locus) - numeric_trace(order)))
    ok = not bad and worst <= NUMERIC_TOL
    return CheckResult("holomorphic Lefschetz", ok,
                       f"exact failures {bad}, max numeric error {worst:.2e}")


def check_euler() -> CheckResult:
    bad = []
    for r in build_table1():
        fm = r.fiber_counts
        if fm.euler() != 24 or fibers_from_profile(profile_from_fibers(fm)) != fm:
            bad.append(r.id)
    return CheckResult("Euler budget", not bad, f"rows failing: {bad}")


def check_parity() -> CheckResult:
    bad = []
    rows = build_table1() + build_table2() + [genus1_case().row]
    for r in rows:
        for locus in r.loci():
            if r.order3.n < locus.p25 or (r.order3.n - locus.p25) % 2:
                bad.append(r.id)
    t1 = build_table1()
    blank = {r.id for r in t1 if not r.involution_options}
    odd_ii = {r.id for r in t1 if r.fiber_counts.ii % 2}
    ok = not bad and blank == BLANK_INVOLUTION_ROWS and odd_ii <= blank
    return CheckResult("parity and ordering", ok,
                       f"violations {bad}, blank involution rows {sorted(blank, key=int)}")


def check_triage() -> CheckResult:
    before = triage_nonelliptic()
    after = apply_oddness_rule(before)
    ok = (before.ledger() == "24-6-8-1-1=8" and len(after.survivors()) == 7
          and len(build_table2()) == 7)
    return CheckResult("non-elliptic triage", ok, f"{before.ledger()}, then {after.ledger()}")


def check_local() -> CheckResult:
    for key in FIBER_CATALOG:
        fiber_fixed_locus(*key)  # raises if the derivation disagrees
    ok = chain_sequence(2, 6) == [P25, P34, P34, P25, P01, P01]
    return CheckResult("local actions", ok, f"{len(FIBER_CATALOG)} fiber catalogs re-derived")


def check_lattice() -> CheckResult:
    u, ue8, ue8e8 = (named_lattice(n) for n in ("U", "U+E8", "U+E8^2"))
    ok = (
        discriminant_group(named_lattice("A2")).divisors == (3,)
        and discriminant_group(named_lattice("U(3)+A2^3")).divisors == (3,) * 5
        and [classify_fixed_picard(x) for x in (u, ue8, ue8e8)] == ["U", "U+E8", "U+E8^2"]
        and mirror_pair(u, ue8e8) and mirror_pair(ue8, ue8) and not mirror_pair(u, ue8)
    )
    return CheckResult("lattices", ok, "discriminant groups, fixed Picard lattices, mirror pairs")


def check_seeds() -> CheckResult:
    seeds = order3_seed()
    bad = [s.label() for s in seeds if not verify_holomorphic(s.locus)]
    produced = {r.order3 for r in build_table1() + build_table2()} | {genus1_case().row.order3}
    missing = [s.label() for s in seeds if s.locus not in produced]
    return CheckResult("order-3 seeds", not bad and not missing,
                       f"{len(seeds)} seeds; trace failures {bad}; seeds without a row {missing}")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_lefschetz, check_euler, check_parity, check_triage, check_local, check_lattice, check_seeds,
)


def run_checks() -> list[CheckResult]:
    results = []
    try:
        results.append(check_golden()[0])
    except DataFileError as exc:
        results.append(CheckResult("golden tables", False, str(exc)))
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # report, do not abort the suite
            results.append(CheckResult(check.__name__.removeprefix("check_"), False, f"error: {exc}"))
    return results
