"""Command-line entry point: ``k3fix <command> ...``.

Exit status is 0 on success, 1 when verification finds a failure and 2 for
usage errors or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .checks import run_checks
from .data_files import ENV_VAR, DataFileError
from .elliptic import RootProfile, fibers_from_profile, involution_decompositions, stratum_of_pair
from .lattice import (
    DegenerateLatticeError,
    IntegralLattice,
    PicardClassificationError,
    classify_fixed_picard,
    discriminant_group,
    is_hyperbolic,
    mirror_pair,
    named_lattice,
    signature,
)
from .lefschetz import (
    Bounds,
    FixedLocus3,
    FixedLocus6,
    enumerate_loci,
    exclusion_reason,
    expected_trace,
    holomorphic_sum,
    integer_identity,
)
from .localact import BASE_ACTIONS, UnsupportedFiberError, fiber_fixed_locus, normalize_fiber_name
from .render import FORMATS, render

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FIBER_TOKENS = ("I0", "II", "III", "IV", "IVstar", "IIstar", "I0star")


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_classify(args: argparse.Namespace) -> int:
    if args.elliptic:
        tables = ["table1"]
    elif args.non_elliptic:
        tables = ["table2"]
    elif args.genus1:
        tables = ["genus1"]
    else:
        tables = ["table1", "table2", "genus1"]
    sys.stdout.write(render(tables, args.format))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_checks()
    failed = False
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}: {r.detail}")
        failed |= not r.passed
        for e in r.errata:
            print(f"known erratum: {e}", file=sys.stderr)
            failed |= args.strict
    print("verify: " + ("failed" if failed else "ok"))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_fiber(args: argparse.Namespace) -> int:
    try:
        data = fiber_fixed_locus(normalize_fiber_name(args.type), args.psi)
    except UnsupportedFiberError as exc:
        raise UsageError(str(exc)) from exc
    _emit({"fiber": args.type, "psi": args.psi, **data.to_json()})
    return EXIT_OK


def _locus_report(locus) -> dict:
    if isinstance(locus, FixedLocus6):
        order = 6
        out = {"locus": locus.to_json(), "integer_identity": integer_identity(locus),
               "exclusion": exclusion_reason(locus)}
    else:
        order = 3
        out = {"locus": locus.to_json()}
    total = holomorphic_sum(locus)
    return {**out, "order": order, "sum": total.to_json(), "expected": expected_trace(order).to_json(),
            "holds": total == expected_trace(order)}


def cmd_lefschetz(args: argparse.Namespace) -> int:
    if args.enumerate:
        bounds = Bounds(args.max_p34, args.max_p25, args.max_l, args.max_g)
        for locus in enumerate_loci(bounds):
            _emit({**locus.to_json(), "exclusion": exclusion_reason(locus)})
        return EXIT_OK
    try:
        if args.order == 3:
            g = args.g
            locus = FixedLocus3(args.n, args.k, g)
        else:
            genus = tuple(args.genus) if args.genus else ()
            locus = FixedLocus6(args.p34, args.p25, args.l, genus)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_locus_report(locus))
    return EXIT_OK


def cmd_weierstrass(args: argparse.Namespace) -> int:
    try:
        profile = RootProfile.parse(args.mults)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    fm = fibers_from_profile(profile)
    out = {**profile.to_json(), "fibers": fm.to_json(), "euler": fm.euler()}
    if fm.supported:
        out["involution_options"] = [
            {"pair": list(pair), "stratum": [stratum_of_pair(pair).m, stratum_of_pair(pair).n],
             "remainder": rest.to_json()}
            for pair, rest in involution_decompositions(fm)
        ]
    _emit(out)
    return EXIT_OK


def load_lattice(spec: str) -> IntegralLattice:
    """A lattice from a JSON file (``{"gram": ...}`` or a bare matrix) or a registry name."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read lattice file {spec}: {exc}") from exc
        if isinstance(data, list):
            data = {"gram": data}
        try:
            return IntegralLattice.from_json(data)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"{spec}: {exc}") from exc
    try:
        return named_lattice(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _lattice_report(lat: IntegralLattice) -> dict:
    out: dict = {"rank": lat.rank, "det": lat.det(), "even": lat.is_even()}
    try:
        out["signature"] = list(signature(lat))
        out["discriminant"] = list(discriminant_group(lat).divisors)
        out["hyperbolic"] = is_hyperbolic(lat)
    except DegenerateLatticeError:
        out["degenerate"] = True
        return out
    try:
        out["fixed_picard"] = classify_fixed_picard(lat)
    except PicardClassificationError as exc:
        out["fixed_picard"] = None
        out["violations"] = exc.violations
    return out


def cmd_lattice(args: argparse.Namespace) -> int:
    if args.mirror:
        a, b = (load_lattice(x) for x in args.mirror)
        try:
            _emit(mirror_pair(a, b))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return EXIT_OK
    _emit(_lattice_report(load_lattice(args.gram)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="k3fix",
        description="Fixed loci of order-6 non-symplectic automorphisms of K3 surfaces.",
        epilog=f"Set {ENV_VAR} to read the embedded tables from another directory.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="regenerate the classification tables")
    which = c.add_mutually_exclusive_group()
    which.add_argument("--elliptic", action="store_true", help="elliptic rows only")
    which.add_argument("--non-elliptic", action="store_true", help="non-elliptic rows only")
    which.add_argument("--genus1", action="store_true", help="the case with a fixed elliptic curve")
    which.add_argument("--all", action="store_true", help="all three (default)")
    c.add_argument("--format", choices=FORMATS, default="json")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="compare with the embedded tables and run the self-checks")
    v.add_argument("--strict", action="store_true", help="count known errata as failures")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fiber", help="fixed locus inside one stable fiber")
    f.add_argument("--type", required=True, choices=FIBER_TOKENS)
    f.add_argument("--psi", required=True, choices=BASE_ACTIONS, help="action on the base")
    f.set_defaults(func=cmd_fiber)

    lf = sub.add_parser("lefschetz", help="check or enumerate fixed loci against the trace identity")
    lf.add_argument("--order", type=int, choices=(3, 6), default=6)
    lf.add_argument("--p34", type=int, default=0)
    lf.add_argument("--p25", type=int, default=0)
    lf.add_argument("--l", type=int, default=0, help="fixed rational curves")
    lf.add_argument("--genus", type=int, nargs="*", help="genus of a fixed curve of positive genus")
    lf.add_argument("--n", type=int, default=0, help="order 3: isolated points")
    lf.add_argument("--k", type=int, default=0, help="order 3: fixed curves")
    lf.add_argument("--g", type=int, default=None, help="order 3: top genus")
    lf.add_argument("--enumerate", action="store_true", help="list admissible order-6 loci as JSON lines")
    lf.add_argument("--max-p34", type=int, default=12)
    lf.add_argument("--max-p25", type=int, default=9)
    lf.add_argument("--max-l", type=int, default=3)
    lf.add_argument("--max-g", type=int, default=1)
    lf.set_defaults(func=cmd_lefschetz)

    w = sub.add_parser("weierstrass", help="fibers of y^2 = x^3 + p(t) from root multiplicities")
    w.add_argument("--mults", required=True, help="comma-separated, e.g. 2,2,2,2,2,2")
    w.set_defaults(func=cmd_weierstrass)

    la = sub.add_parser("lattice", help="lattice invariants or the mirror test")
    g = la.add_mutually_exclusive_group(required=True)
    g.add_argument("--gram", metavar="FILE|NAME")
    g.add_argument("--mirror", nargs=2, metavar=("A", "B"))
    la.set_defaults(func=cmd_lattice)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"k3fix {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataFileError as exc:
        print(f"k3fix {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
