"""Command line front end.

Subcommands:
  analyze  verify one or more origami files and emit reports
  landau   Landau's function G(m) and its two upper bounds
  bounds   evaluate the section-count bound formulas for given data
  gen      write a catalog of all origami classes with <= N squares
  batch    analyze every matching file in a directory

Exit codes: 0 all checks passed, 1 some check failed, 2 invalid input,
3 resource cap exceeded.  Batch and multi-file runs exit with the
maximum per-file code.  JSON output is byte stable: fixed key order, no
timestamps, floats printed as '%.15g' strings and rationals as
'num/den' strings.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .bounds import (BoundsReport, landau, landau_exp_bound, massias_bound,
                     simple_js_bound, thm31_bound, thm32_rhs, verify_all)
from .cylinders import Direction, directions_up_to
from .origami import Origami, OrigamiError, parse_origami, format_origami
from .veech import OrbitCapError, origami_classes

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

DEFAULT_SLOPES = "0,inf,1"


def fmt_float(x: float) -> str:
    return "%.15g" % x


def fmt_value(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return fmt_float(x)
    if isinstance(x, tuple):
        return [fmt_value(v) for v in x]
    raise TypeError(f"cannot format {x!r}")


def report_to_dict(r: BoundsReport) -> dict:
    sig = r.sig
    o = r.origami
    return {
        "surface": {
            "n_squares": o.n_squares,
            "h": o.h.cycle_string(),
            "v": o.v.cycle_string(),
            "mark_all_vertices": o.mark_all_vertices,
            "genus": r.genus,
            "marked_points": r.n_marked,
            "cone_multiples": list(r.cone_multiples),
        },
        "kernel": {
            "order": r.kernel_order,
            "translations": r.kernel_translations,
            "has_minus_one": r.kernel_has_minus,
        },
        "signature": {
            "index": sig.mu,
            "p": sig.p,
            "e2": sig.e2,
            "e3": sig.e3,
            "k0": sig.k0,
            "k": sig.k,
            "nu": ["inf" if nu == math.inf else nu for nu in sig.nu_list],
            "cusp_widths": list(sig.cusp_widths),
            "area_over_pi": fmt_value(sig.area_over_pi),
            "area": fmt_float(sig.area),
            "b0": sig.b0,
            "c1": sig.c1,
            "c1_witness": [list(row) for row in sig.c1_witness],
        },
        "reduced_certified": r.reduced_certified,
        "warnings": list(r.warnings),
        "bounds": {
            "prop": fmt_value(r.prop),
            "thm31": fmt_float(r.thm31),
            "thm32": fmt_float(r.thm32),
            "simple_js": fmt_float(r.simple_js),
        },
        "directions": [
            {
                "slope": dr.direction.slope_string(),
                "b0": dr.b0,
                "alpha_eff": fmt_value(dr.alpha_eff),
                "n_i": fmt_value(dr.n_i),
                "moduli_lcm_int": dr.moduli_lcm_int,
                "ij0": list(dr.ij0),
                "cylinders": [
                    {
                        "W": c.W,
                        "H": c.H,
                        "modulus": fmt_value(c.modulus),
                        "s1": c.s1,
                        "s2": c.s2,
                    }
                    for c in dr.decomposition.cylinders
                ],
            }
            for dr in r.directions
        ],
        "checks": [
            {
                "name": c.name,
                "relation": c.relation,
                "lhs": fmt_value(c.lhs),
                "rhs": fmt_value(c.rhs),
                "passed": c.passed,
                "exact": c.exact,
            }
            for c in r.checks
        ],
        "passed": r.passed,
    }


def parse_slopes(text: str) -> list:
    return [Direction.from_slope(tok) for tok in text.split(",") if tok.strip()]


def _load_origami(path: Path, mark_all: bool) -> Origami:
    o = parse_origami(path.read_text())
    if mark_all and not o.mark_all_vertices:
        o = Origami(o.n_squares, o.h, o.v, True)
    return o


def _process_file(path_str: str, mark_all: bool, slopes: str, bound: int,
                  cap: int):
    """Analyze one file; returns (entry dict, exit code).

    Top level so process pools can pickle it.
    """
    path = Path(path_str)
    try:
        o = _load_origami(path, mark_all)
        if bound:
            directions = directions_up_to(bound)
        else:
            directions = parse_slopes(slopes)
        report = verify_all(o, directions, orbit_cap=cap)
    except OrigamiError as exc:
        return ({"file": path.name, "error": str(exc),
                 "error_kind": "input"}, EXIT_INPUT)
    except OrbitCapError as exc:
        return ({"file": path.name, "error": str(exc),
                 "error_kind": "resource"}, EXIT_RESOURCE)
    entry = {"file": path.name}
    entry.update(report_to_dict(report))
    return entry, EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _run_files(paths, args) -> int:
    if args.slopes is not None and args.slope_bound is not None:
        print("error: --slopes and --slope-bound are mutually exclusive",
              file=sys.stderr)
        return EXIT_INPUT
    slopes = args.slopes if args.slopes is not None else DEFAULT_SLOPES
    bound = args.slope_bound or 0
    try:
        parse_slopes(slopes)
    except OrigamiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    work = [(str(p), args.mark_all_vertices, slopes, bound, args.max_orbit)
            for p in paths]
    if args.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_process_file_star, work))
    else:
        results = [_process_file(*w) for w in work]
    entries = [e for e, _ in results]
    codes = [c for _, c in results]
    n_err = sum(1 for e in entries if "error" in e)
    n_failed = sum(1 for e in entries if e.get("passed") is False)
    n_passed = sum(1 for e in entries if e.get("passed") is True)
    doc = {
        "reports": entries,
        "summary": {
            "files": len(entries),
            "passed": n_passed,
            "failed": n_failed,
            "errors": n_err,
        },
    }
    text = json.dumps(doc, indent=2) + "\n"
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)
    for e in entries:
        if "error" in e:
            print(f"{e['file']}: ERROR ({e['error_kind']}) {e['error']}",
                  file=sys.stderr)
        else:
            verdict = "PASS" if e["passed"] else "FAIL"
            n_checks = len(e["checks"])
            print(f"{e['file']}: {verdict} ({n_checks} checks)",
                  file=sys.stderr)
            for w in e["warnings"]:
                print(f"{e['file']}: warning: {w}", file=sys.stderr)
            if not e["passed"]:
                for c in e["checks"]:
                    if not c["passed"]:
                        print(f"  failed: {c['name']}: {c['lhs']} "
                              f"{c['relation']} {c['rhs']}", file=sys.stderr)
    return max(codes, default=EXIT_OK)


def _process_file_star(w):
    return _process_file(*w)


def cmd_analyze(args) -> int:
    paths = [Path(p) for p in args.files]
    for p in paths:
        if not p.is_file():
            print(f"error: no such file {p}", file=sys.stderr)
            return EXIT_INPUT
    return _run_files(paths, args)


def cmd_batch(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        print(f"error: no such directory {root}", file=sys.stderr)
        return EXIT_INPUT
    paths = sorted(p for p in root.glob(args.glob) if p.is_file())
    return _run_files(paths, args)


def cmd_landau(args) -> int:
    m = args.m
    if m < 0:
        print(f"error: m must be nonnegative, got {m}", file=sys.stderr)
        return EXIT_INPUT
    g = landau(m)
    print(f"G({m}) = {g}")
    ev = landau_exp_bound(m)
    print(f"exp(m/e)      = {fmt_float(ev)}")
    if m >= 2:
        mv = massias_bound(m)
        smaller = "exp(m/e)" if ev <= mv else "massias"
        print(f"massias bound = {fmt_float(mv)}")
        print(f"smaller: {smaller}")
    else:
        print("massias bound = n/a (needs m >= 2)")
    return EXIT_OK


def cmd_bounds(args) -> int:
    try:
        v31 = thm31_bound(args.g, args.n, args.p, args.k)
        sjs = simple_js_bound(args.g, args.n, args.p, args.k)
        print(f"thm31_bound     = {fmt_float(v31)}")
        print(f"simple_js_bound = {fmt_float(sjs)}")
        if args.nu:
            nus = []
            for tok in args.nu.split(","):
                tok = tok.strip()
                nus.append(math.inf if tok in ("inf", "oo") else int(tok))
            if len(nus) != args.k:
                raise ValueError(
                    f"nu list has {len(nus)} entries, k = {args.k}")
            v32 = thm32_rhs(args.g, args.n, args.p, nus)
            print(f"thm32_rhs       = {fmt_float(v32)}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n_max < 1 or args.n_max > 8:
        print(f"error: N must be between 1 and 8, got {args.n_max}",
              file=sys.stderr)
        return EXIT_INPUT
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    total = 0
    for n in range(1, args.n_max + 1):
        classes = origami_classes(n)
        for i, cls in enumerate(classes):
            path = out / f"origami_n{n}_{i:05d}.origami"
            path.write_text(format_origami(cls.origami()))
        print(f"n={n}: {len(classes)} classes")
        total += len(classes)
    print(f"total: {total} classes in {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="origami-veech",
        description="cylinder decompositions, Veech group data and "
                    "section bounds for square-tiled surfaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_analysis_flags(p):
        p.add_argument("--mark-all-vertices", action="store_true",
                       help="mark every vertex, not only cone points")
        p.add_argument("--slopes", default=None,
                       help="comma-separated slopes p/q, 0, inf "
                            f"(default {DEFAULT_SLOPES})")
        p.add_argument("--slope-bound", type=int, default=None,
                       help="all primitive slopes with |p|,|q| <= K")
        p.add_argument("--max-orbit", type=int, default=10 ** 6,
                       help="abort if the modular orbit exceeds this size")
        p.add_argument("--json", default=None, metavar="PATH",
                       help="write the JSON document here instead of stdout")
        p.add_argument("--jobs", type=int, default=1,
                       help="process files in parallel")

    p_an = sub.add_parser("analyze", help="verify origami files")
    p_an.add_argument("files", nargs="+")
    add_analysis_flags(p_an)
    p_an.set_defaults(func=cmd_analyze)

    p_ba = sub.add_parser("batch", help="analyze a directory")
    p_ba.add_argument("directory")
    p_ba.add_argument("--glob", default="*.origami",
                      help="filename pattern (default *.origami)")
    add_analysis_flags(p_ba)
    p_ba.set_defaults(func=cmd_batch)

    p_la = sub.add_parser("landau", help="Landau's function G(m)")
    p_la.add_argument("m", type=int)
    p_la.set_defaults(func=cmd_landau)

    p_bo = sub.add_parser("bounds", help="evaluate bound formulas")
    p_bo.add_argument("g", type=int)
    p_bo.add_argument("n", type=int)
    p_bo.add_argument("p", type=int)
    p_bo.add_argument("k", type=int)
    p_bo.add_argument("--nu", default=None,
                      help="comma-separated elliptic orders and 'inf', "
                           "k entries")
    p_bo.set_defaults(func=cmd_bounds)

    p_ge = sub.add_parser("gen", help="write a catalog of origami classes")
    p_ge.add_argument("n_max", type=int)
    p_ge.add_argument("--out", default="catalog")
    p_ge.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OrigamiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OrbitCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
