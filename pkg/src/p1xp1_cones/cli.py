"""Command-line front end.

Subcommands:

  delta    evaluate the delta-surface at a slope
  pairs    extremal pairs, orthogonal points and characters
  resolve  resolution of the general sheaf for one pair
  cone     full effective-cone report for one character
  table    extremal-ray table over a range of n, with --check
  family   infinite-family assertions at desk scale

Exit codes: 0 success, 2 usage, 3 coverage/resource, 4 golden mismatch,
5 incomplete cone under --strict.
"""

from __future__ import annotations

import argparse
import datetime
import sys
from fractions import Fraction
from typing import List, Optional, Tuple

from .chern import ChernCharacter, Slope
from .config import Config
from .cone import ConeResult, effective_cone_character, effective_cone_hilbert
from .exceptional import CompletionNotFoundError, ResourceBoundError
from .golden import RAY_TABLE, ray_set
from .report import ConeReport, delimited_rays, tex_table
from .resolver import NoResolutionError
from .search import database_for, hilbert_character
from .stability import CoverageError, delta_surface

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_MISMATCH = 4
EXIT_INCOMPLETE = 5


def _config_from(args) -> Config:
    kw = {}
    if args.rank_bound is not None:
        kw["rank_bound"] = args.rank_bound
    if args.scan_step is not None:
        kw["scan_step"] = Fraction(args.scan_step)
    if args.pad is not None:
        kw["pad"] = args.pad
    if args.cache_dir is not None:
        kw["cache_dir"] = args.cache_dir
    if args.def41_reading is not None:
        kw["def41_sign_reading"] = args.def41_reading
    if getattr(args, "strict", False):
        kw["strict"] = True
    return Config(**kw)


def _emit(args, text: str) -> None:
    if not args.no_timestamp:
        print(f"# generated {datetime.datetime.now().isoformat(timespec='seconds')}")
    sys.stdout.write(text)


def _parse_char(vals: List[str]) -> ChernCharacter:
    r, a, b, z = (Fraction(v) for v in vals)
    return ChernCharacter(r, a, b, z)


def cmd_delta(args) -> int:
    config = _config_from(args)
    mu = Slope(Fraction(args.mu[0]), Fraction(args.mu[1]))
    window = (mu.mu1 - config.pad - 4, mu.mu1 + config.pad + 4,
              mu.mu2 - config.pad - 4, mu.mu2 + config.pad + 4)
    from .exceptional import get_database
    db = get_database(config.rank_bound, window, config.slope_reach,
                      config.element_cap, config.cache_dir)
    dv = delta_surface(mu, db)
    lines = [f"mu\t{mu.mu1}\t{mu.mu2}",
             f"delta\t{dv.value}",
             f"attainer\t{dv.attainer if dv.attainer else '-'}"]
    if dv.near_rank_bound:
        lines.append("warning\tattainer within 2 of the rank bound")
    _emit(args, "\n".join(lines) + "\n")
    if args.dump_surface or args.plot:
        step = Fraction(1, 8)
        grid = []
        s = mu
        k = Fraction(-2)
        while k <= 2:
            l = Fraction(-2)
            while l <= 2:
                p = Slope(s.mu1 + k, s.mu2 + l)
                try:
                    grid.append((str(p.mu1), str(p.mu2),
                                 str(delta_surface(p, db).value)))
                except CoverageError:
                    pass
                l += step
            k += step
        if args.dump_surface:
            with open(args.dump_surface, "w", encoding="ascii") as fh:
                fh.write("mu1\tmu2\tdelta\n")
                for row in grid:
                    fh.write("\t".join(row) + "\n")
        if args.plot:
            from .plotting import render_delta_grid
            render_delta_grid(grid, args.plot)
    return EXIT_OK


def _cone_result(args, config) -> ConeResult:
    if args.hilbert is not None:
        return effective_cone_hilbert(args.hilbert, config)
    return effective_cone_character(_parse_char(args.char), config)


def cmd_cone(args) -> int:
    config = _config_from(args)
    result = _cone_result(args, config)
    report = ConeReport.from_result(result)
    if args.format == "json":
        _emit(args, report.to_json() + "\n")
    elif args.format == "rays":
        _emit(args, delimited_rays(report))
    else:
        _emit(args, report.text())
    if args.plot:
        from .plotting import render_cone_figure
        render_cone_figure(report, args.plot)
    if config.strict and any("incomplete" in w for w in result.warnings):
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_pairs(args) -> int:
    config = _config_from(args)
    result = _cone_result(args, config)
    report = ConeReport.from_result(result)
    if args.format == "json":
        _emit(args, report.to_json() + "\n")
        return EXIT_OK
    lines = []
    for p in report.data["pairs"]:
        pt = p["point"]
        kron = p["kronecker"]
        lines.append("\t".join([
            p["alpha"], p["beta"], pt["kind"],
            f"(({pt['mu1']},{pt['mu2']}),{pt['delta']})",
            ConeReport._char_str(p["character"]),
            p["resolution"]["arrow"],
            (f"Kr N={kron['N']} ({kron['a']},{kron['b']}) edim={kron['edim']}"
             if kron else "-"),
            f"assumed={p['assumed_conditions']}",
        ]))
    _emit(args, "\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def cmd_resolve(args) -> int:
    config = _config_from(args)
    xi = hilbert_character(args.hilbert) if args.hilbert is not None \
        else _parse_char(args.char)
    db = database_for(xi, config)
    from .exceptional import exceptional_from_slope
    from .resolver import find_resolution

    def parse_bundle(txt: str):
        p, q = txt.split(",")
        return exceptional_from_slope(Slope(Fraction(p), Fraction(q)))

    alpha = parse_bundle(args.pair[0])
    beta = parse_bundle(args.pair[1])
    res = find_resolution(xi, alpha, beta, db, config)
    kron = res.kronecker()
    lines = [f"case\t{res.case}",
             f"coil\t{{{', '.join(str(t) for t in res.coil)}}}",
             f"mults\t{res.mults}",
             f"delta_p\t{res.delta_p}",
             f"resolution\t{res.arrow_text()}",
             f"kronecker\t{kron if kron else '-'}"]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _table_rows(args, config) -> Tuple[dict, dict]:
    lo, hi = args.range
    rows, reports = {}, {}
    for n in range(lo, hi + 1):
        result = effective_cone_hilbert(n, config)
        rows[n] = [r.vec for r in result.rays]
        reports[n] = result
    return rows, reports


def cmd_table(args) -> int:
    config = _config_from(args)
    rows, reports = _table_rows(args, config)
    out_lines = []
    mismatches = []
    for n, vecs in rows.items():
        labels = [r.label for r in reports[n].rays]
        out_lines.append(f"{n}\t" + ", ".join(labels))
        if args.check:
            if n not in RAY_TABLE:
                mismatches.append(f"n={n}: no golden row")
                continue
            got, want = frozenset(vecs), ray_set(n)
            status = "pass" if got == want else "FAIL"
            out_lines.append(f"check n={n}\t{status}")
            if got != want:
                missing = sorted(want - got)
                extra = sorted(got - want)
                mismatches.append(f"n={n}: missing {missing} extra {extra}")
    text = "\n".join(out_lines) + "\n"
    if args.format == "tex":
        text = tex_table(rows)
    _emit(args, text)
    if args.plot:
        from .plotting import render_cone_figure
        import os
        os.makedirs(args.plot, exist_ok=True)
        for n, result in reports.items():
            render_cone_figure(ConeReport.from_result(result),
                               os.path.join(args.plot, f"cone_{n}.png"))
    if args.check and mismatches:
        for m in mismatches:
            print(f"mismatch: {m}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _parse_range(txt: str) -> Tuple[int, int]:
    if ".." in txt:
        lo, hi = txt.split("..")
        return int(lo), int(hi)
    v = int(txt)
    return v, v


def cmd_family(args) -> int:
    from .families import run_family
    config = _config_from(args)
    lo, hi = args.k_range
    failures = []
    lines = []
    for k in range(lo, hi + 1):
        ok, detail = run_family(args.family, k, config)
        lines.append(f"{args.family}\tk={k}\t{'pass' if ok else 'FAIL'}\t{detail}")
        if not ok:
            failures.append(k)
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_MISMATCH if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="p1xp1-cones",
                                 description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--rank-bound", type=int, default=None)
    ap.add_argument("--scan-step", default=None, help="rational, e.g. 1/64")
    ap.add_argument("--pad", type=int, default=None)
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--def41-reading", choices=["mirrored", "as-printed"],
                    default=None)
    ap.add_argument("--no-timestamp", action="store_true",
                    help="suppress the timestamp line for byte-stable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="evaluate the delta surface at a slope")
    p.add_argument("--mu", nargs=2, required=True, metavar=("M1", "M2"))
    p.add_argument("--dump-surface", default=None, metavar="TSV")
    p.add_argument("--plot", default=None, metavar="PNG")
    p.set_defaults(func=cmd_delta)

    for name, fn in (("cone", cmd_cone), ("pairs", cmd_pairs)):
        p = sub.add_parser(name)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--hilbert", type=int)
        g.add_argument("--char", nargs=4, metavar=("R", "C1A", "C1B", "CH2"))
        p.add_argument("--format", choices=["text", "json", "rays"], default="text")
        p.add_argument("--strict", action="store_true")
        if name == "cone":
            p.add_argument("--plot", default=None, metavar="PNG")
        p.set_defaults(func=fn)

    p = sub.add_parser("resolve")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--hilbert", type=int)
    g.add_argument("--char", nargs=4, metavar=("R", "C1A", "C1B", "CH2"))
    p.add_argument("--pair", nargs=2, required=True, metavar=("A", "B"),
                   help="slopes, e.g. 2,1 3,1")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("table")
    p.add_argument("range", type=_parse_range, help="e.g. 2..16")
    p.add_argument("--check", action="store_true")
    p.add_argument("--format", choices=["text", "tex"], default="text")
    p.add_argument("--plot", default=None, metavar="DIR")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("family")
    p.add_argument("family", choices=["even-edge", "odd-edge", "all-n-edge",
                                      "3k+1-ray", "symmetric-values"])
    p.add_argument("k_range", type=_parse_range, help="e.g. 2..10")
    p.set_defaults(func=cmd_family)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (CoverageError, ResourceBoundError, CompletionNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except NoResolutionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
