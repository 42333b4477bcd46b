"""Command line entry point: `frobkit <task> ...`."""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from pathlib import Path

from . import fixtures as fx
from .problem import RECOVERABLE, TASKS, load_problem, run_fixture_report, run_problem
from .report import Report

FILE_TASKS = [t for t in TASKS if t != "verify-example"]


def _budget_flags(p):
    p.add_argument("--max-e", dest="e_max", type=int, help="largest Frobenius exponent to try")
    p.add_argument("--truncation", type=int, help="Cech truncation level N")
    p.add_argument("--degree-cap", type=int, help="degree cap for coboundary searches")
    p.add_argument("--pairs-cap", type=int, help="S-pair budget for Buchberger")
    p.add_argument("--seed", type=int, help="seed for randomized steps (recorded in the report)")
    p.add_argument("--format", choices=("yaml", "text"), default="yaml")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="frobkit", description="Frobenius closure and Cech cohomology certificates")
    sub = ap.add_subparsers(dest="command", required=True)
    for t in FILE_TASKS:
        p = sub.add_parser(t, help=f"run a {t} problem file")
        p.add_argument("problem", help="YAML problem file ('-' for stdin)")
        _budget_flags(p)
    p = sub.add_parser("verify-example", help="run one named fixture")
    p.add_argument("id", help="fixture id (see `frobkit fixtures`)")
    _budget_flags(p)
    p = sub.add_parser("fixtures", help="list or run the fixture catalog")
    p.add_argument("--module", help="only fixtures touching this module")
    p.add_argument("--run", action="store_true", help="run them and write reports")
    p.add_argument("--out", default="frobkit-out", help="output directory for --run")
    return ap


def _budgets(args):
    return {k: getattr(args, k, None) for k in ("e_max", "truncation", "degree_cap", "pairs_cap", "seed")}


def _emit(rep: Report, args):
    text = rep.to_yaml() if args.format == "yaml" else rep.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return rep.exit_code


def _error(task, msg, args):
    return _emit(Report(task, "error", message=msg), args)


def _run_task(args):
    if args.seed is not None:
        random.seed(args.seed)
    try:
        text = sys.stdin.read() if args.problem == "-" else Path(args.problem).read_text()
    except OSError as exc:
        return _error(args.command, f"cannot read problem file: {exc}", args)
    try:
        spec = load_problem(text, _budgets(args))
        if spec.kind != args.command:
            return _error(args.command, f"problem file declares task {spec.kind!r}", args)
        rep = run_problem(spec)
    except RECOVERABLE as exc:
        return _error(args.command, f"{type(exc).__name__}: {exc}", args)
    return _emit(rep, args)


def _verify_example(args):
    if args.id not in fx.fixture_ids():
        return _error("verify-example", f"unknown fixture {args.id!r}", args)
    try:
        rep, _ = run_fixture_report(args.id, _budgets(args))
    except RECOVERABLE as exc:
        return _error(f"verify-example:{args.id}", f"{type(exc).__name__}: {exc}", args)
    return _emit(rep, args)


def run_catalog(out_dir, module=None):
    """Run every fixture id, write one YAML per id, summary.tsv and figures.

    Returns the worst exit code seen."""
    from . import plots
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, timings, supports, degrees = [], {}, {}, []
    worst = 0
    for info in fx.list_fixtures(module):
        for fid in info.ids:
            t = time.perf_counter()
            try:
                rep, outcome = run_fixture_report(fid)
            except RECOVERABLE as exc:
                rep, outcome = Report(f"verify-example:{fid}", "error", message=str(exc)), None
            dt = round(time.perf_counter() - t, 4)
            (out / f"{fid}.yaml").write_text(rep.to_yaml())
            rows.append((fid, info.name, ",".join(info.modules), rep.verdict, rep.exit_code, dt))
            timings[fid] = dt
            worst = max(worst, rep.exit_code)
            if outcome is not None:
                if outcome.support:
                    supports[fid] = outcome.support
                degrees.extend(outcome.degrees)
    with open(out / "summary.tsv", "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(("id", "fixture", "modules", "verdict", "exit_code", "runtime_s"))
        w.writerows(rows)
    plots.timings_chart(timings, out / "timings.png")
    plots.support_scatter(supports, out / "support.png")
    if degrees:
        plots.degree_bookkeeping(degrees, out / "degrees.png")
    return worst, rows


def _fixtures(args):
    if not args.run:
        for info in fx.list_fixtures(args.module):
            print(f"{', '.join(info.ids)}\t{','.join(info.modules)}\t{info.summary}")
        return 0
    worst, rows = run_catalog(args.out, args.module)
    for r in rows:
        print("\t".join(str(x) for x in r))
    return worst


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fixtures":
        return _fixtures(args)
    if args.command == "verify-example":
        return _verify_example(args)
    return _run_task(args)


if __name__ == "__main__":
    sys.exit(main())
