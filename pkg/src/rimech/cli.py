"""Command-line entry point: ``rimech run|suite|report``.

Exit status is 0 when every check passes, 1 when any check fails and 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .errors import ScenarioError, ScenarioParseError, ScenarioSchemaError
from .scenarios import invariant_report, load_results, load_scenario, output_dir, run_scenario

CONFIG_ERROR = 2


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rimech", description="Run reparametrization-invariance scenarios.")
    ap.add_argument("--out", default="results", help="output directory (RI_MECH_OUT overrides)")
    ap.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")
    ap.add_argument("--threads", type=int, default=1, help="parallel scenarios in 'suite'")
    ap.add_argument("--seed", type=int, default=None, help="seed for randomized probes")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("config")
    p = sub.add_parser("suite", help="run every *.json scenario in a directory")
    p.add_argument("directory")
    p = sub.add_parser("report", help="summarize the summary.json files under a results directory")
    p.add_argument("results")
    return ap


def _describe(exc: ScenarioError) -> str:
    if isinstance(exc, ScenarioParseError):
        return f"parse error at line {exc.line}, column {exc.column}: {exc}"
    if isinstance(exc, ScenarioSchemaError):
        return "schema errors:\n" + "\n".join(f"  - {v}" for v in exc.violations)
    return str(exc)


def _run_one(args):
    cfg, out, tol_scale = args
    return run_scenario(cfg, out, tol_scale)


def _finish(results) -> int:
    report = invariant_report(results)
    for line in report.lines():
        print(line)
    print(f"{len(report.rows) - len(report.failing())}/{len(report.rows)} checks passed")
    return report.exit_code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.tol_scale <= 0:
        print("--tol-scale must be positive", file=sys.stderr)
        return CONFIG_ERROR
    out = output_dir(args.out)

    if args.command == "report":
        return _finish(load_results(args.results))

    if args.command == "run":
        paths = [Path(args.config)]
    else:
        paths = sorted(Path(args.directory).glob("*.json"))

    configs = []
    bad = False
    for path in paths:
        try:
            cfg = load_scenario(path)
        except ScenarioError as exc:
            print(f"{path}: {_describe(exc)}", file=sys.stderr)
            bad = True
            continue
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        configs.append(cfg)
    if bad:
        return CONFIG_ERROR

    jobs = [(cfg, out, args.tol_scale) for cfg in configs]
    try:
        if args.threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.threads) as pool:
                results = list(pool.map(_run_one, jobs))
        else:
            results = [_run_one(j) for j in jobs]
    except ScenarioError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return _finish(results)


if __name__ == "__main__":
    sys.exit(main())
