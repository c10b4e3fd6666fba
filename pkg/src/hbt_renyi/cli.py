"""Command-line interface.

Commands::

    hbt-renyi scan        detector scan at fixed nbar (I, J, D, normalised, g2 - 1)
    hbt-renyi sweep-nbar  correlations versus nbar at fixed offset
    hbt-renyi verify      weak-light series match and deviation report
    hbt-renyi mc          Monte Carlo estimate of g2 - 1

Exit codes: 0 success, 2 invalid arguments, 3 verification failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .datasets import (
    ScanRecord,
    SweepRecord,
    as_row,
    check_scan_rows,
    check_sweep_rows,
    column_names,
    scan_records,
    sweep_records,
)
from .exceptions import HbtRenyiError
from .montecarlo import McConfig, estimate_g2
from .optics import HbtParams, intensity_correlation_minus_one
from .special import KERNELS
from .weaklight import taylor_match_order, weaklight_deviation

log = logging.getLogger("hbt_renyi")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_IO = 4

WEAK_LIGHT_NBAR = 0.01
DEVIATION_TOL = 1e-4
MC_COVERAGE = 0.95
MC_SIGMAS = 3.0


class UsageError(Exception):
    pass


def fmt(value: float) -> str:
    return format(float(value), ".12g")


def _rounded(value):
    if isinstance(value, float):
        return float(fmt(value))
    return value


def render(columns: list[str], rows: list[dict], fmt_name: str, meta: dict | None = None) -> str:
    if fmt_name == "json":
        doc = {"columns": columns, "rows": [{k: _rounded(r[k]) for k in columns} for r in rows]}
        if meta:
            doc["meta"] = meta
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r[k]) if isinstance(r[k], (float, int)) else r[k] for k in columns])
    return buf.getvalue()


def read_table(path: str, fmt_name: str) -> list[dict]:
    with open(path, newline="") as fh:
        if fmt_name == "json":
            return json.load(fh)["rows"]
        return list(csv.DictReader(fh))


def write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def parse_grid(spec: str) -> tuple:
    """``start:stop:count`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in spec:
            start, stop, count = spec.split(":")
            count = int(count)
            if count < 1:
                raise ValueError
            return tuple(float(v) for v in np.linspace(float(start), float(stop), count))
        return tuple(float(v) for v in spec.split(","))
    except ValueError:
        raise UsageError(f"bad grid spec {spec!r}; expected start:stop:count or a list")


def parse_floats(spec: str) -> list[float]:
    try:
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad number list {spec!r}")


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


# commands


def cmd_scan(args) -> int:
    params = HbtParams(args.nbar, args.kappa, args.kernel)
    records = scan_records(params, args.x_max, args.points)
    columns = column_names(ScanRecord)
    write_output(render(columns, [as_row(r) for r in records], args.format), args.out)
    if args.check:
        return _check_file(args, check_scan_rows)
    return EXIT_OK


def cmd_sweep_nbar(args) -> int:
    records = sweep_records(
        args.x, args.kappa, args.nbar_min, args.nbar_max, args.points_per_decade, args.kernel
    )
    columns = column_names(SweepRecord)
    write_output(render(columns, [as_row(r) for r in records], args.format), args.out)
    if args.check:
        return _check_file(args, check_sweep_rows)
    return EXIT_OK


def _check_file(args, checker) -> int:
    if args.out == "-":
        raise UsageError("--check needs --out pointing to a file")
    problems = checker(read_table(args.out, args.format))
    for p in problems:
        log.error(p)
    return EXIT_VERIFY if problems else EXIT_OK


def verification_report(nbars, kernel: str, h_grid, kappa: float, x_max: float, points: int) -> dict:
    series = []
    for h in h_grid:
        rep = taylor_match_order(h, orders=8)
        interior = 0 < abs(h) < 1
        ok = rep.order_matched == 3 if interior else rep.order_matched == 8
        series.append(
            {
                "h": h,
                "order_matched": rep.order_matched,
                "max_residual_ratio": rep.max_residual_ratio,
                "coefficients": [list(row) for row in rep.coefficient_table],
                "status": "pass" if ok else "fail",
            }
        )
    grid = np.linspace(0.0, x_max, points)
    deviations = []
    for nbar in nbars:
        dev = weaklight_deviation(HbtParams(nbar, kappa, kernel), grid)
        if nbar <= WEAK_LIGHT_NBAR:
            status = "pass" if dev <= DEVIATION_TOL else "fail"
        else:
            status = "pass" if dev <= DEVIATION_TOL else "expected-fail"
        deviations.append(
            {"nbar": nbar, "deviation": dev, "deviation_over_nbar2": dev / nbar**2, "status": status}
        )
    passed = all(s["status"] == "pass" for s in series) and all(
        d["status"] != "fail" for d in deviations
    )
    return {
        "kernel": kernel,
        "kappa": kappa,
        "thresholds": {
            "coefficient_rtol": 1e-8,
            "deviation_tol": DEVIATION_TOL,
            "weak_light_nbar": WEAK_LIGHT_NBAR,
        },
        "series": series,
        "deviations": deviations,
        "passed": passed,
    }


def cmd_verify(args) -> int:
    nbars = parse_floats(args.nbar_list)
    h_grid = parse_floats(args.h_grid)
    if not nbars or any(n <= 0 for n in nbars):
        raise UsageError("--nbar-list needs positive values")
    report = verification_report(nbars, args.kernel, h_grid, args.kappa, args.x_max, args.points)
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        rows = [
            {"check": "series_order", "parameter": s["h"], "value": s["order_matched"], "status": s["status"]}
            for s in report["series"]
        ] + [
            {"check": "weaklight_deviation", "parameter": d["nbar"], "value": d["deviation"], "status": d["status"]}
            for d in report["deviations"]
        ]
        text = render(["check", "parameter", "value", "status"], rows, "csv")
    write_output(text, args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_mc(args) -> int:
    cfg = McConfig(
        source_points=args.source_points,
        trials=args.trials,
        nbar=args.nbar,
        kappa=args.kappa,
        seed=args.seed,
        detector_grid=parse_grid(args.grid),
    )
    estimates = estimate_g2(cfg, workers=args.threads)
    # g2 - 1 does not depend on nbar
    params = HbtParams(1.0, args.kappa)
    rows = [
        {
            "x": e.x,
            "g2m1_estimate": e.g2_minus_1,
            "std_error": e.std_error,
            "g2m1_analytic": float(intensity_correlation_minus_one(params, e.x)),
        }
        for e in estimates
    ]
    columns = ["x", "g2m1_estimate", "std_error", "g2m1_analytic"]
    write_output(render(columns, rows, args.format), args.out)
    if args.check:
        inside = [
            abs(r["g2m1_estimate"] - r["g2m1_analytic"]) <= MC_SIGMAS * r["std_error"] for r in rows
        ]
        coverage = sum(inside) / len(inside)
        log.info("points within %.0f std errors: %.1f%%", MC_SIGMAS, 100 * coverage)
        if coverage < MC_COVERAGE:
            return EXIT_VERIFY
    return EXIT_OK


def _output_options(p: argparse.ArgumentParser, default_format: str = "csv") -> None:
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbt-renyi",
        description="Renyi-2 correlations of thermal light in a Hanbury Brown-Twiss set-up.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1,
        help="worker threads (never changes output bytes)",
    )
    parser.add_argument("--config", help="key=value file mirroring the flags")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="detector scan at fixed nbar")
    _output_options(p)
    p.add_argument("--nbar", type=float, default=10.0)
    p.add_argument("--kappa", type=float, default=1000.0)
    p.add_argument("--x-max", type=float, default=0.01)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--kernel", choices=sorted(KERNELS), default="jinc")
    p.add_argument("--check", action="store_true", help="re-read the output and validate it")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sweep-nbar", help="correlations versus nbar")
    _output_options(p)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=1000.0)
    p.add_argument("--nbar-min", type=float, default=1e-3)
    p.add_argument("--nbar-max", type=float, default=1e2)
    p.add_argument("--points-per-decade", type=int, default=10)
    p.add_argument("--kernel", choices=sorted(KERNELS), default="jinc")
    p.add_argument("--check", action="store_true", help="re-read the output and validate it")
    p.set_defaults(func=cmd_sweep_nbar)

    p = sub.add_parser("verify", help="weak-light verification report")
    _output_options(p, default_format="json")
    p.add_argument("--nbar-list", default="0.01,10")
    p.add_argument("--kernel", choices=sorted(KERNELS), default="jinc")
    p.add_argument("--h-grid", default="0,0.1,0.3,0.5,0.7,0.9,1")
    p.add_argument("--kappa", type=float, default=1000.0)
    p.add_argument("--x-max", type=float, default=0.01)
    p.add_argument("--points", type=int, default=2001)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mc", help="Monte Carlo estimate of g2 - 1")
    _output_options(p)
    p.add_argument("--source-points", type=int, default=512)
    p.add_argument("--trials", type=int, default=200_000)
    p.add_argument("--nbar", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=1000.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--grid", default="0:0.01:25", help="start:stop:count or comma list")
    p.add_argument("--check", action="store_true", help="fail unless 95%% of points are within 3 std errors")
    p.set_defaults(func=cmd_mc)
    return parser


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    subparsers = next(
        a for a in parser._actions if isinstance(a, argparse._SubParsersAction)
    ).choices
    used = set()
    for target in [parser, *subparsers.values()]:
        dests = {a.dest: a for a in target._actions}
        for key, raw in values.items():
            if key not in dests or key in ("config", "help"):
                continue
            action = dests[key]
            if isinstance(action, argparse._StoreTrueAction):
                if raw.lower() not in _BOOL:
                    raise UsageError(f"config key {key!r} expects a boolean")
                value = _BOOL[raw.lower()]
            elif action.type is not None:
                try:
                    value = action.type(raw)
                except ValueError:
                    raise UsageError(f"config key {key!r}: bad value {raw!r}")
            else:
                value = raw
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
            target.set_defaults(**{key: value})
            used.add(key)
    unknown = set(values) - used
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except UsageError as exc:
        print(f"hbt-renyi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hbt-renyi: error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if args.threads < 1:
        print("hbt-renyi: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, HbtRenyiError, ValueError) as exc:
        print(f"hbt-renyi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hbt-renyi: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
