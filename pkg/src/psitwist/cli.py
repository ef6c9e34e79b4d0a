"""Command-line front end: ``psitwist verify | certify | scan``.

Exit codes: 0 success or certificate, 1 failure or inconclusive, 2 usage or
input error.  Flags override values from ``--config`` (a JSON object with
the same keys, dashes written as underscores), which override defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import analysis
from .scalarfield import ParseError, parse
from .sphere import DegenerateError

DEFAULTS = {
    "suite": "all",
    "f": "x1*x2",
    "c": 5.0,
    "c_range": None,
    "samples": None,
    "seed": 0,
    "tol": None,
    "out": None,
    "format": None,
    "timing": False,
}

SCAN_COLUMNS = (
    "c",
    "valid",
    "samples",
    "F_min",
    "F_max",
    "F_min_sampled",
    "F_max_sampled",
    "lambda_min",
    "lambda_max",
    "bound_min",
    "bound_max",
    "bh_flag",
    "pair_lambda_min",
    "pair_lambda_max",
    "bh_flag_pair_spectrum",
    "pointwise_error",
)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", metavar="PATH", help="JSON file with default values for these flags")
    common.add_argument("--seed", type=int, default=S, help="random seed (default 0)")
    common.add_argument("--samples", type=int, default=S, help="sample count or search budget")
    common.add_argument("--tol", action="append", default=S, metavar="VALUE|CHECK=VALUE", help="tolerance override")
    common.add_argument("--out", default=S, metavar="PATH", help="write the report here")
    common.add_argument("--format", choices=("json", "csv"), default=S, help="report format (verify: json, scan: csv)")

    p = argparse.ArgumentParser(prog="psitwist", description="Twisted almost Hermitian structures: checks, certificates, scans.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run case studies and property suites")
    v.add_argument("--suite", default=S, help="all | " + " | ".join(analysis.SUITES))
    v.add_argument("--timing", action="store_true", default=S, help="include wall times in the report")
    c = sub.add_parser("certify", parents=[common], help="search for a nonintegrability witness on S^6")
    c.add_argument("--f", default=S, metavar="EXPR", help="scalar field, e.g. 'x1*x2'")
    c.add_argument("--c", type=float, default=S, help="constant c in A_(f,c)")
    s = sub.add_parser("scan", parents=[common], help="eigenvalue scan over a range of c on S^6")
    s.add_argument("--f", default=S, metavar="EXPR")
    s.add_argument("--c-range", dest="c_range", default=S, metavar="A:B:STEP")
    return p


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    given = vars(args).copy()
    path = given.pop("config", None)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        for k, val in data.items():
            key = k.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {k!r}")
            cfg[key] = val
    cfg.update(given)
    if isinstance(cfg["tol"], (str, int, float)):
        cfg["tol"] = [str(cfg["tol"])]
    if cfg["samples"] is not None and int(cfg["samples"]) <= 0:
        raise UsageError("--samples must be positive")
    return cfg


def _parse_tols(items) -> tuple[float | None, dict[str, float]]:
    bare, named = None, {}
    for item in items or ():
        name, sep, value = str(item).rpartition("=")
        try:
            val = float(value)
        except ValueError as exc:
            raise UsageError(f"bad tolerance {item!r}") from exc
        if not val > 0:
            raise UsageError("tolerances must be positive")
        if sep:
            named[name] = val
        else:
            bare = val
    return bare, named


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _apply_tolerances(reports, bare, named) -> None:
    for r in reports:
        for i, chk in enumerate(r.checks):
            tol = named.get(chk.name, bare if chk.comparator == "le" else None)
            if tol is not None and chk.comparator != "info":
                r.checks[i] = analysis.Check(chk.name, chk.value, tol, chk.comparator, chk.witness)


def cmd_verify(cfg: dict) -> int:
    suite = cfg["suite"]
    if suite != "all" and suite not in analysis.SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose all, " + ", ".join(analysis.SUITES))
    reports = analysis.run_suite(suite, int(cfg["seed"]), cfg["samples"] and int(cfg["samples"]))
    bare, named = _parse_tols(cfg["tol"])
    _apply_tolerances(reports, bare, named)
    print(analysis.format_table(reports))
    if cfg["out"]:
        text = analysis.reports_to_csv(reports) if cfg["format"] == "csv" else analysis.reports_to_json(reports, bool(cfg["timing"]))
        _emit(text, cfg["out"])
    ok = all(r.passed for r in reports)
    print("all checks passed" if ok else f"{sum(len(r.failures()) for r in reports)} check(s) failed")
    return 0 if ok else 1


def _parse_field(text: str):
    try:
        return parse(str(text))
    except ParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc


def cmd_certify(cfg: dict) -> int:
    f = _parse_field(cfg["f"])
    bare, named = _parse_tols(cfg["tol"])
    if named:
        raise UsageError("certify takes a single --tol VALUE (the certificate threshold)")
    threshold = bare or analysis.CERTIFICATE_THRESHOLD
    try:
        result = analysis.nonintegrability_certificate(
            f, float(cfg["c"]), int(cfg["samples"] or 10_000), int(cfg["seed"]), threshold=threshold
        )
    except DegenerateError as exc:
        payload = {"status": "degenerate", "message": str(exc), "witness": exc.witness, "eigenvalue": exc.eigenvalue}
        sys.stderr.write(analysis.dumps_json(payload))
        return 2
    _emit(analysis.dumps_json(result.to_dict()), cfg["out"])
    return 0 if isinstance(result, analysis.Certificate) else 1


def _scan_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for r in rows:
        d = r.row()
        out = []
        for k in SCAN_COLUMNS:
            v = d[k]
            if isinstance(v, bool):
                out.append(str(v).lower())
            elif isinstance(v, float):
                out.append("" if math.isnan(v) else format(v, ".17g"))
            else:
                out.append(str(v))
        w.writerow(out)
    return buf.getvalue()


def cmd_scan(cfg: dict) -> int:
    f = _parse_field(cfg["f"])
    if not cfg["c_range"]:
        raise UsageError("scan needs --c-range A:B:STEP")
    try:
        cs = analysis.parse_c_range(str(cfg["c_range"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = analysis.eigen_scan(f, cs, int(cfg["samples"] or 100_000), int(cfg["seed"]), strict=False)
    if cfg["format"] == "json":  # scans default to CSV
        text = analysis.dumps_json({"f": str(f), "rows": [r.row() for r in rows], "bh_transition": analysis.bh_transition(rows)})
    else:
        text = _scan_csv(rows)
    _emit(text, cfg["out"])
    return 0


COMMANDS = {"verify": cmd_verify, "certify": cmd_certify, "scan": cmd_scan}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"psitwist {args.command}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
