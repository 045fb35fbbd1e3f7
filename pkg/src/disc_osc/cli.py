"""Command-line front end: ``disc-osc run | list | verify``.

Exit status is 0 when every pass/fail check passes, 1 when one fails and 2
for configuration errors.  ``DISC_OSC_THREADS`` caps the threads used by the
linear-algebra backend; it is applied before numpy is imported.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from pathlib import Path

THREAD_ENV = "DISC_OSC_THREADS"
_BACKEND_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")

SECTIONS = {"scenario", "parameters", "grid"}
SCENARIO_KEYS = {"name", "checks", "output_dir", "plot"}


def _apply_threads():
    n = os.environ.get(THREAD_ENV)
    if not n:
        return
    if not n.isdigit() or int(n) < 1:
        raise SystemExit(f"{THREAD_ENV} must be a positive integer, got {n!r}")
    for var in _BACKEND_VARS:
        os.environ.setdefault(var, n)


def load_config(path):
    """Read a ``key = value`` config with ``[scenario]``, ``[parameters]`` and ``[grid]`` sections."""
    from .scenarios import ConfigError, ScenarioConfig, grid_from_mapping

    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    extra = set(parser.sections()) - SECTIONS
    if extra:
        raise ConfigError(f"unknown sections: {', '.join(sorted(extra))}")
    if not parser.has_section("scenario"):
        raise ConfigError("missing [scenario] section")
    sc = dict(parser.items("scenario"))
    bad = set(sc) - SCENARIO_KEYS
    if bad:
        raise ConfigError(f"unknown keys in [scenario]: {', '.join(sorted(bad))}")
    if "name" not in sc:
        raise ConfigError("[scenario] needs a name")
    checks = None
    if "checks" in sc:
        checks = [c.strip() for c in sc["checks"].split(",") if c.strip()]
    out = Path(sc.get("output_dir", f"{sc['name']}_out"))
    if not out.is_absolute():
        out = path.parent / out
    try:
        plot = parser.getboolean("scenario", "plot", fallback=True)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    params = dict(parser.items("parameters")) if parser.has_section("parameters") else {}
    grid = grid_from_mapping(dict(parser.items("grid"))) if parser.has_section("grid") else None
    return ScenarioConfig(sc["name"], params, grid, out, checks, plot)


def _print_reports(result, stream):
    for r in result.reports:
        value = "-" if r.value is None else f"{r.value:.6g}" if isinstance(r.value, float) else str(r.value)
        stream.write(f"{r.verdict:<10} {r.name:<18} value={value}\n")
    case = result.case
    stream.write(f"zeros={len(case.zeros)} critical_points={len(case.criticals)}\n")


def _finish(result, stream=sys.stdout):
    _print_reports(result, stream)
    if result.failed:
        sys.stderr.write(f"failed checks: {', '.join(result.failed)}\n")
        return 1
    return 0


def cmd_run(args):
    from .report import write_outputs
    from .scenarios import run_scenario

    cfg = load_config(args.config)
    if args.output_dir:
        cfg.output_dir = Path(args.output_dir)
    if args.no_plot:
        cfg.plot = False
    result = run_scenario(cfg)
    paths = write_outputs(result)
    for p in paths:
        print(f"wrote {p}")
    return _finish(result)


def cmd_list(args):
    from .scenarios import CHECKS, scenario_table

    rows = scenario_table()
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    width = max(len(r["name"]) for r in rows)
    for r in rows:
        params = ", ".join(f"{k}={v}" for k, v in r["parameters"].items())
        print(f"{r['name']:<{width}}  {r['reproduces']}")
        print(f"{'':<{width}}  parameters: {params}")
        print(f"{'':<{width}}  checks: {', '.join(r['checks'])}")
    if args.checks:
        print()
        for name, (_, desc) in CHECKS.items():
            print(f"{name:<18} {desc}")
    return 0


def _parse_params(items):
    from .scenarios import ConfigError

    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_verify(args):
    from .report import report_json, write_outputs
    from .scenarios import ScenarioConfig, run_scenario

    cfg = ScenarioConfig(args.scenario, _parse_params(args.param), None,
                         Path(args.output_dir or f"{args.scenario}_out"), args.check or None, not args.no_plot)
    result = run_scenario(cfg)
    if args.output_dir:
        write_outputs(result)
    if args.json:
        sys.stdout.write(report_json(result))
        return 1 if result.failed else 0
    return _finish(result)


def build_parser():
    p = argparse.ArgumentParser(
        prog="disc-osc",
        description="Zeros, critical points and growth of solutions of f'' + A f = 0 in the unit disc.",
        epilog=f"{THREAD_ENV}=n limits backend threads.  Exit status: 0 pass, 1 failed check, 2 bad configuration.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a scenario from a config file and write reports")
    r.add_argument("config", help="config file with [scenario], [parameters] and [grid] sections")
    r.add_argument("--output-dir", help="override output_dir from the config")
    r.add_argument("--no-plot", action="store_true", help="skip plot.svg")
    r.set_defaults(func=cmd_run)

    ls = sub.add_parser("list", help="list scenarios, their parameters and the statements they reproduce")
    ls.add_argument("--json", action="store_true", help="machine-readable output")
    ls.add_argument("--checks", action="store_true", help="also list the available checks")
    ls.set_defaults(func=cmd_list)

    v = sub.add_parser("verify", help="run one scenario with default or chosen checks")
    v.add_argument("scenario")
    v.add_argument("--param", action="append", metavar="KEY=VALUE", help="scenario parameter (repeatable)")
    v.add_argument("--check", action="append", metavar="NAME", help="check to run (repeatable)")
    v.add_argument("--output-dir", help="also write report files here")
    v.add_argument("--no-plot", action="store_true")
    v.add_argument("--json", action="store_true", help="print report.json to stdout")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    _apply_threads()
    args = build_parser().parse_args(argv)
    from .scenarios import ConfigError

    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
