"""Command-line entry point.

Subcommands:

* ``simulate <config.json> [--out DIR] [--preset NAME] [--set key=value ...]``
  runs one simulation and writes the run directory.  Exit codes: 0 the run
  completed, 10 collapse detected, 11 step-size underflow, 2 bad config.
* ``sweep <sweep.json> [--jobs N] [--out DIR]`` runs a parameter sweep or a
  collapse-threshold bisection and writes per-member directories plus an
  aggregate CSV/JSON report.
* ``check <run-dir>`` re-evaluates every invariant flag from the stored
  snapshots of an existing run directory.

The environment variable LEVYTAXIS_OUT selects the default output root.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .config import ConfigError, apply_overrides, default_config, deep_merge, presets, resolve
from .output import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    check_run_dir,
    default_output_dir,
    execute_run,
    status_exit_code,
)
from .sweep import load_sweep_spec, run_sweep


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levytaxis",
        description="Pseudo-spectral chemotactic aggregation with nonlocal dispersal",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one simulation")
    sim.add_argument("config", nargs="?", help="JSON config file")
    sim.add_argument("--preset", help="named scenario to start from")
    sim.add_argument("--out", help="output directory")
    sim.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="dotted-path config override (repeatable)",
    )

    swp = sub.add_parser("sweep", help="run a parameter sweep or bisection")
    swp.add_argument("spec", help="JSON sweep specification")
    swp.add_argument("--jobs", type=int, default=None, help="parallel member cap")
    swp.add_argument("--out", help="output directory")

    chk = sub.add_parser("check", help="re-evaluate invariants of a stored run")
    chk.add_argument("run_dir", help="existing run directory")
    return parser


def _cmd_simulate(args) -> int:
    raw: dict = {}
    if args.preset is not None:
        table = presets()
        if args.preset not in table:
            print(
                f"error: unknown preset {args.preset!r}; choose from "
                f"{', '.join(sorted(table))}",
                file=sys.stderr,
            )
            return EXIT_CONFIG_ERROR
        raw = table[args.preset]
    if args.config is not None:
        try:
            file_raw = json.loads(open(args.config, encoding="utf-8").read())
        except FileNotFoundError:
            print(f"error: config file not found: {args.config}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        except json.JSONDecodeError as exc:
            print(f"error: {args.config}: invalid JSON: {exc}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        raw = deep_merge(raw, file_raw)
    elif args.preset is None:
        print("error: simulate needs a config file or --preset", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        raw = apply_overrides(raw, args.overrides)
        config = resolve(raw)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    out = args.out or config.output_directory or default_output_dir(
        config, label=args.preset and f"{args.preset}-{config.digest()}"
    )
    state, out_dir = execute_run(config, out)
    print(
        f"{state.status.value}: t={state.t:.6g} steps={state.step_count} "
        f"rejections={state.rejections} -> {out_dir}"
    )
    if state.t_star_bracket is not None:
        lo, hi = state.t_star_bracket
        print(f"collapse-time bracket: [{lo:.6g}, {hi:.6g}]")
    return status_exit_code(state.status)


def _cmd_sweep(args) -> int:
    try:
        spec = load_sweep_spec(args.spec)
        if args.jobs is not None:
            spec = dataclasses.replace(spec, max_parallel=args.jobs)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    out = args.out
    if out is None:
        base = resolve(spec.base)
        out = default_output_dir(base, label=f"sweep-{spec.parameter}-{base.digest()}")
    try:
        report = run_sweep(spec, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    for row in sorted(report["members"], key=lambda r: r["value"]):
        print(f"{spec.parameter}={row['value']:.10g}: {row['status']}")
    if report.get("bracket"):
        lo, hi = report["bracket"]
        print(f"threshold bracket: [{lo:.10g}, {hi:.10g}] (width {hi / lo - 1.0:.3%})")
    print(f"report -> {out}")
    return EXIT_OK


def _cmd_check(args) -> int:
    try:
        ok, problems = check_run_dir(args.run_dir)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    for p in problems:
        print(f"violation: {p}")
    print("all invariants hold" if ok else f"{len(problems)} violation(s)")
    return EXIT_OK if ok else 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "sweep":
        return _cmd_sweep(args)
    return _cmd_check(args)


if __name__ == "__main__":
    sys.exit(main())
