"""Parameter sweeps and collapse-threshold bisection.

A sweep runs one simulation per value of a single swept parameter (initial
mass, dispersal exponent alpha, or depletion delta), either over an explicit
value list (members run concurrently with bounded parallelism) or in
bisection mode, which brackets the value where the run outcome flips from
completion to collapse.  A run counts as collapsed when it does not complete:
either the sup-growth detector fired or the step size underflowed while the
aggregate sharpened beyond resolution.  Bisection is geometric (midpoints in
log space) and stops when the bracket's relative width drops below the stop
tolerance.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import ConfigError, SimConfig, deep_merge, resolve
from .output import _write_text, execute_run, fmt, status_exit_code
from .stepper import Status

SWEPT_PARAMETERS = ("mass", "alpha", "delta")


@dataclass(frozen=True)
class SweepSpec:
    """A base config plus one swept parameter and its values or bracket."""

    base: dict
    parameter: str
    values: tuple[float, ...] | None = None
    bracket: tuple[float, float] | None = None
    stop_tol: float = 0.01
    max_parallel: int = 4

    def __post_init__(self) -> None:
        if self.parameter not in SWEPT_PARAMETERS:
            raise ConfigError(
                f"swept parameter must be one of {', '.join(SWEPT_PARAMETERS)}, "
                f"got {self.parameter!r}"
            )
        if (self.values is None) == (self.bracket is None):
            raise ConfigError("exactly one of values or bracket must be given")
        if self.values is not None and len(self.values) == 0:
            raise ConfigError("values list must not be empty")
        if self.bracket is not None:
            lo, hi = self.bracket
            if not 0 < lo < hi:
                raise ConfigError(f"bracket must satisfy 0 < lo < hi, got {self.bracket}")
        if not self.stop_tol > 0:
            raise ConfigError(f"stop_tol must be positive, got {self.stop_tol}")
        if self.max_parallel < 1:
            raise ConfigError(f"max_parallel must be >= 1, got {self.max_parallel}")


def load_sweep_spec(path: str | Path) -> SweepSpec:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"sweep file not found: {p}")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    allowed = {"base", "parameter", "values", "bracket", "stop_tol", "max_parallel"}
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"{key}: unknown key")
    if "base" not in raw or not isinstance(raw["base"], dict):
        raise ConfigError("base: required (object)")
    if "parameter" not in raw:
        raise ConfigError("parameter: required")
    return SweepSpec(
        base=raw["base"],
        parameter=raw["parameter"],
        values=tuple(raw["values"]) if raw.get("values") is not None else None,
        bracket=tuple(raw["bracket"]) if raw.get("bracket") is not None else None,
        stop_tol=raw.get("stop_tol", 0.01),
        max_parallel=raw.get("max_parallel", 4),
    )


def member_config(spec: SweepSpec, value: float) -> SimConfig:
    """The base config with the swept parameter set to ``value``."""
    if spec.parameter == "mass":
        overlay = {"initial_condition": {"mass": value}}
    elif spec.parameter == "alpha":
        overlay = {"alpha": value}
    else:
        overlay = {"delta": value}
    return resolve(deep_merge(spec.base, overlay))


def collapsed(status: Status) -> bool:
    return status in (Status.BLOWUP, Status.STEP_UNDERFLOW)


def _run_member(spec: SweepSpec, value: float, out_root: Path) -> dict:
    config = member_config(spec, value)
    run_dir = out_root / "members" / f"{spec.parameter}={value:.10g}"
    state, _ = execute_run(config, run_dir)
    return {
        "value": value,
        "status": state.status.value,
        "exit_code": status_exit_code(state.status),
        "collapsed": collapsed(state.status),
        "t_final": state.t,
        "steps": state.step_count,
        "run_dir": str(run_dir),
    }


def _write_report(out_root: Path, spec: SweepSpec, rows: list[dict], extra: dict) -> None:
    header = ("value", "status", "exit_code", "collapsed", "t_final", "steps", "run_dir")
    lines = [",".join(header)]
    for row in sorted(rows, key=lambda r: r["value"]):
        lines.append(
            ",".join(
                [
                    fmt(row["value"]),
                    row["status"],
                    str(row["exit_code"]),
                    str(int(row["collapsed"])),
                    fmt(row["t_final"]),
                    str(row["steps"]),
                    row["run_dir"],
                ]
            )
        )
    _write_text(out_root / "sweep.csv", "\n".join(lines) + "\n")
    report = {
        "parameter": spec.parameter,
        "mode": "bisection" if spec.bracket else "values",
        "members": sorted(rows, key=lambda r: r["value"]),
        **extra,
    }
    _write_text(out_root / "sweep.json", json.dumps(report, indent=2, sort_keys=True) + "\n")


def run_sweep(spec: SweepSpec, out_root: Path | str) -> dict:
    """Execute a sweep; returns the report dict (also written to sweep.json)."""
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)

    if spec.values is not None:
        rows = []
        with ThreadPoolExecutor(max_workers=spec.max_parallel) as pool:
            futures = [
                pool.submit(_run_member, spec, value, out_root) for value in spec.values
            ]
            rows = [f.result() for f in futures]
        _write_report(out_root, spec, rows, {})
        return {"mode": "values", "members": rows}

    lo, hi = spec.bracket
    rows = []
    row_lo = _run_member(spec, lo, out_root)
    row_hi = _run_member(spec, hi, out_root)
    rows += [row_lo, row_hi]
    if row_lo["collapsed"] == row_hi["collapsed"]:
        _write_report(
            out_root, spec, rows, {"error": "bracket endpoints give the same outcome"}
        )
        raise ConfigError(
            f"bracket endpoints [{lo}, {hi}] both "
            f"{'collapsed' if row_lo['collapsed'] else 'completed'}; "
            "bisection needs differing outcomes"
        )

    # Orient so that lo completes and hi collapses (or the reverse), and close
    # the bracket geometrically on the flip point.
    while hi / lo - 1.0 > spec.stop_tol:
        mid = (lo * hi) ** 0.5
        row_mid = _run_member(spec, mid, out_root)
        rows.append(row_mid)
        if row_mid["collapsed"] == row_lo["collapsed"]:
            lo = mid
            row_lo = row_mid
        else:
            hi = mid
            row_hi = row_mid

    extra = {
        "bracket": [lo, hi],
        "bracket_relative_width": hi / lo - 1.0,
        "lower_outcome": row_lo["status"],
        "upper_outcome": row_hi["status"],
    }
    _write_report(out_root, spec, rows, extra)
    return {"mode": "bisection", "members": rows, **extra}
