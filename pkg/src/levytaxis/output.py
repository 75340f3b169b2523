"""Run-directory output: snapshots, diagnostics CSV, metadata JSON.

All files are UTF-8 with LF line endings, fixed column order, and floats
printed with 17 significant digits, so identical configs produce byte-
identical output trees.  Nothing time- or host-dependent is written.

Layout of a run directory:

    config.json                 canonical echo of the resolved config
    metadata.json               grid/scheme/status/initial norms/snapshot index
    diagnostics.csv             one row per emitted DiagnosticsRecord
    snapshots/snapshot_NNNNNN.csv   columns x,rho,c (subset per config)
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from . import __version__
from .config import DIMENSIONAL, SimConfig
from .diagnostics import DiagnosticsRecord, ToleranceSet, check_invariants, norms
from .grid import Grid, RealField
from .initial_conditions import admissibility_norms, build
from .operators import DispersalOperator
from .scaling import dimensionalize
from .stepper import SimState, Status, run

OUTPUT_ROOT_ENV = "LEVYTAXIS_OUT"

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_BLOWUP = 10
EXIT_STEP_UNDERFLOW = 11

_STATUS_EXIT = {
    Status.COMPLETED: EXIT_OK,
    Status.BLOWUP: EXIT_BLOWUP,
    Status.STEP_UNDERFLOW: EXIT_STEP_UNDERFLOW,
}


def fmt(value: float) -> str:
    """17-significant-digit decimal rendering (lossless for float64)."""
    return f"{value:.17g}"


def status_exit_code(status: Status) -> int:
    return _STATUS_EXIT.get(status, 1)


def default_output_dir(config: SimConfig, label: str | None = None) -> Path:
    root = os.environ.get(OUTPUT_ROOT_ENV, "runs")
    name = label or f"run-{config.digest()}"
    return Path(root) / name


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_diagnostics_csv(path: Path, records: list[DiagnosticsRecord]) -> None:
    lines = [",".join(DiagnosticsRecord.CSV_FIELDS)]
    for rec in records:
        cells = []
        for name in DiagnosticsRecord.CSV_FIELDS:
            value = getattr(rec, name)
            cells.append(str(int(value)) if isinstance(value, bool) else fmt(value))
        lines.append(",".join(cells))
    _write_text(path, "\n".join(lines) + "\n")


def read_diagnostics_csv(path: Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        for line in fh:
            parts = line.strip().split(",")
            rows.append({k: float(v) for k, v in zip(header, parts)})
    return rows


def write_snapshot_csv(
    path: Path, x: np.ndarray, rho: np.ndarray, c: np.ndarray, fields: tuple[str, ...]
) -> None:
    cols = ["x"] + [f for f in ("rho", "c") if f in fields]
    arrays = {"x": x, "rho": rho, "c": c}
    lines = [",".join(cols)]
    stacked = [arrays[name] for name in cols]
    for row in zip(*stacked):
        lines.append(",".join(fmt(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def read_snapshot_csv(path: Path) -> dict[str, np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {name: data[:, i].copy() for i, name in enumerate(header)}


def execute_run(config: SimConfig, out_dir: Path | str) -> tuple[SimState, Path]:
    """Run a config and write the full artifact tree; returns (state, dir)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    snap_dir = out / "snapshots"
    snap_dir.mkdir(exist_ok=True)

    snapshot_index: list[dict] = []

    physical_units = config.system == DIMENSIONAL and config.scales is not None

    def hook(index: int, state: SimState) -> None:
        x = config.grid.x
        rho = state.rho.values
        t = state.t
        if physical_units:
            scaled = dimensionalize(config.scales, x=x, t=t, rho=rho)
            x, rho, t = scaled["x"], scaled["rho"], float(scaled["t"])
        name = f"snapshot_{index:06d}.csv"
        write_snapshot_csv(
            snap_dir / name, x, rho, state.c.values, config.snapshot_fields
        )
        snapshot_index.append({"index": index, "t": t, "file": f"snapshots/{name}"})

    rho0 = build(config.ic, config.grid)
    ic_norms = admissibility_norms(rho0)

    state, records = run(config, snapshot_hook=hook)

    _write_text(out / "config.json", config.canonical_json())
    write_diagnostics_csv(out / "diagnostics.csv", records)

    metadata = {
        "code_version": __version__,
        "scheme": "integrating-factor RK4, 2/3-rule dealiased flux",
        "grid": {"n": config.grid.n, "length": config.grid.length, "dx": config.grid.dx},
        "operator": {"kind": config.operator.kind, "alpha": config.operator.alpha},
        "chemo": {
            "mode": config.chemo.mode,
            "delta": config.chemo.delta,
            "tau": config.chemo.tau,
        },
        "attractant_initialization": "elliptic_balance",
        "chemotaxis": config.chemotaxis,
        "system": config.system,
        "snapshot_units": "physical" if physical_units else "nondimensional",
        "initial_norms": ic_norms,
        "status": state.status.value,
        "exit_code": status_exit_code(state.status),
        "t_final": state.t,
        "steps": state.step_count,
        "rejections": state.rejections,
        "t_star_bracket": list(state.t_star_bracket) if state.t_star_bracket else None,
        "x_star": state.x_star,
        "flags_all_ok": all(
            r.mass_ok and r.c_l1_ok and r.c_l2_ok and r.cx_bound_ok and r.positivity_ok
            for r in records
        ),
        "snapshots": snapshot_index,
    }
    if physical_units:
        metadata["scales"] = {
            "x_scale": config.scales.x_scale,
            "t_scale": config.scales.t_scale,
            "rho_scale": config.scales.rho_scale,
        }
    _write_text(out / "metadata.json", json.dumps(metadata, indent=2, sort_keys=True) + "\n")
    return state, out


def check_run_dir(run_dir: Path | str) -> tuple[bool, list[str]]:
    """Re-evaluate every invariant flag from the stored snapshots.

    Rebuilds the grid and parameters from the stored config echo, recomputes
    each snapshot's diagnostics from its stored fields, and reports any flag
    that fails.  Returns (all_ok, list of human-readable violations).
    """
    run_dir = Path(run_dir)
    cfg = json.loads((run_dir / "config.json").read_text(encoding="utf-8"))
    meta = json.loads((run_dir / "metadata.json").read_text(encoding="utf-8"))

    grid = Grid(n=cfg["grid"]["n"], length=cfg["grid"]["length"])
    op_kind = meta["operator"]["kind"]
    op = DispersalOperator(op_kind, meta["operator"]["alpha"])
    delta = meta["chemo"]["delta"]
    tol = ToleranceSet(
        mass=cfg["tolerances"]["mass"],
        c_l1=cfg["tolerances"]["c_l1"],
        c_l2=cfg["tolerances"]["c_l2"],
        cx=cfg["tolerances"]["cx"],
        positivity=cfg["tolerances"]["positivity"],
    )
    if meta.get("snapshot_units") == "physical":
        raise ValueError(
            "check requires nondimensional snapshots; this run stored physical units"
        )

    problems: list[str] = []
    initial = None
    for entry in meta["snapshots"]:
        data = read_snapshot_csv(run_dir / entry["file"])
        if "rho" not in data or "c" not in data:
            problems.append(f"{entry['file']}: missing rho or c column")
            continue
        rho = RealField(data["rho"], grid)
        c = RealField(data["c"], grid)
        record = norms(rho, c, op, t=entry["t"])
        if initial is None:
            initial = record
        record = check_invariants(record, initial, delta, tol)
        for flag in ("mass_ok", "c_l1_ok", "c_l2_ok", "cx_bound_ok", "positivity_ok"):
            if not getattr(record, flag):
                problems.append(f"t={entry['t']:g}: {flag} violated")
    return not problems, problems
