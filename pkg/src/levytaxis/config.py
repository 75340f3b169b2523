"""Configuration ingestion, validation, defaults, and scenario presets.

Configs are JSON objects.  Every key has a default except those whose
presence depends on the selected mode; unknown keys are rejected with their
full path.  ``resolve`` returns both the typed :class:`SimConfig` and a
canonical fully-explicit dict (the echo written into every run directory,
which also drives the determinism contract).

System modes
------------
``parabolic_elliptic``
    The core model: density dynamics plus the elliptic attractant balance.
``full_nondimensional``
    Keeps the attractant time derivative; requires ``tau``.
``dimensional``
    Takes a ``physical`` block of rate constants; ``delta``, ``tau``, the
    operator and the unit scales are derived, and must not be set directly.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .chemo import ELLIPTIC, PARABOLIC, ChemoParams
from .diagnostics import ToleranceSet
from .grid import Grid
from .initial_conditions import (
    GaussianBump,
    InitialConditionSpec,
    MultiBump,
    SeededRandom,
)
from .operators import (
    LAPLACIAN,
    MESENCHYMAL,
    RIESZ,
    DispersalOperator,
)
from .scaling import NondimParams, PhysicalParams, nondimensionalize
from .stepper import StepControl

PARABOLIC_ELLIPTIC = "parabolic_elliptic"
FULL_NONDIMENSIONAL = "full_nondimensional"
DIMENSIONAL = "dimensional"

_SYSTEMS = (PARABOLIC_ELLIPTIC, FULL_NONDIMENSIONAL, DIMENSIONAL)

SNAPSHOT_FIELDS = ("rho", "c")


class ConfigError(ValueError):
    """Raised for parse or validation failures; message names the field path."""


@dataclass(frozen=True)
class SimConfig:
    """Fully validated run parameters."""

    grid: Grid
    operator: DispersalOperator
    chemo: ChemoParams
    system: str
    chemotaxis: bool
    ic: InitialConditionSpec
    control: StepControl
    tolerances: ToleranceSet
    t_end: float
    output_interval: float
    output_directory: str | None
    snapshot_fields: tuple[str, ...]
    seed: int
    physical: PhysicalParams | None
    scales: NondimParams | None
    resolved: dict

    def canonical_json(self) -> str:
        return json.dumps(self.resolved, indent=2, sort_keys=True) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:12]


def _fail(path: str, message: str) -> None:
    raise ConfigError(f"{path}: {message}" if path else message)


def _check_keys(d: dict, allowed: set[str], path: str) -> None:
    for key in d:
        if key not in allowed:
            where = f"{path}.{key}" if path else key
            _fail(where, "unknown key")


def _number(d: dict, key: str, path: str, *, positive=False, nonneg=False):
    value = d[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"{path}{key}", f"expected a number, got {value!r}")
    if positive and not value > 0:
        _fail(f"{path}{key}", f"must be positive, got {value}")
    if nonneg and value < 0:
        _fail(f"{path}{key}", f"must be nonnegative, got {value}")
    return float(value)


def default_config() -> dict:
    """The base configuration; presets and user files overlay it."""
    return {
        "system": PARABOLIC_ELLIPTIC,
        "operator": RIESZ,
        "alpha": 1.5,
        "chemo_mode": ELLIPTIC,
        "delta": 1.0,
        "tau": None,
        "chemotaxis": True,
        "grid": {"n": 1024, "length": 100.0},
        "initial_condition": {
            "kind": "gaussian",
            "mass": 10.0,
            "width": 1.0,
            "center": None,
            "floor": 0.0,
        },
        "step_control": {
            "cfl": 0.4,
            "dt_min": 1e-12,
            "dt_max": 10.0,
            "blowup_factor": 1e4,
            "undershoot_tol": 1e-8,
            "adaptive": True,
            "dt": None,
        },
        "tolerances": {
            "mass": 1e-10,
            "c_l1": 1e-10,
            "c_l2": 1e-10,
            "cx": 1e-8,
            "positivity": 1e-8,
        },
        "t_end": 10.0,
        "output": {"interval": None, "directory": None, "snapshot_fields": list(SNAPSHOT_FIELDS)},
        "seed": 0,
        "physical": None,
    }


def presets() -> dict[str, dict]:
    """Named scenario overlays.

    ``fractional`` is the Levy-dispersal reference scenario; ``classical``
    runs the same initial condition under ordinary diffusion; ``mesenchymal``
    exercises the bounded nonlocal operator whose aggregation concentrates
    without limit, with a sup-growth factor tuned to fire while the transient
    is still spectrally resolved; ``custom`` is an empty overlay.
    """
    return {
        "fractional": {
            "system": PARABOLIC_ELLIPTIC,
            "operator": RIESZ,
            "alpha": 1.5,
            "delta": 1.0,
            "grid": {"n": 4096, "length": 200.0},
            "initial_condition": {"kind": "gaussian", "mass": 100.0, "width": 1.0},
            "t_end": 50.0,
            "output": {"interval": 1.0},
        },
        "classical": {
            "system": PARABOLIC_ELLIPTIC,
            "operator": LAPLACIAN,
            "delta": 1.0,
            "grid": {"n": 4096, "length": 200.0},
            "initial_condition": {"kind": "gaussian", "mass": 100.0, "width": 1.0},
            "t_end": 50.0,
            "output": {"interval": 1.0},
        },
        "mesenchymal": {
            "system": PARABOLIC_ELLIPTIC,
            "operator": MESENCHYMAL,
            "delta": 1.0,
            "grid": {"n": 2048, "length": 100.0},
            "initial_condition": {"kind": "gaussian", "mass": 100.0, "width": 1.0},
            "t_end": 20.0,
            "step_control": {"blowup_factor": 1.5},
            "output": {"interval": 0.5},
        },
        "custom": {},
    }


def deep_merge(base: dict, overlay: dict) -> dict:
    """Recursive dict merge; overlay wins, nested dicts merge key by key."""
    out = copy.deepcopy(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def apply_overrides(raw: dict, assignments: list[str]) -> dict:
    """Apply ``key.path=value`` overrides; values parse as JSON when possible."""
    out = copy.deepcopy(raw)
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        dotted, text = item.split("=", 1)
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = out
        parts = dotted.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {dotted!r} descends through a non-object")
        node[parts[-1]] = value
    return out


_TOP_KEYS = {
    "system",
    "operator",
    "alpha",
    "chemo_mode",
    "delta",
    "tau",
    "chemotaxis",
    "grid",
    "initial_condition",
    "step_control",
    "tolerances",
    "t_end",
    "output",
    "seed",
    "physical",
}


def _parse_operator(raw: dict) -> DispersalOperator:
    kind = raw["operator"]
    if kind not in (RIESZ, LAPLACIAN, MESENCHYMAL):
        _fail("operator", f"must be one of riesz|laplacian|mesenchymal, got {kind!r}")
    if kind == RIESZ:
        if raw.get("alpha") is None:
            _fail("alpha", "required for the riesz operator")
        alpha = _number(raw, "alpha", "")
        if not 1.0 < alpha <= 2.0:
            _fail("alpha", f"must lie in (1, 2], got {alpha}")
        return DispersalOperator(RIESZ, alpha)
    if raw.get("alpha") is not None:
        _fail("alpha", f"not accepted for the {kind} operator")
    return DispersalOperator(kind)


def _parse_ic(raw: dict) -> InitialConditionSpec:
    block = raw["initial_condition"]
    if not isinstance(block, dict):
        _fail("initial_condition", "expected an object")
    kind = block.get("kind")
    path = "initial_condition."
    floor = _number(block, "floor", path, nonneg=True) if "floor" in block else 0.0
    if kind == "gaussian":
        _check_keys(block, {"kind", "mass", "width", "center", "floor"}, "initial_condition")
        center = block.get("center")
        ic = GaussianBump(
            mass=_number(block, "mass", path, nonneg=True),
            width=_number(block, "width", path, positive=True),
            center=None if center is None else _number(block, "center", path),
        )
    elif kind == "multi_bump":
        _check_keys(block, {"kind", "bumps", "floor"}, "initial_condition")
        bumps = block.get("bumps")
        if not isinstance(bumps, list) or not bumps:
            _fail("initial_condition.bumps", "expected a non-empty list")
        parsed = []
        for i, b in enumerate(bumps):
            bpath = f"initial_condition.bumps[{i}]"
            if not isinstance(b, dict):
                _fail(bpath, "expected an object")
            _check_keys(b, {"mass", "width", "center"}, bpath)
            parsed.append(
                GaussianBump(
                    mass=_number(b, "mass", bpath + ".", nonneg=True),
                    width=_number(b, "width", bpath + ".", positive=True),
                    center=None
                    if b.get("center") is None
                    else _number(b, "center", bpath + "."),
                )
            )
        ic = MultiBump(tuple(parsed))
    elif kind == "seeded_random":
        _check_keys(
            block,
            {"kind", "seed", "mass", "modes", "envelope_width", "floor"},
            "initial_condition",
        )
        ic = SeededRandom(
            seed=int(_number(block, "seed", path, nonneg=True)) if "seed" in block else 0,
            mass=_number(block, "mass", path, nonneg=True),
            modes=int(_number(block, "modes", path, positive=True)) if "modes" in block else 8,
            envelope_width=None
            if block.get("envelope_width") is None
            else _number(block, "envelope_width", path, positive=True),
        )
    else:
        _fail("initial_condition.kind", f"unknown kind {kind!r}")
    try:
        return InitialConditionSpec(ic, floor=floor)
    except ValueError as exc:
        _fail("initial_condition", str(exc))


def resolve(raw: dict) -> SimConfig:
    """Validate a raw config dict, fill defaults, and build the typed config."""
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected a JSON object")
    _check_keys(raw, _TOP_KEYS, "")

    system = raw.get("system", PARABOLIC_ELLIPTIC)
    if system not in _SYSTEMS:
        _fail("system", f"must be one of {'|'.join(_SYSTEMS)}, got {system!r}")

    merged = deep_merge(default_config(), raw)
    physical = None
    scales = None

    if system == DIMENSIONAL:
        for key in ("delta", "tau", "alpha"):
            if raw.get(key) is not None:
                _fail(key, "derived from the physical block in dimensional mode")
        if "operator" in raw:
            _fail("operator", "derived from the physical block in dimensional mode")
        block = merged.get("physical")
        if not isinstance(block, dict):
            _fail("physical", "required (object) in dimensional mode")
        _check_keys(block, {"d_rho", "d_c", "kappa", "gamma", "beta", "alpha"}, "physical")
        try:
            physical = PhysicalParams(
                d_rho=_number(block, "d_rho", "physical.", positive=True),
                d_c=_number(block, "d_c", "physical.", positive=True),
                kappa=_number(block, "kappa", "physical.", positive=True),
                gamma=_number(block, "gamma", "physical.", positive=True),
                beta=_number(block, "beta", "physical.", positive=True),
                alpha=_number(block, "alpha", "physical."),
            )
        except KeyError as exc:
            _fail("physical", f"missing key {exc.args[0]}")
        except ValueError as exc:
            _fail("physical", str(exc))
        scales = nondimensionalize(physical)
        merged["operator"] = RIESZ
        merged["alpha"] = physical.alpha
        merged["delta"] = scales.delta
        merged["tau"] = scales.tau
        merged["chemo_mode"] = PARABOLIC
    elif system == FULL_NONDIMENSIONAL:
        if raw.get("chemo_mode", PARABOLIC) != PARABOLIC:
            _fail("chemo_mode", "must be parabolic when system is full_nondimensional")
        merged["chemo_mode"] = PARABOLIC
        if merged.get("tau") is None:
            _fail("tau", "required when system is full_nondimensional")
    else:
        if raw.get("chemo_mode", ELLIPTIC) != ELLIPTIC:
            _fail("chemo_mode", "must be elliptic when system is parabolic_elliptic")
        merged["chemo_mode"] = ELLIPTIC
        if raw.get("tau") is not None:
            _fail("tau", "only meaningful in parabolic chemo mode")
        merged["tau"] = None

    if merged["physical"] is not None and system != DIMENSIONAL:
        _fail("physical", "only accepted in dimensional mode")

    # The default alpha belongs to the default (riesz) operator; it must not
    # leak onto an explicitly selected operator of another kind.
    if merged["operator"] != RIESZ and "alpha" not in raw:
        merged["alpha"] = None

    gblock = merged["grid"]
    _check_keys(gblock, {"n", "length"}, "grid")
    n = gblock.get("n")
    if isinstance(n, bool) or not isinstance(n, int):
        _fail("grid.n", f"expected an integer, got {n!r}")
    try:
        grid = Grid(n=n, length=_number(gblock, "length", "grid.", positive=True))
    except ValueError as exc:
        _fail("grid", str(exc))

    operator = _parse_operator(merged)

    delta = _number(merged, "delta", "", positive=True)
    tau = merged.get("tau")
    try:
        if merged["chemo_mode"] == PARABOLIC:
            chemo = ChemoParams(delta=delta, mode=PARABOLIC, tau=float(tau))
        else:
            chemo = ChemoParams(delta=delta, mode=ELLIPTIC)
    except (TypeError, ValueError) as exc:
        _fail("tau" if "tau" in str(exc) else "delta", str(exc))

    if not isinstance(merged["chemotaxis"], bool):
        _fail("chemotaxis", f"expected a boolean, got {merged['chemotaxis']!r}")

    ic = _parse_ic(merged)

    sblock = merged["step_control"]
    _check_keys(
        sblock,
        {"cfl", "dt_min", "dt_max", "blowup_factor", "undershoot_tol", "adaptive", "dt"},
        "step_control",
    )
    if not isinstance(sblock["adaptive"], bool):
        _fail("step_control.adaptive", "expected a boolean")
    dt = sblock.get("dt")
    try:
        control = StepControl(
            cfl=_number(sblock, "cfl", "step_control."),
            dt_min=_number(sblock, "dt_min", "step_control.", positive=True),
            dt_max=_number(sblock, "dt_max", "step_control.", positive=True),
            blowup_factor=_number(sblock, "blowup_factor", "step_control."),
            undershoot_tol=_number(sblock, "undershoot_tol", "step_control.", nonneg=True),
            adaptive=sblock["adaptive"],
            dt_init=None if dt is None else _number(sblock, "dt", "step_control.", positive=True),
        )
    except ValueError as exc:
        _fail("step_control", str(exc))

    tblock = merged["tolerances"]
    _check_keys(tblock, {"mass", "c_l1", "c_l2", "cx", "positivity"}, "tolerances")
    tolerances = ToleranceSet(
        mass=_number(tblock, "mass", "tolerances.", nonneg=True),
        c_l1=_number(tblock, "c_l1", "tolerances.", nonneg=True),
        c_l2=_number(tblock, "c_l2", "tolerances.", nonneg=True),
        cx=_number(tblock, "cx", "tolerances.", nonneg=True),
        positivity=_number(tblock, "positivity", "tolerances.", nonneg=True),
    )

    t_end = _number(merged, "t_end", "", positive=True)

    oblock = merged["output"]
    _check_keys(oblock, {"interval", "directory", "snapshot_fields"}, "output")
    interval = oblock.get("interval")
    if interval is None:
        interval = t_end / 50.0
    else:
        interval = _number(oblock, "interval", "output.", positive=True)
    directory = oblock.get("directory")
    if directory is not None and not isinstance(directory, str):
        _fail("output.directory", "expected a string path")
    fields = oblock.get("snapshot_fields", list(SNAPSHOT_FIELDS))
    if not isinstance(fields, list) or not fields:
        _fail("output.snapshot_fields", "expected a non-empty list")
    for f in fields:
        if f not in SNAPSHOT_FIELDS:
            _fail("output.snapshot_fields", f"unknown field {f!r}")

    seed = merged["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int):
        _fail("seed", f"expected an integer, got {seed!r}")

    resolved = copy.deepcopy(merged)
    resolved["output"]["interval"] = interval
    resolved["output"]["snapshot_fields"] = list(fields)
    if system == DIMENSIONAL:
        resolved["derived_scales"] = {
            "x_scale": scales.x_scale,
            "t_scale": scales.t_scale,
            "rho_scale": scales.rho_scale,
            "delta": scales.delta,
            "tau": scales.tau,
        }

    return SimConfig(
        grid=grid,
        operator=operator,
        chemo=chemo,
        system=system,
        chemotaxis=merged["chemotaxis"],
        ic=ic,
        control=control,
        tolerances=tolerances,
        t_end=t_end,
        output_interval=interval,
        output_directory=directory,
        snapshot_fields=tuple(fields),
        seed=seed,
        physical=physical,
        scales=scales,
        resolved=resolved,
    )


def load_config(path: str | Path) -> SimConfig:
    """Read, parse and validate a JSON config file."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    return resolve(raw)


def preset_config(name: str, overrides: dict | None = None) -> SimConfig:
    """Resolve a named preset, optionally overlaid with a dict of overrides."""
    table = presets()
    if name not in table:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {', '.join(sorted(table))}"
        )
    raw = table[name]
    if overrides:
        raw = deep_merge(raw, overrides)
    return resolve(raw)
