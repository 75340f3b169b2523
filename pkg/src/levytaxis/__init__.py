"""Pseudo-spectral simulation of 1D chemotactic aggregation with pluggable
nonlocal dispersal operators (Levy-flight, classical, and bounded-nonlocal),
plus a diagnostics suite that checks the conserved quantities and norm bounds
of the model on every snapshot."""

__version__ = "0.1.0"

from .chemo import ChemoParams, solve_elliptic, step_parabolic_c
from .config import (
    ConfigError,
    SimConfig,
    default_config,
    load_config,
    preset_config,
    presets,
    resolve,
)
from .diagnostics import (
    DiagnosticsRecord,
    ToleranceSet,
    check_invariants,
    cx_bound_constant,
    frac_seminorm,
    l2_norm_spectral,
    linf_norm,
    lp_norm,
    norms,
)
from .grid import (
    Grid,
    RealField,
    SpectralField,
    backward,
    forward,
    make_grid,
    spectral_derivative,
)
from .initial_conditions import (
    GaussianBump,
    InitialConditionSpec,
    MultiBump,
    SeededRandom,
    admissibility_norms,
    build,
)
from .operators import (
    DispersalOperator,
    apply_dispersal,
    half_symbol,
    laplacian,
    mesenchymal,
    riesz,
    symbol,
)
from .scaling import (
    NondimParams,
    PhysicalParams,
    adimensionalize,
    dimensionalize,
    nondimensionalize,
)
from .stepper import (
    SimState,
    Status,
    StepControl,
    chemotactic_flux_divergence,
    detect_blowup,
    initial_state,
    run,
    step,
)
from .sweep import SweepSpec, run_sweep

__all__ = [
    "ChemoParams",
    "ConfigError",
    "DiagnosticsRecord",
    "DispersalOperator",
    "GaussianBump",
    "Grid",
    "InitialConditionSpec",
    "MultiBump",
    "NondimParams",
    "PhysicalParams",
    "RealField",
    "SeededRandom",
    "SimConfig",
    "SimState",
    "SpectralField",
    "Status",
    "StepControl",
    "SweepSpec",
    "ToleranceSet",
    "adimensionalize",
    "admissibility_norms",
    "apply_dispersal",
    "backward",
    "build",
    "check_invariants",
    "chemotactic_flux_divergence",
    "cx_bound_constant",
    "default_config",
    "detect_blowup",
    "dimensionalize",
    "forward",
    "frac_seminorm",
    "half_symbol",
    "initial_state",
    "l2_norm_spectral",
    "laplacian",
    "linf_norm",
    "load_config",
    "lp_norm",
    "make_grid",
    "mesenchymal",
    "nondimensionalize",
    "norms",
    "preset_config",
    "presets",
    "resolve",
    "riesz",
    "run",
    "run_sweep",
    "solve_elliptic",
    "spectral_derivative",
    "step",
    "step_parabolic_c",
    "symbol",
]
