"""Per-snapshot norms and the checkable inequality flags.

Every snapshot records the L1/L2/L3/Linf norms of the density, its minimum,
the fractional dissipation seminorm, the attractant norms and gradient norm,
and five boolean flags:

* ``mass_ok``       -- the L1 norm of rho matches its initial value;
* ``c_l1_ok``       -- the attractant mass equals rho-mass / delta;
* ``c_l2_ok``       -- ||c||_2 <= ||rho||_2 / delta;
* ``cx_bound_ok``   -- ||c_x||_2^2 <= ||rho||_1^2 * pi/(2*sqrt(delta));
* ``positivity_ok`` -- min rho >= -tol * max rho.

Lp norms use the rectangle rule ((L/n) * sum |f|^p)^(1/p), which on a
periodic grid agrees with the spectral (Parseval) value of the L2 norm to
roundoff.  The gradient-bound constant pi/(2*sqrt(delta)) is the whole-line
integral of k^2/(k^2+delta)^2; on the periodic box the bound is conservative
for data that decays at the box edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .grid import RealField
from .operators import DispersalOperator, half_symbol


@dataclass(frozen=True)
class ToleranceSet:
    """Relative slacks for the invariant flags."""

    mass: float = 1e-10
    c_l1: float = 1e-10
    c_l2: float = 1e-10
    cx: float = 1e-8
    positivity: float = 1e-8


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One snapshot's norm set plus invariant pass/fail flags."""

    t: float
    l1_rho: float
    l2_rho: float
    l3_rho: float
    linf_rho: float
    min_rho: float
    frac_seminorm_rho: float
    l1_c: float
    l2_c: float
    linf_c: float
    l2_cx: float
    dt: float
    mass_drift_rel: float = 0.0
    mass_ok: bool = True
    c_l1_ok: bool = True
    c_l2_ok: bool = True
    cx_bound_ok: bool = True
    positivity_ok: bool = True

    CSV_FIELDS = (
        "t",
        "l1_rho",
        "l2_rho",
        "l3_rho",
        "linf_rho",
        "min_rho",
        "frac_seminorm_rho",
        "l1_c",
        "l2_c",
        "linf_c",
        "l2_cx",
        "dt",
        "mass_drift_rel",
        "mass_ok",
        "c_l1_ok",
        "c_l2_ok",
        "cx_bound_ok",
        "positivity_ok",
    )


def lp_norm(fld: RealField, p: float) -> float:
    """Rectangle-rule Lp norm, ((L/n) * sum |f|^p)^(1/p)."""
    return float((fld.grid.dx * np.abs(fld.values) ** p).sum() ** (1.0 / p))


def linf_norm(fld: RealField) -> float:
    return float(np.abs(fld.values).max())


def l2_norm_spectral(fld: RealField) -> float:
    """L2 norm from the Parseval sum, (L/n^2) * sum |fhat|^2."""
    grid = fld.grid
    fhat = np.fft.rfft(fld.values)
    # rfft halves the spectrum: double every bin except DC and Nyquist.
    weights = np.full(fhat.shape, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    total = (weights * np.abs(fhat) ** 2).sum()
    return float(np.sqrt(grid.length / grid.n**2 * total))


def frac_seminorm(fld: RealField, op: DispersalOperator) -> float:
    """Dissipation seminorm: the L2 norm of the half-power of the dispersal
    operator applied to the field, evaluated by a Parseval sum."""
    grid = fld.grid
    k = 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.dx)
    fhat = np.fft.rfft(fld.values)
    weights = np.full(fhat.shape, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    half = np.asarray(half_symbol(op, k))
    total = (weights * half**2 * np.abs(fhat) ** 2).sum()
    return float(np.sqrt(grid.length / grid.n**2 * total))


def gradient_l2(fld: RealField) -> float:
    """L2 norm of the spectral derivative of the field."""
    grid = fld.grid
    k = 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.dx)
    k = k.copy()
    k[-1] = 0.0  # Nyquist zeroed for the odd-order derivative
    fhat = np.fft.rfft(fld.values)
    weights = np.full(fhat.shape, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    total = (weights * (k * np.abs(fhat)) ** 2).sum()
    return float(np.sqrt(grid.length / grid.n**2 * total))


def cx_bound_constant(delta: float) -> float:
    """The whole-line integral of k^2/(k^2+delta)^2: equals pi/(2*sqrt(delta)).

    This is the constant in the attractant-gradient bound
    ||c_x||_2^2 <= ||rho||_1^2 * cx_bound_constant(delta).
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.pi / (2.0 * math.sqrt(delta))


def norms(
    rho: RealField,
    c: RealField,
    op: DispersalOperator | None = None,
    *,
    t: float = 0.0,
    dt: float = 0.0,
) -> DiagnosticsRecord:
    """Assemble the norm fields of a snapshot record (flags left at True)."""
    seminorm = frac_seminorm(rho, op) if op is not None else 0.0
    return DiagnosticsRecord(
        t=t,
        l1_rho=lp_norm(rho, 1),
        l2_rho=lp_norm(rho, 2),
        l3_rho=lp_norm(rho, 3),
        linf_rho=linf_norm(rho),
        min_rho=float(rho.values.min()),
        frac_seminorm_rho=seminorm,
        l1_c=lp_norm(c, 1),
        l2_c=lp_norm(c, 2),
        linf_c=linf_norm(c),
        l2_cx=gradient_l2(c),
        dt=dt,
    )


def check_invariants(
    record: DiagnosticsRecord,
    initial: DiagnosticsRecord,
    delta: float,
    tol: ToleranceSet = ToleranceSet(),
) -> DiagnosticsRecord:
    """Evaluate the five invariant flags of ``record`` against the run start.

    Returns a copy of the record with flags and relative mass drift filled in.
    """
    if initial.l1_rho > 0:
        drift = abs(record.l1_rho - initial.l1_rho) / initial.l1_rho
    else:
        drift = abs(record.l1_rho)
    c_l1_target = record.l1_rho / delta
    return replace(
        record,
        mass_drift_rel=drift,
        mass_ok=drift <= tol.mass,
        c_l1_ok=abs(record.l1_c - c_l1_target) <= tol.c_l1 * c_l1_target
        if c_l1_target > 0
        else record.l1_c <= tol.c_l1,
        c_l2_ok=record.l2_c <= record.l2_rho / delta * (1.0 + tol.c_l2),
        cx_bound_ok=record.l2_cx**2
        <= record.l1_rho**2 * cx_bound_constant(delta) * (1.0 + tol.cx),
        positivity_ok=record.min_rho >= -tol.positivity * record.linf_rho,
    )
