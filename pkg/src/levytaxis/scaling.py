"""Map physical model parameters to the nondimensional system and back.

The dimensional model has five rate constants (cell diffusivity d_rho,
chemical diffusivity d_c, chemotactic coefficient kappa, attractant production
gamma and depletion beta) plus the dispersal exponent alpha.  Rescaling space
by x_scale = (d_rho/kappa)^(1/alpha), time by 1/kappa and density by
gamma*d_rho^(2/alpha) / (d_c*kappa^(2/alpha)) removes all of them except two
dimensionless groups:

    delta = d_rho^(2/alpha) * beta / (d_c * kappa^(2/alpha))
    tau   = d_rho^(2/alpha) / (d_c * kappa^(2/alpha - 1))

The attractant concentration itself is not rescaled.  ``delta`` is the
depletion parameter of the elliptic reduction; ``tau`` multiplies dc/dt and
the reduction is accurate when it is small (fast chemical relaxation).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

# Above this relaxation coefficient the elliptic reduction is dubious; the
# simulator warns but never refuses, since the parabolic mode exists exactly
# to probe that regime.
TAU_WARN_THRESHOLD = 0.1


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional rate constants of the full chemotaxis model."""

    d_rho: float
    d_c: float
    kappa: float
    gamma: float
    beta: float
    alpha: float

    def __post_init__(self) -> None:
        for name in ("d_rho", "d_c", "kappa", "gamma", "beta"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not 1.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must lie in (1, 2], got {self.alpha}")


@dataclass(frozen=True)
class NondimParams:
    """Nondimensional groups plus the three unit scales that produced them."""

    delta: float
    tau: float
    x_scale: float
    t_scale: float
    rho_scale: float

    def __post_init__(self) -> None:
        for name in ("delta", "tau", "x_scale", "t_scale", "rho_scale"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")


def nondimensionalize(p: PhysicalParams) -> NondimParams:
    """Compute the unit scales and dimensionless groups from physical rates."""
    e = 2.0 / p.alpha
    x_scale = (p.d_rho / p.kappa) ** (1.0 / p.alpha)
    t_scale = 1.0 / p.kappa
    rho_scale = p.gamma * p.d_rho**e / (p.d_c * p.kappa**e)
    tau = p.d_rho**e / (p.d_c * p.kappa ** (e - 1.0))
    delta = p.d_rho**e * p.beta / (p.d_c * p.kappa**e)
    nd = NondimParams(
        delta=delta, tau=tau, x_scale=x_scale, t_scale=t_scale, rho_scale=rho_scale
    )
    if tau > TAU_WARN_THRESHOLD:
        warnings.warn(
            f"relaxation coefficient tau = {tau:.3g} is not small; the elliptic "
            "reduction may be inaccurate (consider the parabolic chemo mode)",
            stacklevel=2,
        )
    return nd


def dimensionalize(
    nd: NondimParams,
    *,
    x: np.ndarray | float | None = None,
    t: np.ndarray | float | None = None,
    rho: np.ndarray | float | None = None,
) -> dict:
    """Map nondimensional coordinates/fields back to physical units.

    Returns a dict holding the scaled copies of whichever of ``x``, ``t`` and
    ``rho`` were given.  The attractant carries no scale factor and passes
    through any pipeline unchanged; it is therefore not an argument here.
    """
    out: dict = {}
    if x is not None:
        out["x"] = np.asarray(x, dtype=float) * nd.x_scale
    if t is not None:
        out["t"] = np.asarray(t, dtype=float) * nd.t_scale
    if rho is not None:
        out["rho"] = np.asarray(rho, dtype=float) * nd.rho_scale
    return out


def adimensionalize(
    nd: NondimParams,
    *,
    x: np.ndarray | float | None = None,
    t: np.ndarray | float | None = None,
    rho: np.ndarray | float | None = None,
) -> dict:
    """Inverse of :func:`dimensionalize` (physical -> nondimensional)."""
    out: dict = {}
    if x is not None:
        out["x"] = np.asarray(x, dtype=float) / nd.x_scale
    if t is not None:
        out["t"] = np.asarray(t, dtype=float) / nd.t_scale
    if rho is not None:
        out["rho"] = np.asarray(rho, dtype=float) / nd.rho_scale
    return out
