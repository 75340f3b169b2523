"""Chemoattractant solves: elliptic balance and relaxational (parabolic) mode.

In the elliptic reduction the attractant satisfies c_xx = delta*c - rho, i.e.
chat(k) = rhohat(k) / (k^2 + delta) mode by mode.  The parabolic mode keeps
the relaxation time tau and advances

    tau * dc/dt = c_xx + rho - delta*c

with the exact integrating factor exp(-(k^2+delta)*dt/tau) on the homogeneous
part and exact variation of constants on the source, with rho frozen over the
substep.  As dt -> infinity the parabolic update converges to the elliptic
solve, which is therefore its fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import RealField

ELLIPTIC = "elliptic"
PARABOLIC = "parabolic"


@dataclass(frozen=True)
class ChemoParams:
    """Depletion strength and attractant mode.

    ``delta`` is the dimensionless depletion rate (> 0); ``tau`` is the
    relaxation coefficient of the parabolic mode and must be > 0 there.
    """

    delta: float
    mode: str = ELLIPTIC
    tau: float | None = None

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.mode not in (ELLIPTIC, PARABOLIC):
            raise ValueError(f"unknown chemo mode {self.mode!r}")
        if self.mode == PARABOLIC:
            if self.tau is None or not self.tau > 0:
                raise ValueError(
                    f"parabolic mode requires a positive tau, got {self.tau}"
                )
        elif self.tau is not None:
            raise ValueError("tau is only meaningful in parabolic mode")


def _elliptic_hat(rho_hat: np.ndarray, k: np.ndarray, delta: float) -> np.ndarray:
    return rho_hat / (k * k + delta)


def solve_elliptic(rho: RealField, delta: float) -> RealField:
    """Solve c_xx = delta*c - rho spectrally; exact on every retained mode.

    The denominator k^2 + delta is bounded away from zero for delta > 0, so no
    regularization is needed; delta <= 0 is rejected.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    k = 2.0 * np.pi * np.fft.rfftfreq(rho.grid.n, d=rho.grid.dx)
    c_hat = _elliptic_hat(np.fft.rfft(rho.values), k, delta)
    return RealField(np.fft.irfft(c_hat, n=rho.grid.n), rho.grid)


def step_parabolic_c(
    c: RealField, rho: RealField, params: ChemoParams, dt: float
) -> RealField:
    """Advance the attractant by one relaxation substep with rho frozen."""
    if params.mode != PARABOLIC:
        raise ValueError("step_parabolic_c requires parabolic chemo parameters")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if c.grid is not rho.grid and c.grid != rho.grid:
        raise ValueError("c and rho must live on the same grid")
    grid = rho.grid
    k = 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.dx)
    lam = k * k + params.delta
    decay = np.exp(-lam * dt / params.tau)
    c_hat = np.fft.rfft(c.values)
    equil = _elliptic_hat(np.fft.rfft(rho.values), k, params.delta)
    new_hat = decay * c_hat + (1.0 - decay) * equil
    return RealField(np.fft.irfft(new_hat, n=grid.n), grid)
