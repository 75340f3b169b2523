"""Fourier symbols of the dispersal operators and their application to fields.

Three dispersal mechanisms are supported, each diagonal in Fourier space:

* ``riesz``       -- Levy-flight dispersal, symbol -|k|^alpha, 1 < alpha <= 2;
* ``laplacian``   -- classical diffusion, symbol -k^2;
* ``mesenchymal`` -- the bounded nonlocal operator with symbol -k^2/(1+k^2).

alpha = 2 is admitted so the classical limit runs through the same code path;
the Riesz symbol then reproduces the Laplacian exactly.  All symbols are <= 0
with symbol(0) = 0, and the mesenchymal symbol is bounded below by -1 (the
operator is order zero, which is what removes the smoothing that prevents
aggregation from concentrating).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import Grid, RealField, backward, forward

RIESZ = "riesz"
LAPLACIAN = "laplacian"
MESENCHYMAL = "mesenchymal"

_KINDS = (RIESZ, LAPLACIAN, MESENCHYMAL)


@dataclass(frozen=True)
class DispersalOperator:
    """Tagged choice of dispersal symbol; ``alpha`` only for the Riesz kind."""

    kind: str
    alpha: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown dispersal operator kind {self.kind!r}")
        if self.kind == RIESZ:
            if self.alpha is None:
                raise ValueError("riesz operator requires an exponent alpha")
            if not 1.0 < self.alpha <= 2.0:
                raise ValueError(
                    f"riesz exponent must lie in (1, 2], got {self.alpha}"
                )
        elif self.alpha is not None:
            raise ValueError(f"operator {self.kind!r} takes no exponent")


def riesz(alpha: float) -> DispersalOperator:
    return DispersalOperator(RIESZ, float(alpha))


def laplacian() -> DispersalOperator:
    return DispersalOperator(LAPLACIAN)


def mesenchymal() -> DispersalOperator:
    return DispersalOperator(MESENCHYMAL)


def symbol(op: DispersalOperator, k):
    """Evaluate the operator's Fourier symbol at wavenumber(s) ``k``.

    Accepts a scalar or an ndarray; always returns values <= 0.
    """
    k = np.asarray(k, dtype=float)
    if op.kind == RIESZ:
        out = -np.abs(k) ** op.alpha
    elif op.kind == LAPLACIAN:
        out = -(k * k)
    else:
        k2 = k * k
        out = -k2 / (1.0 + k2)
    return out if out.ndim else float(out)


def half_symbol(op: DispersalOperator, k):
    """Square root of the dissipation: returns v <= 0 with v^2 = -symbol(k).

    Used only for the fractional seminorm diagnostics.
    """
    s = symbol(op, k)
    out = -np.sqrt(-np.asarray(s))
    return out if out.ndim else float(out)


@lru_cache(maxsize=128)
def symbol_table(op: DispersalOperator, grid: Grid) -> np.ndarray:
    """Symbol evaluated on the grid's full wavenumber set, cached immutably."""
    table = symbol(op, grid.wavenumbers)
    table.setflags(write=False)
    return table


def apply_dispersal(op: DispersalOperator, fld: RealField) -> RealField:
    """Apply the dispersal operator to a field via its Fourier multiplier."""
    spec = forward(fld)
    spec.coeffs *= symbol_table(op, fld.grid)
    return backward(spec)
