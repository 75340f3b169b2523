"""Uniform periodic grid, Fourier transforms, and spectral differentiation.

The whole-line problem is approximated by a periodic box of length L; initial
data is required to decay to ~1e-14 of its peak at the box edges so that the
periodic images do not interact.  Transform convention: ``forward`` is the
plain unnormalized DFT sum, ``backward`` divides by n.  Under this convention
Parseval reads

    (L/n) * sum_x f(x)^2 == (L/n^2) * sum_k |fhat(k)|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, L) with FFT-ordered wavenumbers.

    Parameters
    ----------
    n : int
        Number of points; must be even and >= 8.
    length : float
        Box size L > 0.

    Attributes
    ----------
    dx : float
        Spacing L/n.
    x : ndarray
        Sample locations 0, dx, ..., L - dx.
    wavenumbers : ndarray
        k_j = 2*pi*j_signed/L in standard FFT ordering
        (j_signed = 0, 1, ..., n/2-1, -n/2, ..., -1).
    """

    n: int
    length: float
    dx: float = field(init=False, compare=False, repr=False)
    x: np.ndarray = field(init=False, compare=False, repr=False)
    wavenumbers: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n % 2 != 0:
            raise ValueError(f"grid size n must be even, got {self.n}")
        if self.n < 8:
            raise ValueError(f"grid size n must be >= 8, got {self.n}")
        if not self.length > 0:
            raise ValueError(f"grid length must be positive, got {self.length}")
        dx = self.length / self.n
        x = dx * np.arange(self.n)
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=dx)
        for arr in (x, k):
            arr.setflags(write=False)
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "wavenumbers", k)

    @property
    def dealias_mask(self) -> np.ndarray:
        """Boolean mask keeping modes |j| <= n/3 (the 2/3 rule)."""
        j = np.rint(self.wavenumbers * self.length / (2.0 * np.pi)).astype(int)
        mask = np.abs(j) <= self.n // 3
        mask.setflags(write=False)
        return mask

    @property
    def nyquist_index(self) -> int:
        return self.n // 2


def make_grid(n: int, length: float) -> Grid:
    """Build a :class:`Grid`; rejects odd n, n < 8, and non-positive length."""
    return Grid(n=n, length=float(length))


@dataclass
class RealField:
    """A real-valued function sampled on a grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise ValueError(
                f"field has {self.values.shape} values for a grid of {self.grid.n} points"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must all be finite")

    def copy(self) -> "RealField":
        return RealField(self.values.copy(), self.grid)


@dataclass
class SpectralField:
    """Fourier coefficients of a field, in FFT ordering (n complex entries)."""

    coeffs: np.ndarray
    grid: Grid

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.grid.n,):
            raise ValueError(
                f"spectrum has {self.coeffs.shape} coefficients for a grid of {self.grid.n} points"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("spectral coefficients must all be finite")


def forward(fld: RealField) -> SpectralField:
    """Unnormalized forward DFT of a real field."""
    return SpectralField(np.fft.fft(fld.values), fld.grid)


def backward(spec: SpectralField) -> RealField:
    """Inverse DFT (divides by n); imaginary residue is discarded.

    The spectrum is expected to be conjugate-symmetric (i.e. to represent a
    real field); for such inputs the discarded imaginary part is roundoff.
    """
    return RealField(np.fft.ifft(spec.coeffs).real, spec.grid)


def spectral_derivative(spec: SpectralField, order: int) -> SpectralField:
    """Differentiate in spectral space: multiply by (i*k)^order.

    Odd orders zero the Nyquist mode, the only antisymmetric choice that keeps
    real fields real.  Only orders 1 and 2 are supported.
    """
    if order not in (1, 2):
        raise ValueError(f"derivative order must be 1 or 2, got {order}")
    k = spec.grid.wavenumbers
    if order == 1:
        mult = 1j * k.copy()
        mult[spec.grid.nyquist_index] = 0.0
    else:
        mult = -(k * k)
    return SpectralField(mult * spec.coeffs, spec.grid)
