import numpy as np
import pytest

import levytaxis as lt
from conftest import smooth_random_field


class TestMakeGrid:
    def test_fft_ordering_n8(self):
        g = lt.make_grid(8, 2 * np.pi)
        assert np.allclose(g.wavenumbers, [0, 1, 2, 3, -4, -3, -2, -1])
        assert g.dx == pytest.approx(np.pi / 4)

    def test_rejects_small_or_odd_n(self):
        with pytest.raises(ValueError):
            lt.make_grid(4, 2 * np.pi)
        with pytest.raises(ValueError):
            lt.make_grid(10 + 1, 2 * np.pi)
        with pytest.raises(ValueError):
            lt.make_grid(16, 0.0)
        with pytest.raises(ValueError):
            lt.make_grid(16, -1.0)

    def test_fundamental_wavenumber(self):
        # 2*pi*1/100 evaluated by hand
        g = lt.make_grid(16, 100.0)
        assert g.wavenumbers[1] == pytest.approx(0.06283185307179587, rel=1e-15)

    def test_wavenumber_symmetry(self):
        g = lt.make_grid(32, 7.5)
        assert g.wavenumbers[0] == 0.0
        for j in range(1, 16):
            assert g.wavenumbers[j] == -g.wavenumbers[32 - j]
        assert g.dx * g.n == g.length

    def test_field_shape_validation(self):
        g = lt.make_grid(16, 1.0)
        with pytest.raises(ValueError):
            lt.RealField(np.zeros(8), g)
        with pytest.raises(ValueError):
            lt.RealField(np.full(16, np.nan), g)


class TestTransforms:
    def test_roundtrip_identity(self, unit_circle_grid, rng):
        f = smooth_random_field(unit_circle_grid, rng)
        back = lt.backward(lt.forward(f))
        scale = np.abs(f.values).max()
        assert np.abs(back.values - f.values).max() <= 1e-12 * scale

    def test_constant_is_pure_dc(self, unit_circle_grid):
        f = lt.RealField(np.ones(unit_circle_grid.n), unit_circle_grid)
        spec = lt.forward(f)
        assert spec.coeffs[0] == pytest.approx(unit_circle_grid.n)
        assert np.abs(spec.coeffs[1:]).max() < 1e-12

    def test_cosine_occupies_conjugate_pair(self, unit_circle_grid):
        g = unit_circle_grid
        spec = lt.forward(lt.RealField(np.cos(g.x), g))
        mags = np.abs(spec.coeffs)
        assert mags[1] == pytest.approx(g.n / 2)
        assert mags[g.n - 1] == pytest.approx(g.n / 2)
        mags[1] = mags[g.n - 1] = 0.0
        assert mags.max() < 1e-10

    def test_forward_conjugate_symmetry(self, box_grid, rng):
        f = smooth_random_field(box_grid, rng)
        spec = lt.forward(f).coeffs
        for j in (1, 5, 17, box_grid.n // 2 - 1):
            assert spec[j] == pytest.approx(np.conj(spec[box_grid.n - j]))

    def test_parseval(self, box_grid, rng):
        f = smooth_random_field(box_grid, rng, amplitude=3.3)
        g = box_grid
        physical = g.length / g.n * (f.values**2).sum()
        spectral = g.length / g.n**2 * (np.abs(lt.forward(f).coeffs) ** 2).sum()
        assert physical == pytest.approx(spectral, rel=1e-12)


class TestSpectralDerivative:
    def test_cosine_derivative(self, unit_circle_grid):
        g = unit_circle_grid
        d = lt.backward(lt.spectral_derivative(lt.forward(lt.RealField(np.cos(g.x), g)), 1))
        assert np.abs(d.values + np.sin(g.x)).max() <= 1e-12

    def test_constant_derivative_exactly_zero(self, unit_circle_grid):
        g = unit_circle_grid
        d = lt.spectral_derivative(lt.forward(lt.RealField(np.full(g.n, 4.2), g)), 1)
        assert np.abs(d.coeffs).max() == 0.0

    def test_second_derivative_of_harmonic(self, unit_circle_grid):
        g = unit_circle_grid
        d2 = lt.backward(
            lt.spectral_derivative(lt.forward(lt.RealField(np.sin(3 * g.x), g)), 2)
        )
        assert np.abs(d2.values + 9 * np.sin(3 * g.x)).max() <= 1e-12

    def test_order_validation(self, unit_circle_grid):
        spec = lt.forward(lt.RealField(np.zeros(unit_circle_grid.n), unit_circle_grid))
        for order in (0, 3, -1):
            with pytest.raises(ValueError):
                lt.spectral_derivative(spec, order)

    def test_derivative_of_real_field_is_real(self, box_grid, rng):
        f = smooth_random_field(box_grid, rng)
        d = lt.spectral_derivative(lt.forward(f), 1)
        imag = np.abs(np.fft.ifft(d.coeffs).imag).max()
        assert imag <= 1e-12 * np.abs(f.values).max()

    def test_twice_first_order_matches_second_order(self, box_grid, rng):
        # Band-limited field has no Nyquist energy, so the Nyquist zeroing
        # of odd orders cannot be seen.
        f = smooth_random_field(box_grid, rng)
        spec = lt.forward(f)
        twice = lt.spectral_derivative(lt.spectral_derivative(spec, 1), 1)
        second = lt.spectral_derivative(spec, 2)
        scale = np.abs(second.coeffs).max()
        assert np.abs(twice.coeffs - second.coeffs).max() <= 1e-12 * scale
