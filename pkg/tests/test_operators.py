import numpy as np
import pytest

import levytaxis as lt


class TestConstruction:
    def test_riesz_exponent_range(self):
        lt.riesz(1.0001)
        lt.riesz(2.0)
        for alpha in (1.0, 0.5, 2.1, 3.0):
            with pytest.raises(ValueError):
                lt.riesz(alpha)

    def test_alpha_only_for_riesz(self):
        with pytest.raises(ValueError):
            lt.DispersalOperator("laplacian", 1.5)
        with pytest.raises(ValueError):
            lt.DispersalOperator("riesz")
        with pytest.raises(ValueError):
            lt.DispersalOperator("heat")


class TestSymbol:
    def test_riesz_hand_value(self):
        # -2^1.5 = -2*sqrt(2)
        assert lt.symbol(lt.riesz(1.5), 2.0) == pytest.approx(
            -2.8284271247461903, rel=1e-15
        )

    def test_zero_mode_is_zero(self):
        for op in (lt.riesz(1.3), lt.laplacian(), lt.mesenchymal()):
            assert lt.symbol(op, 0.0) == 0.0

    def test_mesenchymal_hand_value(self):
        assert lt.symbol(lt.mesenchymal(), 1.0) == pytest.approx(-0.5, rel=1e-15)

    def test_riesz_alpha2_equals_laplacian(self):
        assert lt.symbol(lt.riesz(2.0), 3.0) == pytest.approx(-9.0, rel=1e-15)
        k = np.linspace(-40, 40, 401)
        np.testing.assert_allclose(
            lt.symbol(lt.riesz(2.0), k), lt.symbol(lt.laplacian(), k), rtol=1e-14
        )

    def test_nonpositive_everywhere(self, box_grid):
        for op in (lt.riesz(1.1), lt.riesz(1.9), lt.laplacian(), lt.mesenchymal()):
            assert (np.asarray(lt.symbol(op, box_grid.wavenumbers)) <= 0).all()

    def test_riesz_laplacian_comparison(self, box_grid):
        # |k|^alpha vs k^2 flips at |k| = 1 for alpha < 2
        k = box_grid.wavenumbers
        riesz_mag = -np.asarray(lt.symbol(lt.riesz(1.5), k))
        lap_mag = -np.asarray(lt.symbol(lt.laplacian(), k))
        outer = np.abs(k) >= 1
        inner = (np.abs(k) <= 1) & (np.abs(k) > 0)
        assert (riesz_mag[outer] <= lap_mag[outer]).all()
        assert (riesz_mag[inner] >= lap_mag[inner]).all()

    def test_mesenchymal_symbol_is_bounded(self, box_grid):
        mags = -np.asarray(lt.symbol(lt.mesenchymal(), box_grid.wavenumbers))
        assert (mags < 1.0).all()


class TestHalfSymbol:
    def test_square_recovers_symbol(self):
        v = lt.half_symbol(lt.riesz(1.5), 4.0)
        assert v < 0
        assert v * v == pytest.approx(8.0, rel=1e-14)

    def test_zero_mode(self):
        for op in (lt.riesz(1.7), lt.laplacian(), lt.mesenchymal()):
            assert lt.half_symbol(op, 0.0) == 0.0

    def test_alpha2_magnitude(self):
        assert abs(lt.half_symbol(lt.riesz(2.0), 2.0)) == pytest.approx(2.0, rel=1e-15)

    def test_vectorized_consistency(self, box_grid):
        k = box_grid.wavenumbers
        for op in (lt.riesz(1.4), lt.mesenchymal()):
            half = np.asarray(lt.half_symbol(op, k))
            np.testing.assert_allclose(
                half * half, -np.asarray(lt.symbol(op, k)), rtol=1e-13
            )


class TestApplyDispersal:
    def test_riesz_eigenfunction(self, unit_circle_grid):
        g = unit_circle_grid
        out = lt.apply_dispersal(lt.riesz(1.5), lt.RealField(np.cos(2 * g.x), g))
        expected = -(2.0**1.5) * np.cos(2 * g.x)
        assert np.abs(out.values - expected).max() <= 1e-12 * 2**1.5

    def test_constant_annihilated(self, unit_circle_grid):
        g = unit_circle_grid
        out = lt.apply_dispersal(lt.laplacian(), lt.RealField(np.full(g.n, 5.0), g))
        assert np.abs(out.values).max() <= 1e-12

    def test_mesenchymal_eigenfunction(self, unit_circle_grid):
        g = unit_circle_grid
        out = lt.apply_dispersal(lt.mesenchymal(), lt.RealField(np.cos(g.x), g))
        assert np.abs(out.values + 0.5 * np.cos(g.x)).max() <= 1e-12

    def test_every_single_harmonic(self, rng):
        g = lt.make_grid(32, 5.0)
        op = lt.riesz(1.8)
        for j in (1, 3, 7, 15):
            k_j = 2 * np.pi * j / g.length
            f = lt.RealField(np.cos(k_j * g.x), g)
            out = lt.apply_dispersal(op, f)
            expected = lt.symbol(op, k_j) * f.values
            assert np.abs(out.values - expected).max() <= 1e-12 * abs(
                lt.symbol(op, k_j)
            )

    def test_output_is_real_for_random_fields(self, box_grid, rng):
        from conftest import smooth_random_field

        f = smooth_random_field(box_grid, rng)
        out = lt.apply_dispersal(lt.riesz(1.5), f)
        assert np.isrealobj(out.values)
