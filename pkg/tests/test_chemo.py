import numpy as np
import pytest

import levytaxis as lt


class TestParams:
    def test_validation(self):
        lt.ChemoParams(delta=1.0)
        lt.ChemoParams(delta=0.5, mode="parabolic", tau=0.01)
        with pytest.raises(ValueError):
            lt.ChemoParams(delta=0.0)
        with pytest.raises(ValueError):
            lt.ChemoParams(delta=-1.0)
        with pytest.raises(ValueError):
            lt.ChemoParams(delta=1.0, mode="parabolic")
        with pytest.raises(ValueError):
            lt.ChemoParams(delta=1.0, mode="parabolic", tau=0.0)
        with pytest.raises(ValueError):
            lt.ChemoParams(delta=1.0, tau=0.5)


class TestSolveElliptic:
    def test_single_mode(self, unit_circle_grid):
        g = unit_circle_grid
        c = lt.solve_elliptic(lt.RealField(np.cos(g.x), g), 1.0)
        assert np.abs(c.values - np.cos(g.x) / 2).max() <= 1e-13

    def test_constant(self, unit_circle_grid):
        g = unit_circle_grid
        c = lt.solve_elliptic(lt.RealField(np.full(g.n, 3.0), g), 2.0)
        assert np.abs(c.values - 1.5).max() <= 1e-13

    def test_attractant_mass_identity(self, box_grid):
        # integral of c equals mass / delta
        rho = lt.build(lt.GaussianBump(mass=7.0, width=1.0), box_grid)
        c = lt.solve_elliptic(rho, 1.0)
        got = box_grid.dx * c.values.sum()
        assert got == pytest.approx(7.0, rel=1e-10)

    def test_rejects_bad_delta(self, unit_circle_grid):
        rho = lt.RealField(np.zeros(unit_circle_grid.n), unit_circle_grid)
        with pytest.raises(ValueError):
            lt.solve_elliptic(rho, 0.0)

    def test_l1_identity_and_l2_bound(self, box_grid):
        for delta in (0.25, 1.0, 4.0):
            rho = lt.build(lt.GaussianBump(mass=10.0, width=2.0), box_grid)
            c = lt.solve_elliptic(rho, delta)
            l1_c = lt.lp_norm(c, 1)
            l1_rho = lt.lp_norm(rho, 1)
            assert abs(l1_c - l1_rho / delta) <= 1e-10 * l1_rho / delta
            assert lt.lp_norm(c, 2) <= lt.lp_norm(rho, 2) / delta * (1 + 1e-12)

    def test_gradient_bound(self, box_grid):
        rho = lt.build(lt.GaussianBump(mass=5.0, width=1.5), box_grid)
        for delta in (0.25, 1.0, 16.0):
            c = lt.solve_elliptic(rho, delta)
            lhs = lt.diagnostics.gradient_l2(c) ** 2
            rhs = lt.lp_norm(rho, 1) ** 2 * lt.cx_bound_constant(delta)
            assert lhs <= rhs * (1 + 1e-8)

    def test_maximum_principle_smoke(self, box_grid):
        rho = lt.build(lt.GaussianBump(mass=100.0, width=1.0), box_grid)
        c = lt.solve_elliptic(rho, 1.0)
        assert c.values.min() >= -1e-10 * c.values.max()


class TestParabolicStep:
    def test_elliptic_solution_is_fixed_point(self, box_grid):
        params = lt.ChemoParams(delta=1.0, mode="parabolic", tau=0.3)
        rho = lt.build(lt.GaussianBump(mass=5.0, width=2.0), box_grid)
        c = lt.solve_elliptic(rho, 1.0)
        for dt in (1e-3, 0.7, 50.0):
            out = lt.step_parabolic_c(c, rho, params, dt)
            assert np.abs(out.values - c.values).max() <= 1e-12 * c.values.max()

    def test_zero_mode_relaxation(self, unit_circle_grid):
        # solution of tau*y' = rho0 - delta*y from y(0)=0: y = rho0*(1-exp(-t))
        g = unit_circle_grid
        params = lt.ChemoParams(delta=1.0, mode="parabolic", tau=1.0)
        rho0 = 2.5
        rho = lt.RealField(np.full(g.n, rho0), g)
        c = lt.RealField(np.zeros(g.n), g)
        for dt in (0.1, 1.0, 3.0):
            out = lt.step_parabolic_c(c, rho, params, dt)
            expected = rho0 * (1.0 - np.exp(-dt))
            assert np.abs(out.values - expected).max() <= 1e-13 * rho0

    def test_single_mode_decay(self, unit_circle_grid):
        # zero source: cos mode decays by exp(-(k^2+delta)*dt/tau) = exp(-1)
        g = unit_circle_grid
        params = lt.ChemoParams(delta=1.0, mode="parabolic", tau=1.0)
        rho = lt.RealField(np.zeros(g.n), g)
        c = lt.RealField(np.cos(g.x), g)
        out = lt.step_parabolic_c(c, rho, params, 0.5)
        expected = np.cos(g.x) * np.exp(-1.0)
        assert np.abs(out.values - expected).max() <= 1e-14

    def test_limit_is_elliptic_solve(self, box_grid):
        params = lt.ChemoParams(delta=2.0, mode="parabolic", tau=0.05)
        rho = lt.build(lt.GaussianBump(mass=3.0, width=2.0), box_grid)
        c = lt.RealField(np.zeros(box_grid.n), box_grid)
        out = lt.step_parabolic_c(c, rho, params, 1e6)
        target = lt.solve_elliptic(rho, 2.0)
        assert np.abs(out.values - target.values).max() <= 1e-12 * target.values.max()

    def test_mode_guard(self, unit_circle_grid):
        g = unit_circle_grid
        rho = lt.RealField(np.zeros(g.n), g)
        c = lt.RealField(np.zeros(g.n), g)
        with pytest.raises(ValueError):
            lt.step_parabolic_c(c, rho, lt.ChemoParams(delta=1.0), 0.1)
