import numpy as np
import pytest

import levytaxis as lt


class TestNondimensionalize:
    def test_identity_parameters(self):
        p = lt.PhysicalParams(d_rho=1, d_c=1, kappa=1, gamma=1, beta=1, alpha=2.0)
        with pytest.warns(UserWarning):  # tau = 1 exceeds the reduction regime
            nd = lt.nondimensionalize(p)
        assert nd.delta == pytest.approx(1.0)
        assert nd.tau == pytest.approx(1.0)
        assert nd.x_scale == pytest.approx(1.0)
        assert nd.t_scale == pytest.approx(1.0)
        assert nd.rho_scale == pytest.approx(1.0)

    def test_depletion_hand_value(self):
        # d_rho^(2/2)*beta/(d_c*kappa^(2/2)) = 2/4
        p = lt.PhysicalParams(d_rho=2, d_c=4, kappa=1, gamma=1, beta=1, alpha=2.0)
        with pytest.warns(UserWarning):
            nd = lt.nondimensionalize(p)
        assert nd.delta == pytest.approx(0.5, rel=1e-14)

    def test_space_scale_hand_value(self):
        p = lt.PhysicalParams(d_rho=1, d_c=1, kappa=4, gamma=1, beta=1, alpha=2.0)
        with pytest.warns(UserWarning):
            # tau = 1/4^0 ... = 0.25 > 0.1 triggers the reduction warning
            nd = lt.nondimensionalize(p)
        assert nd.x_scale == pytest.approx(0.5, rel=1e-14)
        assert nd.delta == pytest.approx(0.25, rel=1e-14)

    def test_delta_tau_kappa_consistency(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            d_rho, d_c, kappa, gamma, beta = np.exp(rng.uniform(-2, 2, 5))
            alpha = rng.uniform(1.01, 2.0)
            p = lt.PhysicalParams(d_rho, d_c, kappa, gamma, beta, alpha)
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                nd = lt.nondimensionalize(p)
            assert nd.delta == pytest.approx(nd.tau * beta / kappa, rel=1e-14)

    def test_classical_exponents(self):
        # alpha = 2 reduces every exponent 2/alpha to 1
        p = lt.PhysicalParams(d_rho=3.0, d_c=50.0, kappa=7.0, gamma=2.0, beta=5.0, alpha=2.0)
        nd = lt.nondimensionalize(p)
        assert nd.delta == pytest.approx(3.0 * 5.0 / (50.0 * 7.0), rel=1e-14)
        assert nd.tau == pytest.approx(3.0 / 50.0, rel=1e-14)
        assert nd.x_scale == pytest.approx(np.sqrt(3.0 / 7.0), rel=1e-14)
        assert nd.rho_scale == pytest.approx(2.0 * 3.0 / (50.0 * 7.0), rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            lt.PhysicalParams(d_rho=0, d_c=1, kappa=1, gamma=1, beta=1, alpha=1.5)
        with pytest.raises(ValueError):
            lt.PhysicalParams(d_rho=1, d_c=1, kappa=1, gamma=1, beta=1, alpha=0.9)


class TestDimensionalize:
    def test_roundtrip_identity(self):
        p = lt.PhysicalParams(d_rho=0.3, d_c=30.0, kappa=9.0, gamma=1.4, beta=2.2, alpha=1.6)
        nd = lt.nondimensionalize(p)
        rng = np.random.default_rng(3)
        rho = rng.uniform(0, 5, 128)
        x = np.linspace(0, 10, 128)
        fwd = lt.dimensionalize(nd, x=x, t=2.5, rho=rho)
        back = lt.adimensionalize(nd, x=fwd["x"], t=fwd["t"], rho=fwd["rho"])
        np.testing.assert_allclose(back["x"], x, rtol=1e-12)
        np.testing.assert_allclose(back["rho"], rho, rtol=1e-12)
        assert float(back["t"]) == pytest.approx(2.5, rel=1e-12)

    def test_pure_density_scaling(self):
        nd = lt.NondimParams(delta=1, tau=1, x_scale=1, t_scale=1, rho_scale=2.0)
        out = lt.dimensionalize(nd, rho=np.ones(4))
        np.testing.assert_allclose(out["rho"], 2.0)

    def test_pure_box_scaling(self):
        nd = lt.NondimParams(delta=1, tau=1, x_scale=0.5, t_scale=1, rho_scale=1.0)
        assert float(lt.dimensionalize(nd, x=100.0)["x"]) == pytest.approx(50.0)
