"""Filter-design tests: gains against closed forms, reduction at zero
uncertainty, and combination-weight properties."""

import numpy as np
import pytest

import rpsmooth as rp

from conftest import OU, RES, integrate_riccati_to_steady_state

R_SQ = 0.6131671083747045  # converged noise power of the matched OU study


def ou_closed_forms(R_sq):
    lam, kappa, alpha_sq = OU["lambda_"], OU["kappa"], OU["alpha_sq"]
    alpha = np.sqrt(alpha_sq)
    root = np.sqrt(lam**2 + 4 * kappa * alpha_sq / R_sq)
    K_f = np.sqrt(R_sq) / (2 * alpha) * (-lam + root)
    K_b = np.sqrt(R_sq) / (2 * alpha) * (lam + root)
    return lam, kappa, alpha, root, K_f, K_b


class TestOptimalFilters:
    def test_forward_gain_closed_form(self, ou_model):
        C = rp.measurement_row(OU["alpha_sq"], R_SQ, 1)
        fwd, _ = rp.design_optimal_filters(ou_model, C)
        _, _, _, _, K_f, _ = ou_closed_forms(R_SQ)
        assert fwd.G_meas[0, 0] == pytest.approx(K_f, rel=1e-12)

    def test_backward_dynamics_coefficient(self, ou_model):
        # lam - 2|alpha|K_b/sqrt(R) simplifies to -sqrt(lam^2 + 4 kappa alpha^2/R)
        C = rp.measurement_row(OU["alpha_sq"], R_SQ, 1)
        _, bwd = rp.design_optimal_filters(ou_model, C)
        _, _, _, root, _, _ = ou_closed_forms(R_SQ)
        assert bwd.F[0, 0] == pytest.approx(-root, rel=1e-12)
        assert bwd.F[0, 0] < 0

    def test_resonant_forward_cov_against_ode_oracle(self, res_model):
        C = rp.measurement_row(RES["alpha_sq"], 0.5, 2)
        fwd, _ = rp.design_optimal_filters(res_model, C)
        P_ode = integrate_riccati_to_steady_state(res_model.A, res_model.B, C)
        assert np.allclose(fwd.P_or_XY, P_ode, rtol=1e-7)

    def test_all_dynamics_hurwitz(self, ou_model, res_model):
        for model, alpha_sq in ((ou_model, OU["alpha_sq"]), (res_model, RES["alpha_sq"])):
            C = rp.measurement_row(alpha_sq, 0.7, model.n)
            fwd, bwd = rp.design_optimal_filters(model, C)
            assert rp.is_hurwitz(fwd.F) and rp.is_hurwitz(bwd.F)


class TestOptimalSmootherCov:
    def test_ou_closed_form(self, ou_model):
        C = rp.measurement_row(OU["alpha_sq"], R_SQ, 1)
        fwd, bwd = rp.design_optimal_filters(ou_model, C)
        P_s = rp.optimal_smoother_cov(fwd.P_or_XY, bwd.P_or_XY)
        lam, kappa = OU["lambda_"], OU["kappa"]
        expected = kappa / (2 * np.sqrt(lam**2 + 4 * kappa * OU["alpha_sq"] / R_SQ))
        assert P_s[0, 0] == pytest.approx(expected, rel=1e-12)

    def test_equal_information_halving(self):
        rng = np.random.default_rng(3)
        G = rng.standard_normal((3, 3))
        P = G @ G.T + 3 * np.eye(3)
        assert np.allclose(rp.optimal_smoother_cov(P, P), P / 2, rtol=1e-12)

    def test_dominated_by_both(self, res_model):
        C = rp.measurement_row(RES["alpha_sq"], 0.8, 2)
        fwd, bwd = rp.design_optimal_filters(res_model, C)
        P_s = rp.optimal_smoother_cov(fwd.P_or_XY, bwd.P_or_XY)
        for P in (fwd.P_or_XY, bwd.P_or_XY):
            assert np.min(np.linalg.eigvalsh(P - P_s)) >= -1e-12 * np.linalg.norm(P)

    def test_singular_input(self):
        with pytest.raises(rp.SingularInput):
            rp.optimal_smoother_cov(np.zeros((2, 2)), np.eye(2))


class TestRobustFilters:
    def test_ou_riccati_pair_closed_form(self, ou_model):
        mu = 0.8
        unc = rp.uncertainty_for(ou_model, mu)
        C = rp.measurement_row(OU["alpha_sq"], R_SQ, 1)
        _, _, sm = rp.design_robust_filters(ou_model, unc, C)
        lam, kappa, alpha_sq = OU["lambda_"], OU["kappa"], OU["alpha_sq"]
        L = np.sqrt(lam**2 - mu**2 * lam**2 + 4 * alpha_sq * kappa / R_SQ)
        assert sm.X[0, 0] == pytest.approx((lam + L) / kappa, rel=1e-12)
        assert sm.Y[0, 0] == pytest.approx((-lam + L) / kappa, rel=1e-12)

    def test_ou_zero_mu_dynamics_reduction(self, ou_model):
        unc = rp.uncertainty_for(ou_model, 0.0)
        C = rp.measurement_row(OU["alpha_sq"], R_SQ, 1)
        rfwd, _, _ = rp.design_robust_filters(ou_model, unc, C)
        lam, kappa, alpha_sq = OU["lambda_"], OU["kappa"], OU["alpha_sq"]
        L0 = np.sqrt(lam**2 + 4 * alpha_sq * kappa / R_SQ)
        assert rfwd.F[0, 0] == pytest.approx(-L0, rel=1e-12)

    @pytest.mark.parametrize("model_name", ["ou", "resonant"])
    def test_zero_mu_reduces_to_kalman(self, model_name, ou_model, res_model):
        model = ou_model if model_name == "ou" else res_model
        alpha_sq = OU["alpha_sq"] if model_name == "ou" else RES["alpha_sq"]
        C = rp.measurement_row(alpha_sq, 0.55, model.n)
        unc = rp.uncertainty_for(model, 0.0)
        ofwd, obwd = rp.design_optimal_filters(model, C)
        rfwd, rbwd, _ = rp.design_robust_filters(model, unc, C)
        for a, b in ((rfwd, ofwd), (rbwd, obwd)):
            assert np.allclose(a.F, b.F, rtol=1e-9, atol=1e-9 * np.linalg.norm(b.F))
            assert np.allclose(a.G_meas, b.G_meas, rtol=1e-9, atol=1e-9 * np.linalg.norm(b.G_meas))

    def test_resonant_pair_residual(self, res_model):
        unc = rp.uncertainty_for(res_model, 0.8)
        C = rp.measurement_row(RES["alpha_sq"], 0.55, 2)
        _, _, sm = rp.design_robust_filters(res_model, unc, C)
        W = unc.B1 @ unc.B1.T
        M = unc.K.T @ unc.K - C.T @ C
        A = res_model.A
        assert np.linalg.norm(sm.X @ A + A.T @ sm.X + sm.X @ W @ sm.X + M) < 1e-10 * (
            1 + np.linalg.norm(A) + np.linalg.norm(sm.X) ** 2
        )
        for mat in (sm.X, sm.Y):
            assert np.min(np.linalg.eigvalsh(mat)) > 0

    def test_gain_deviation_grows_with_mu(self, ou_model):
        C = rp.measurement_row(OU["alpha_sq"], R_SQ, 1)
        ofwd, _ = rp.design_optimal_filters(ou_model, C)
        deviations = []
        for mu in np.arange(0.0, 0.95, 0.1):
            unc = rp.uncertainty_for(ou_model, mu)
            rfwd, _, _ = rp.design_robust_filters(ou_model, unc, C)
            deviations.append(abs(rfwd.G_meas[0, 0] - ofwd.G_meas[0, 0]))
        assert deviations[0] < 1e-9 * abs(ofwd.G_meas[0, 0])
        assert all(b > a for a, b in zip(deviations[1:], deviations[2:]))

    def test_all_dynamics_hurwitz(self, res_model):
        unc = rp.uncertainty_for(res_model, 0.8)
        C = rp.measurement_row(RES["alpha_sq"], 0.5, 2)
        rfwd, rbwd, _ = rp.design_robust_filters(res_model, unc, C)
        assert rp.is_hurwitz(rfwd.F) and rp.is_hurwitz(rbwd.F)

    def test_weight_spectra_in_unit_interval(self, res_model):
        unc = rp.uncertainty_for(res_model, 0.8)
        C = rp.measurement_row(RES["alpha_sq"], 0.5, 2)
        _, _, sm = rp.design_robust_filters(res_model, unc, C)
        assert np.allclose(sm.k1 + sm.k2, np.eye(2), atol=1e-12)
        eigs = np.linalg.eigvals(sm.k1)
        assert np.all(eigs.real >= -1e-12) and np.all(eigs.real <= 1 + 1e-12)
        assert np.all(np.abs(eigs.imag) < 1e-10)


class TestRobustCombine:
    def test_identity_on_agreement(self, res_model):
        unc = rp.uncertainty_for(res_model, 0.6)
        C = rp.measurement_row(RES["alpha_sq"], 0.5, 2)
        _, _, sm = rp.design_robust_filters(res_model, unc, C)
        v = np.array([0.3, -1.2])
        assert np.allclose(rp.robust_combine(sm.k1, sm.k2, v, v), v, rtol=1e-12)

    def test_scalar_arithmetic(self):
        out = rp.robust_combine(np.array([[0.75]]), np.array([[0.25]]), [0.0], [4.0])
        assert out[0] == pytest.approx(1.0)

    def test_matrix_case_matches_direct_evaluation(self, res_model):
        unc = rp.uncertainty_for(res_model, 0.8)
        C = rp.measurement_row(RES["alpha_sq"], 0.5, 2)
        _, _, sm = rp.design_robust_filters(res_model, unc, C)
        xf = np.array([0.1, -0.4])
        xb = np.array([-0.2, 0.9])
        expected = np.linalg.solve(sm.X + sm.Y, sm.X @ xf + sm.Y @ xb)
        assert np.allclose(rp.robust_combine(sm.k1, sm.k2, xf, xb), expected, rtol=1e-10)
