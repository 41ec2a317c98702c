"""Model-construction, uncertainty, and squeezing-arithmetic tests."""

import math

import numpy as np
import pytest

import rpsmooth as rp

from conftest import OU, RES


class TestBuildProcess:
    def test_ou_matrices(self):
        m = rp.build_process("ou", lambda_=OU["lambda_"], kappa=OU["kappa"])
        assert m.n == 1 and m.kind == "ou"
        assert m.A[0, 0] == -OU["lambda_"]
        assert m.B[0, 0] == pytest.approx(math.sqrt(OU["kappa"]))

    def test_resonant_matrices(self):
        m = rp.build_process("resonant", kappa=RES["kappa"], zeta=RES["zeta"], omega_r=RES["omega_r"])
        assert m.n == 2 and m.kind == "resonant"
        assert np.allclose(m.A, [[0.0, 1.0], [-RES["omega_r"] ** 2, -2 * RES["zeta"] * RES["omega_r"]]])
        assert np.allclose(m.A[1, 0], -3.9476089e7, rtol=1e-8)
        assert np.allclose(m.A[1, 1], -1.2566e3, rtol=1e-8)
        assert np.allclose(m.B, [[0.0], [RES["kappa"]]])

    def test_critically_damped(self):
        m = rp.resonant_process(kappa=1.0, zeta=1.0, omega_r=1.0)
        assert np.allclose(m.A, [[0.0, 1.0], [-1.0, -2.0]])

    def test_invalid_params(self):
        with pytest.raises(rp.InvalidParam):
            rp.ou_process(-1.0, 1.0)
        with pytest.raises(rp.InvalidParam):
            rp.resonant_process(1.0, 0.0, 1.0)
        with pytest.raises(rp.InvalidParam):
            rp.build_process("white", kappa=1.0)


class TestUncertainty:
    def test_ou_structure(self, ou_model):
        u = rp.uncertainty_for(ou_model, 0.8)
        lam, kappa = OU["lambda_"], OU["kappa"]
        assert u.K[0, 0] == pytest.approx(0.8 * lam / math.sqrt(kappa))
        assert np.allclose(u.B1, ou_model.B)

    def test_resonant_structure(self, res_model):
        u = rp.uncertainty_for(res_model, 0.8)
        assert u.K[0, 0] == pytest.approx(-0.8 * RES["omega_r"] ** 2 / RES["kappa"])
        assert u.K[0, 1] == 0.0

    def test_ou_apply(self, ou_model):
        u = rp.uncertainty_for(ou_model, 0.8)
        A_true = rp.apply_uncertainty(ou_model, u, 1.0)
        assert A_true[0, 0] == pytest.approx(-0.2 * OU["lambda_"], rel=1e-12)

    def test_resonant_apply_matches_outer_product(self, res_model):
        u = rp.uncertainty_for(res_model, 0.8)
        delta = -1.0
        A_true = rp.apply_uncertainty(res_model, u, delta)
        expected = res_model.A + u.B1 * delta @ u.K
        assert np.allclose(A_true, expected)
        # only the (2,1) entry moves, by -mu*delta*omega_r^2
        diff = A_true - res_model.A
        assert diff[1, 0] == pytest.approx(-0.8 * delta * RES["omega_r"] ** 2, rel=1e-12)
        diff[1, 0] = 0.0
        assert np.allclose(diff, 0.0)

    def test_zero_delta_is_identity(self, ou_model, res_model):
        for m in (ou_model, res_model):
            u = rp.uncertainty_for(m, 0.7)
            assert np.array_equal(rp.apply_uncertainty(m, u, 0.0), m.A)

    def test_perturbation_rank_one(self, res_model):
        u = rp.uncertainty_for(res_model, 0.5)
        diff = rp.apply_uncertainty(res_model, u, 0.37) - res_model.A
        assert np.linalg.matrix_rank(diff, tol=1e-12) <= 1

    def test_delta_out_of_range(self, ou_model):
        u = rp.uncertainty_for(ou_model, 0.5)
        with pytest.raises(rp.DeltaOutOfRange):
            rp.apply_uncertainty(ou_model, u, 1.5)

    def test_mu_range(self, ou_model):
        with pytest.raises(rp.InvalidParam):
            rp.uncertainty_for(ou_model, 1.0)


class TestSqueezing:
    def test_lossless_identity(self):
        r_m, r_p = rp.effective_squeezing(0.9, 0.0)
        assert r_m == pytest.approx(0.9) and r_p == pytest.approx(0.9)

    def test_vacuum_is_loss_invariant(self):
        r_m, r_p = rp.effective_squeezing(0.0, 0.33)
        assert r_m == pytest.approx(0.0, abs=1e-15)
        assert r_p == pytest.approx(0.0, abs=1e-15)

    def test_standard_lossy_pair(self):
        # the measured pair behind the mean-reverting study
        r_m, r_p = rp.effective_squeezing(0.737, 0.33)
        assert abs(r_m - 0.36) < 0.02
        assert abs(r_p - 0.59) < 0.02

    def test_squeezed_floor(self):
        # the squeezed quadrature can never drop below the loss floor
        for r in np.linspace(0.0, 3.0, 13):
            for loss in (0.1, 0.33, 0.7):
                r_m, r_p = rp.effective_squeezing(r, loss)
                assert math.exp(-2 * r_m) >= loss
                assert r_p >= r_m

    def test_monotone_in_r(self):
        rs = np.linspace(0.0, 2.5, 11)
        pairs = [rp.effective_squeezing(r, 0.33) for r in rs]
        rps = [p for _, p in pairs]
        assert all(b > a for a, b in zip(rps, rps[1:]))

    def test_R_sq_endpoints(self):
        assert rp.compute_R_sq(0.0, 0.36, 0.59) == pytest.approx(math.exp(-0.72))
        assert rp.compute_R_sq(1.0, 0.36, 0.59) == pytest.approx(math.exp(1.18))

    def test_R_sq_coherent(self):
        for s in (0.0, 0.3, 1.0):
            assert rp.compute_R_sq(s, 0.0, 0.0) == pytest.approx(1.0)

    def test_R_sq_monotone(self):
        vals = [rp.compute_R_sq(s, 0.36, 0.59) for s in np.linspace(0, 1, 17)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_R_sq_out_of_range(self):
        with pytest.raises(rp.SigmaOutOfRange):
            rp.compute_R_sq(1.2, 0.36, 0.59)

    def test_config_invariants(self):
        with pytest.raises(rp.InvalidParam):
            rp.SqueezingConfig(alpha_sq=1e6, r_m=0.5, r_p=0.3)
        cfg = rp.SqueezingConfig.from_pure(1e6, 0.7, 0.0)
        assert cfg.r_m == cfg.r_p == pytest.approx(0.7)


class TestMeasurementRow:
    def test_direct_values(self):
        assert rp.measurement_row(1e6, 1.0, 1)[0, 0] == pytest.approx(2000.0)
        row = rp.measurement_row(25e4, 1.0, 2)
        assert row[0, 0] == pytest.approx(1000.0)
        assert row[0, 1] == 0.0

    def test_inverse_sqrt_scaling(self):
        a = rp.measurement_row(1e6, 0.5, 1)[0, 0]
        b = rp.measurement_row(1e6, 1.0, 1)[0, 0]
        assert a == pytest.approx(b * math.sqrt(2.0))


class TestSqueezingDb:
    def test_vacuum(self):
        assert rp.squeezing_db(0.0) == 0.0

    def test_minus_ten_db(self):
        r_m = -0.5 * math.log(0.1)
        assert rp.squeezing_db(r_m) == pytest.approx(-10.0)

    def test_deep_squeezing_level(self):
        assert rp.squeezing_db(1.485) == pytest.approx(-12.9, abs=0.01)
