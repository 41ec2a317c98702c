"""Shared fixtures and independent integration oracles.

The oracles deliberately avoid the package's algebraic solvers: steady states
are obtained by forward-integrating the matrix differential equations with a
stiff ODE solver until the derivative norm is negligible.
"""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

import rpsmooth as rp

OU = {"lambda_": 5.9e4, "kappa": 1.9e4, "alpha_sq": 1e6, "r_m": 0.36, "r_p": 0.59}
RES = {"kappa": 9e4, "zeta": 0.1, "omega_r": 6.283e3, "alpha_sq": 25e4, "r_m": 0.48, "r_p": 1.11}


@pytest.fixture(scope="session")
def ou_model():
    return rp.ou_process(OU["lambda_"], OU["kappa"])


@pytest.fixture(scope="session")
def ou_squeezing():
    return rp.SqueezingConfig.from_effective(OU["alpha_sq"], OU["r_m"], OU["r_p"])


@pytest.fixture(scope="session")
def res_model():
    return rp.resonant_process(RES["kappa"], RES["zeta"], RES["omega_r"])


@pytest.fixture(scope="session")
def res_squeezing():
    return rp.SqueezingConfig.from_effective(RES["alpha_sq"], RES["r_m"], RES["r_p"])


def integrate_riccati_to_steady_state(A, B, C, N=None, R=None, dpdt_tol=1e-12):
    """Forward-integrate dP/dt = AP + PA' - PC'R^-1CP + BNB' from P(0)=0."""
    A = np.atleast_2d(np.asarray(A, float))
    B = np.atleast_2d(np.asarray(B, float))
    C = np.atleast_2d(np.asarray(C, float))
    n = A.shape[0]
    N = np.eye(B.shape[1]) if N is None else np.atleast_2d(N)
    R = np.eye(C.shape[0]) if R is None else np.atleast_2d(R)
    Rinv = np.linalg.inv(R)
    Q = B @ N @ B.T

    def rhs(_, y):
        P = y.reshape(n, n)
        dP = A @ P + P @ A.T - P @ C.T @ Rinv @ C @ P + Q
        return dP.ravel()

    # window length from the slowest open-loop scale
    rates = np.abs(np.linalg.eigvals(A).real)
    window = 20.0 / max(rates.min(), 1e-12)
    y = np.zeros(n * n)
    scale = max(np.linalg.norm(Q), 1.0)
    for _ in range(200):
        sol = solve_ivp(rhs, (0.0, window), y, method="LSODA", rtol=1e-12, atol=1e-14 * scale)
        y = sol.y[:, -1]
        if np.linalg.norm(rhs(0.0, y)) < dpdt_tol * scale:
            break
    return y.reshape(n, n)


def integrate_lyapunov_to_steady_state(A, Q, dcdt_tol=1e-12):
    """Forward-integrate dX/dt = AX + XA' + Q from X(0)=0 to stationarity."""
    A = np.atleast_2d(np.asarray(A, float))
    Q = np.atleast_2d(np.asarray(Q, float))
    n = A.shape[0]

    def rhs(_, y):
        X = y.reshape(n, n)
        return (A @ X + X @ A.T + Q).ravel()

    rates = np.abs(np.linalg.eigvals(A).real)
    window = 20.0 / max(rates.min(), 1e-12)
    y = np.zeros(n * n)
    scale = max(np.linalg.norm(Q), 1.0)
    for _ in range(200):
        sol = solve_ivp(rhs, (0.0, window), y, method="LSODA", rtol=1e-12, atol=1e-14 * scale)
        y = sol.y[:, -1]
        if np.linalg.norm(rhs(0.0, y)) < dcdt_tol * scale:
            break
    return y.reshape(n, n)
