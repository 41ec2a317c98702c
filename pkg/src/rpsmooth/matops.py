"""Dense real-matrix equation solvers for small state-space problems.

Provides the continuous algebraic Riccati solvers used by the filter designs
(with explicit selection of the stabilizing or anti-stabilizing branch) and a
steady-state Lyapunov solver. Everything is dense and direct; systems are a
few states at most.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import schur, solve_continuous_lyapunov

from .errors import IllConditioned, NoAdmissibleSolution, NoStabilizingSolution, NotHurwitz

__all__ = [
    "as_matrix",
    "is_hurwitz",
    "solve_filter_are",
    "solve_robust_are",
    "solve_lyapunov",
]

MAX_DIM = 8


def as_matrix(a, rows: int | None = None, cols: int | None = None, name: str = "matrix") -> np.ndarray:
    """Coerce scalar/array input to a validated 2-D float array.

    Rejects non-finite entries and (optionally) enforces an exact shape.
    """
    m = np.atleast_2d(np.asarray(a, dtype=float))
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    if rows is not None and m.shape[0] != rows:
        raise ValueError(f"{name} must have {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise ValueError(f"{name} must have {cols} columns, got {m.shape[1]}")
    if max(m.shape) > MAX_DIM:
        raise ValueError(f"{name} exceeds the supported dimension cap {MAX_DIM}")
    return m


def is_hurwitz(a: np.ndarray) -> bool:
    """True if every eigenvalue of ``a`` has strictly negative real part."""
    return bool(np.all(np.linalg.eigvals(np.atleast_2d(a)).real < 0.0))


def _symmetrize(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x + x.T)


def _are_residual(x: np.ndarray, a: np.ndarray, w: np.ndarray, m: np.ndarray) -> float:
    return float(np.linalg.norm(x @ a + a.T @ x + x @ w @ x + m))


def _newton_step(x: np.ndarray, a: np.ndarray, w: np.ndarray, m: np.ndarray) -> np.ndarray:
    # One Newton correction: solve d (a+wx) + (a+wx)' d = -residual.
    # Opportunistic polish only; the caller keeps it solely when the residual
    # improves, so a near-singular Sylvester step may be silently discarded.
    acl = a + w @ x
    res = x @ a + a.T @ x + x @ w @ x + m
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            d = solve_continuous_lyapunov(acl.T, -res)
    except Exception:
        return x
    if not np.all(np.isfinite(d)):
        return x
    return _symmetrize(x + d)


def _solve_quadratic_are(a: np.ndarray, w: np.ndarray, m: np.ndarray, stable: bool) -> np.ndarray:
    """Solve X a + a' X + X w X + m = 0 by Hamiltonian invariant subspace.

    The returned symmetric X puts the eigenvalues of (a + w X) in the open
    left half plane when ``stable`` is true and in the open right half plane
    otherwise. Raises NoStabilizingSolution when the spectrum cannot be split
    that way (eigenvalues on the imaginary axis).
    """
    n = a.shape[0]
    z = np.block([[a, w], [-m, -a.T]])
    try:
        _, u, sdim = schur(z, output="real", sort="lhp" if stable else "rhp")
    except Exception as exc:
        raise NoStabilizingSolution(f"Schur decomposition failed: {exc}") from exc
    if sdim != n:
        raise NoStabilizingSolution(
            f"spectrum cannot be split: {sdim} of {2 * n} eigenvalues on the requested side"
        )
    u1 = u[:n, :n]
    u2 = u[n:, :n]
    if np.linalg.matrix_rank(u1) < n:
        raise NoStabilizingSolution("invariant subspace has no graph representation")
    x = _symmetrize(np.linalg.solve(u1.T, u2.T).T)
    # Newton polish; the Schur solution is normally already at round-off level.
    for _ in range(3):
        x2 = _newton_step(x, a, w, m)
        if _are_residual(x2, a, w, m) >= _are_residual(x, a, w, m):
            break
        x = x2
    return x


def solve_filter_are(A, B, C, N_cov=None, R_meas=None) -> np.ndarray:
    """Stabilizing solution P of  A P + P A' - P C' R^-1 C P + B N B' = 0.

    P is the steady-state error covariance of the filter for the plant
    (A, B) with process noise intensity N and measurement row C with noise
    intensity R. The returned P is symmetric positive semidefinite and makes
    A - P C' R^-1 C Hurwitz.
    """
    A = as_matrix(A, name="A")
    n = A.shape[0]
    B = as_matrix(B, rows=n, name="B")
    C = as_matrix(C, cols=n, name="C")
    N_cov = np.eye(B.shape[1]) if N_cov is None else as_matrix(N_cov, B.shape[1], B.shape[1], "N_cov")
    R_meas = np.eye(C.shape[0]) if R_meas is None else as_matrix(R_meas, C.shape[0], C.shape[0], "R_meas")

    w = -C.T @ np.linalg.solve(R_meas, C)
    m = B @ N_cov @ B.T
    # P solves P A' + A P + P w P + m = 0, i.e. the core equation with a = A'.
    p = _solve_quadratic_are(A.T, w, m, stable=True)

    closed_loop = A - p @ C.T @ np.linalg.solve(R_meas, C)
    if not np.all(np.linalg.eigvals(closed_loop).real < 0.0):
        raise NoStabilizingSolution("filter dynamics A - P C' R^-1 C is not Hurwitz")
    if np.min(np.linalg.eigvalsh(p)) < -1e-8 * max(1.0, float(np.linalg.norm(p))):
        raise NoStabilizingSolution("solution is not positive semidefinite")

    tol = 1e-10 * (1.0 + np.linalg.norm(A) + np.linalg.norm(p) ** 2)
    if _are_residual(p, A.T, w, m) > tol:
        raise IllConditioned(f"filter Riccati residual above {tol:g}")
    return p


def solve_robust_are(A, W, M, branch: str) -> np.ndarray:
    """Solve one leg of the uncertainty-weighted Riccati pair.

    branch="forward":   X A + A' X + X W X + M = 0  with eig(A + W X) in the
                        open right half plane (the forward information flow,
                        run as a stable filter in reversed sign).
    branch="backward":  Y A + A' Y - Y W Y - M = 0  with A - W Y Hurwitz.

    W must be symmetric positive semidefinite and M symmetric. Both legs must
    come out symmetric positive definite; otherwise the requested uncertainty
    level admits no design and NoAdmissibleSolution is raised.
    """
    A = as_matrix(A, name="A")
    n = A.shape[0]
    W = as_matrix(W, rows=n, cols=n, name="W")
    M = as_matrix(M, rows=n, cols=n, name="M")
    if branch not in ("forward", "backward"):
        raise ValueError("branch must be 'forward' or 'backward'")

    try:
        if branch == "forward":
            x = _solve_quadratic_are(A, W, M, stable=False)
            closed_loop = A + W @ x
            ok = np.all(np.linalg.eigvals(closed_loop).real > 0.0)
            residual = _are_residual(x, A, W, M)
        else:
            x = _solve_quadratic_are(A, -W, -M, stable=True)
            closed_loop = A - W @ x
            ok = np.all(np.linalg.eigvals(closed_loop).real < 0.0)
            residual = _are_residual(x, A, -W, -M)
    except NoStabilizingSolution as exc:
        raise NoAdmissibleSolution(str(exc)) from exc

    if not ok:
        raise NoAdmissibleSolution(f"{branch} branch eigenvalue criterion failed")
    if np.min(np.linalg.eigvalsh(x)) <= 0.0:
        raise NoAdmissibleSolution(f"{branch} solution is not positive definite")
    tol = 1e-10 * (1.0 + np.linalg.norm(A) + np.linalg.norm(x) ** 2)
    if residual > tol:
        raise IllConditioned(f"{branch} Riccati residual above {tol:g}")
    return x


def solve_lyapunov(A, Q) -> np.ndarray:
    """Solve A X + X A' + Q = 0 for the stationary covariance X.

    A must be Hurwitz and Q symmetric positive semidefinite.
    """
    A = as_matrix(A, name="A")
    n = A.shape[0]
    Q = as_matrix(Q, rows=n, cols=n, name="Q")
    if not is_hurwitz(A):
        raise NotHurwitz("A has an eigenvalue with nonnegative real part")
    x = _symmetrize(solve_continuous_lyapunov(A, -Q))
    tol = 1e-11 * (1.0 + np.linalg.norm(A) * np.linalg.norm(x))
    residual = float(np.linalg.norm(A @ x + x @ A.T + Q))
    if residual > tol:
        raise IllConditioned(f"Lyapunov residual {residual:g} above {tol:g}")
    return x
