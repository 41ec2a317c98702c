"""Steady-state filter designs for the two-filter smoothers.

Four designs come out of here: the optimal forward/backward Kalman pair for
the nominal model, and a robust forward/backward pair built from an
uncertainty-weighted Riccati pair (X, Y). All four are represented as stable
filters driven by the scaled measurement theta, so a single augmented
Lyapunov analysis (see ``analysis``) covers each of them. The backward
filters are written in their reversed-running-time form: since the stationary
measurement record has the same statistics read in either direction, the
backward filter paired with the same plant gives the correct second moments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHurwitz, SingularInput
from .matops import as_matrix, is_hurwitz, solve_filter_are, solve_robust_are
from .models import ProcessModel, UncertaintySpec

__all__ = [
    "FilterDesign",
    "SmootherDesign",
    "design_optimal_filters",
    "design_robust_filters",
    "optimal_smoother_cov",
    "robust_combine",
]


@dataclass(frozen=True)
class FilterDesign:
    """One steady-state filter: dynamics F, measurement gain G_meas, and the
    design matrix that produced it (error covariance P, or Riccati leg X/Y)."""

    F: np.ndarray
    G_meas: np.ndarray
    C: np.ndarray
    P_or_XY: np.ndarray
    direction: str  # "forward" | "backward"
    kind: str  # "optimal" | "robust"

    def __post_init__(self):
        if not is_hurwitz(self.F):
            raise NotHurwitz(f"{self.kind} {self.direction} filter dynamics is not Hurwitz")


@dataclass(frozen=True)
class SmootherDesign:
    """Combination weights for the robust smoother: the estimate is
    k1 @ x_fwd + k2 @ x_bwd with k1 + k2 = I."""

    k1: np.ndarray
    k2: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    kind: str = "robust"


def design_optimal_filters(model: ProcessModel, C) -> tuple[FilterDesign, FilterDesign]:
    """Forward and backward Kalman filters for the nominal model.

    The forward design solves the filter Riccati equation for (A, B, C); the
    backward one solves it for (-A, -B, C), which is the plant as seen in
    reversed running time. Both use unit process and measurement noise
    intensities (the scaled measurement makes them unity).
    """
    C = as_matrix(C, cols=model.n, name="C")
    A, B = model.A, model.B

    P_f = solve_filter_are(A, B, C)
    K_f = P_f @ C.T
    fwd = FilterDesign(F=A - K_f @ C, G_meas=K_f, C=C, P_or_XY=P_f,
                       direction="forward", kind="optimal")

    P_b = solve_filter_are(-A, -B, C)
    K_b = P_b @ C.T
    bwd = FilterDesign(F=-A - K_b @ C, G_meas=K_b, C=C, P_or_XY=P_b,
                       direction="backward", kind="optimal")
    return fwd, bwd


def optimal_smoother_cov(P_f, P_b) -> np.ndarray:
    """Matched two-filter smoother covariance (P_f^-1 + P_b^-1)^-1."""
    P_f = as_matrix(P_f, name="P_f")
    P_b = as_matrix(P_b, rows=P_f.shape[0], cols=P_f.shape[1], name="P_b")
    try:
        info = np.linalg.inv(P_f) + np.linalg.inv(P_b)
        out = np.linalg.inv(info)
    except np.linalg.LinAlgError as exc:
        raise SingularInput("filter covariance is singular") from exc
    return 0.5 * (out + out.T)


def design_robust_filters(
    model: ProcessModel, unc: UncertaintySpec, C
) -> tuple[FilterDesign, FilterDesign, SmootherDesign]:
    """Robust forward/backward filters and their combination weights.

    With unit noise weights the Riccati pair is

        X A + A' X + X B1 B1' X + (K'K - C'C) = 0,   eig(A + B1 B1' X) > 0,
        Y A + A' Y - Y B1 B1' Y - (K'K - C'C) = 0,   A - B1 B1' Y Hurwitz,

    and the information states evolve as

        eta' = -(A + B1 B1' X)' eta + C' theta,      estimate X^-1 eta,
        xi'  =  (A - B1 B1' Y)' xi  + C' theta,      estimate Y^-1 xi,

    the latter in reversed running time. Expressed on the estimates, the
    filter dynamics are similarity transforms of -(A + B1B1'X) and (A - B1B1'Y),
    so both are stable. At mu = 0 the pair reduces exactly to the Kalman
    designs (X = P_f^-1, Y = P_b^-1). The smoother weights are
    k1 = (X+Y)^-1 X and k2 = (X+Y)^-1 Y, the weights of the midpoint of the
    two information forms.
    """
    C = as_matrix(C, cols=model.n, name="C")
    A, B1, K = model.A, unc.B1, unc.K

    W = B1 @ B1.T
    M = K.T @ K - C.T @ C
    X = solve_robust_are(A, W, M, "forward")
    Y = solve_robust_are(A, W, M, "backward")

    Xinv = np.linalg.inv(X)
    Yinv = np.linalg.inv(Y)
    fwd = FilterDesign(F=-Xinv @ (A + W @ X).T @ X, G_meas=Xinv @ C.T, C=C,
                       P_or_XY=X, direction="forward", kind="robust")
    bwd = FilterDesign(F=Yinv @ (A - W @ Y).T @ Y, G_meas=Yinv @ C.T, C=C,
                       P_or_XY=Y, direction="backward", kind="robust")

    k1 = np.linalg.solve(X + Y, X)
    k2 = np.linalg.solve(X + Y, Y)
    smoother = SmootherDesign(k1=k1, k2=k2, X=X, Y=Y)
    return fwd, bwd, smoother


def robust_combine(k1, k2, xf_hat, xb_hat) -> np.ndarray:
    """Combine forward and backward estimates with the smoother weights."""
    k1 = np.atleast_2d(np.asarray(k1, dtype=float))
    k2 = np.atleast_2d(np.asarray(k2, dtype=float))
    xf = np.atleast_1d(np.asarray(xf_hat, dtype=float))
    xb = np.atleast_1d(np.asarray(xb_hat, dtype=float))
    return k1 @ xf + k2 @ xb
