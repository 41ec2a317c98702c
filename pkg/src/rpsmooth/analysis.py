"""True mean-square error analysis of a smoother run against an uncertain plant.

The true plant drift differs from the design model by the rank-one
perturbation B1*delta*K. Stacking the plant with one filter gives the
augmented system

    d/dt [x; xh] = [[A_true, 0], [G C, F]] [x; xh] + [[B, 0], [0, G]] [v; w]

whose stationary covariance solves a Lyapunov equation. Partitioning it into
Sigma = E[x x'], M = E[x xh'], N = E[xh xh'] yields the filter error
covariance Sigma - M - M' + N, the forward/backward cross covariance
Sigma - Mf' - Mb + Mf' Sigma^-1 Mb (exact for a stationary Gauss-Markov
state, since past and future records are conditionally independent given the
present state), and from those the combined smoother error.

The measurement noise power R_sq and the feedback filter's true error are
mutually dependent, so every evaluation runs a small fixed-point iteration:
design at the current R_sq, measure the true forward error, update R_sq, and
repeat until the error is stable to six decimal places.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDenominator,
    FixedPointDiverged,
    NotHurwitz,
    SigmaOutOfRange,
    SingularSigma,
)
from .estimators import (
    FilterDesign,
    SmootherDesign,
    design_optimal_filters,
    design_robust_filters,
)
from .matops import is_hurwitz, solve_lyapunov
from .models import (
    ProcessModel,
    SqueezingConfig,
    UncertaintySpec,
    apply_uncertainty,
    compute_R_sq,
    measurement_row,
)

__all__ = [
    "ErrorReport",
    "filter_error_cov",
    "cross_cov",
    "combine_smoother",
    "evaluate_error",
    "worst_case_error",
    "FP_TOL",
    "FP_MAX_ITERS",
]

FP_TOL = 1e-6
FP_MAX_ITERS = 200


@dataclass(frozen=True)
class ErrorReport:
    """True second moments of one estimator at one uncertain-parameter value.

    All sigma fields are the (1, 1) entries, i.e. the moments of the phase
    component itself, in rad^2.
    """

    sigma_f_sq: float
    sigma_b_sq: float
    sigma_fb_sq: float
    sigma_sq: float
    R_sq_converged: float
    fixed_point_iters: int
    delta: float
    mu: float
    kind: str = "optimal"


def filter_error_cov(A_true, B, design: FilterDesign):
    """Stationary (Sigma, M, N, error covariance) of one filter against A_true.

    Raises NotHurwitz when the augmented matrix is unstable, which happens if
    the uncertain plant itself is destabilized.
    """
    A_true = np.atleast_2d(np.asarray(A_true, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    n = A_true.shape[0]
    F, G, C = design.F, design.G_meas, design.C

    A_bar = np.block([[A_true, np.zeros((n, n))], [G @ C, F]])
    if not is_hurwitz(A_bar):
        raise NotHurwitz("augmented plant/filter system is not Hurwitz")
    B_bar = np.block([[B, np.zeros((n, 1))], [np.zeros((n, 1)), G]])
    C_S = solve_lyapunov(A_bar, B_bar @ B_bar.T)

    Sigma = C_S[:n, :n]
    M = C_S[:n, n:]
    N = C_S[n:, n:]
    err = Sigma - M - M.T + N
    return Sigma, M, N, err


def cross_cov(Sigma, M_f, M_b) -> np.ndarray:
    """Cross covariance E[e_fwd e_bwd'] of the two filter errors."""
    Sigma = np.atleast_2d(np.asarray(Sigma, dtype=float))
    M_f = np.atleast_2d(np.asarray(M_f, dtype=float))
    M_b = np.atleast_2d(np.asarray(M_b, dtype=float))
    try:
        proj = M_f.T @ np.linalg.solve(Sigma, M_b)
    except np.linalg.LinAlgError as exc:
        raise SingularSigma("stationary state covariance is singular") from exc
    return Sigma - M_f.T - M_b + proj


def combine_smoother(kind: str, weights: SmootherDesign | None, sf: float, sb: float, sfb: float) -> float:
    """Combined smoother error from scalar filter moments.

    kind="optimal" uses the error-weighted combination of two correlated
    estimates, (sf*sb - sfb^2)/(sf + sb - 2*sfb). kind="robust" applies the
    fixed weights k1^2*sf + k2^2*sb + 2*k1*k2*sfb, with the scalar weights
    taken from the phase entries of the Riccati pair,
    k1 = X11/(X11 + Y11), k2 = Y11/(X11 + Y11).
    """
    if kind == "optimal":
        den = sf + sb - 2.0 * sfb
        if den <= 0.0:
            raise DegenerateDenominator(f"sf + sb - 2*sfb = {den:g} is not positive")
        return (sf * sb - sfb**2) / den
    if kind == "robust":
        if weights is None:
            raise ValueError("robust combination needs a SmootherDesign")
        x11 = float(weights.X[0, 0])
        y11 = float(weights.Y[0, 0])
        k1 = x11 / (x11 + y11)
        k2 = y11 / (x11 + y11)
        return k1**2 * sf + k2**2 * sb + 2.0 * k1 * k2 * sfb
    raise ValueError(f"unknown estimator kind {kind!r}")


def _design(kind: str, model: ProcessModel, unc: UncertaintySpec, C):
    if kind == "optimal":
        fwd, bwd = design_optimal_filters(model, C)
        return fwd, bwd, None
    if kind == "robust":
        return design_robust_filters(model, unc, C)
    raise ValueError(f"unknown estimator kind {kind!r}")


def evaluate_error(
    model: ProcessModel,
    unc: UncertaintySpec,
    sq: SqueezingConfig,
    kind: str,
    delta: float,
    combine: str = "scalar-first",
) -> ErrorReport:
    """True smoother error of one estimator at one uncertain-parameter value.

    Runs the noise fixed point (the estimator's own forward filter error
    feeds R_sq), then evaluates backward and cross covariances and combines.

    ``combine`` selects how the multivariate moments are reduced for the
    robust estimator: "scalar-first" (default) takes the phase entries of the
    three moment matrices and combines them with scalar weights, which is the
    reduction that reproduces the reference studies; "matrix-first" combines
    the full matrices with the matrix weights and then takes the phase entry.
    """
    if combine not in ("scalar-first", "matrix-first"):
        raise ValueError(f"unknown combine mode {combine!r}")
    A_true = apply_uncertainty(model, unc, delta)
    B = model.B

    sigma_f = 0.0
    R_sq = compute_R_sq(0.0, sq.r_m, sq.r_p)
    recent_changes: list[float] = []
    iters = 0
    converged = False
    for it in range(1, FP_MAX_ITERS + 1):
        iters = it
        C = measurement_row(sq.alpha_sq, R_sq, model.n)
        fwd, _, _ = _design(kind, model, unc, C)
        _, _, _, err = filter_error_cov(A_true, B, fwd)
        new_sigma_f = float(err[0, 0])
        change = new_sigma_f - sigma_f
        recent_changes.append(change)
        if len(recent_changes) > 4:
            recent_changes.pop(0)
        oscillating = len(recent_changes) == 4 and all(
            recent_changes[i] * recent_changes[i + 1] < 0.0 for i in range(3)
        )
        if oscillating:
            new_sigma_f = 0.5 * (new_sigma_f + sigma_f)
        if it > 1 and abs(change) < FP_TOL:
            sigma_f = new_sigma_f
            converged = True
            break
        sigma_f = new_sigma_f
        try:
            R_sq = compute_R_sq(sigma_f, sq.r_m, sq.r_p)
        except SigmaOutOfRange as exc:
            raise FixedPointDiverged(str(exc)) from exc
    if not converged:
        raise FixedPointDiverged(f"no convergence in {FP_MAX_ITERS} iterations")

    C = measurement_row(sq.alpha_sq, R_sq, model.n)
    fwd, bwd, smoother = _design(kind, model, unc, C)
    Sigma, M_f, _, S_f = filter_error_cov(A_true, B, fwd)
    _, M_b, _, S_b = filter_error_cov(A_true, B, bwd)
    S_fb = cross_cov(Sigma, M_f, M_b)
    sf, sb, sfb = float(S_f[0, 0]), float(S_b[0, 0]), float(S_fb[0, 0])

    if kind == "optimal":
        sigma_sq = combine_smoother("optimal", None, sf, sb, sfb)
    elif combine == "matrix-first":
        k1, k2 = smoother.k1, smoother.k2
        full = k1 @ S_f @ k1.T + k2 @ S_b @ k2.T + k1 @ S_fb @ k2.T + k2 @ S_fb.T @ k1.T
        sigma_sq = float(full[0, 0])
    else:
        sigma_sq = combine_smoother("robust", smoother, sf, sb, sfb)

    return ErrorReport(
        sigma_f_sq=sf,
        sigma_b_sq=sb,
        sigma_fb_sq=sfb,
        sigma_sq=sigma_sq,
        R_sq_converged=R_sq,
        fixed_point_iters=iters,
        delta=float(delta),
        mu=unc.mu,
        kind=kind,
    )


def worst_case_error(
    model: ProcessModel,
    unc: UncertaintySpec,
    sq: SqueezingConfig,
    kind: str,
    grid_size: int = 201,
    combine: str = "scalar-first",
) -> tuple[float, float]:
    """Maximum smoother error over a uniform grid of the uncertain parameter.

    The grid size must be odd and at least 3 so that delta = 0 and the
    endpoints are always evaluated. Exact ties for the maximum are broken
    toward the smallest |delta|.
    """
    if grid_size < 3 or grid_size % 2 == 0:
        raise ValueError("grid_size must be odd and >= 3")
    deltas = np.linspace(-1.0, 1.0, grid_size)
    values = np.array(
        [evaluate_error(model, unc, sq, kind, d, combine=combine).sigma_sq for d in deltas]
    )
    vmax = values.max()
    ties = deltas[values == vmax]
    delta_star = float(min(ties, key=lambda d: (abs(d), d)))
    return float(vmax), delta_star
