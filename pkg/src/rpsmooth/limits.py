"""Coherent-beam baselines: the coherent state limit and the standard quantum limit.

Both are matched designs, recomputed for each value of the uncertain
parameter: no model mismatch is involved, so a Riccati solve gives the error
directly. The coherent state limit is the matched two-filter smoother with a
coherent beam (R_sq = 1). The standard quantum limit is the error of a
(filtering-only) heterodyne scheme, equivalent to splitting the beam onto two
homodyne detectors, whose linearized output measures the phase directly with
two independent unit noises each scaled by 1/(2|alpha|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimators import optimal_smoother_cov
from .matops import solve_filter_are
from .models import ProcessModel, UncertaintySpec, apply_uncertainty, measurement_row

__all__ = ["BaselineCurve", "compute_csl", "compute_sql"]


@dataclass(frozen=True)
class BaselineCurve:
    """A baseline evaluated over a grid of the uncertain parameter."""

    deltas: np.ndarray
    values: np.ndarray
    kind: str  # "csl" | "sql"

    def __post_init__(self):
        d = np.asarray(self.deltas, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if d.shape != v.shape:
            raise ValueError("deltas and values must have the same length")
        if np.any(v <= 0):
            raise ValueError("baseline values must be positive")
        object.__setattr__(self, "deltas", d)
        object.__setattr__(self, "values", v)


def compute_csl(model: ProcessModel, unc: UncertaintySpec, alpha_sq: float, delta: float) -> float:
    """Coherent state limit: matched smoother error at this parameter value.

    The design is redone against the true drift for every delta, with a
    coherent beam (R_sq = 1); the phase-entry of the combined covariance is
    returned. No noise fixed point applies.
    """
    A_true = apply_uncertainty(model, unc, delta)
    C = measurement_row(alpha_sq, 1.0, model.n)
    P_f = solve_filter_are(A_true, model.B, C)
    P_b = solve_filter_are(-A_true, -model.B, C)
    return float(optimal_smoother_cov(P_f, P_b)[0, 0])


def compute_sql(model: ProcessModel, unc: UncertaintySpec, alpha_sq: float, delta: float) -> float:
    """Standard quantum limit: matched heterodyne filtering error.

    The linearized dual-homodyne measurement is phi plus two independent unit
    noises scaled by 1/(2|alpha|), i.e. measurement row [1, 0, ...] with noise
    intensity 1/(2*alpha_sq). Filtering only; no smoothing."""
    A_true = apply_uncertainty(model, unc, delta)
    C = np.zeros((1, model.n))
    C[0, 0] = 1.0
    R = np.array([[1.0 / (2.0 * alpha_sq)]])
    P = solve_filter_are(A_true, model.B, C, R_meas=R)
    return float(P[0, 0])
