"""Phase-noise process models, their uncertain variants, and the squeezed
measurement model.

Two noise processes drive the optical phase: a first-order mean-reverting
(Ornstein-Uhlenbeck) process and a second-order resonant process of the kind
produced by a piezo transducer driven by white noise. Uncertainty enters as a
rank-one perturbation of the drift, A -> A + B1*delta*K with |delta| <= 1 and
a level knob mu. The homodyne measurement of the squeezed beam is used in
scaled form, theta = (2*|alpha|/sqrt(R_sq)) * phi + w, where the effective
noise power R_sq mixes the squeezed and anti-squeezed quadrature variances
according to the feedback filter's mean-square error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DeltaOutOfRange, InvalidParam, SigmaOutOfRange
from .matops import as_matrix, is_hurwitz

__all__ = [
    "ProcessModel",
    "UncertaintySpec",
    "SqueezingConfig",
    "build_process",
    "ou_process",
    "resonant_process",
    "uncertainty_for",
    "apply_uncertainty",
    "effective_squeezing",
    "compute_R_sq",
    "measurement_row",
    "squeezing_db",
]


@dataclass(frozen=True)
class ProcessModel:
    """State-space phase-noise model (A, B) with defining scalar parameters."""

    A: np.ndarray
    B: np.ndarray
    n: int
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A, self.n, self.n, "A"))
        object.__setattr__(self, "B", as_matrix(self.B, self.n, 1, "B"))
        if not is_hurwitz(self.A):
            raise InvalidParam(f"{self.kind} model drift matrix is not Hurwitz")


@dataclass(frozen=True)
class UncertaintySpec:
    """Rank-one drift uncertainty A -> A + B1*delta*K at level mu, |delta| <= 1."""

    mu: float
    K: np.ndarray
    B1: np.ndarray
    delta_range: tuple = (-1.0, 1.0)

    def __post_init__(self):
        if not 0.0 <= self.mu < 1.0:
            raise InvalidParam(f"mu must lie in [0, 1), got {self.mu}")
        object.__setattr__(self, "K", as_matrix(self.K, 1, None, "K"))
        object.__setattr__(self, "B1", as_matrix(self.B1, None, 1, "B1"))
        if self.B1.shape[0] != self.K.shape[1]:
            raise InvalidParam("B1 and K dimensions are inconsistent")


def build_process(kind: str, **params) -> ProcessModel:
    """Construct a phase-noise model by kind ("ou" or "resonant")."""
    if kind == "ou":
        return ou_process(params["lambda_"], params["kappa"])
    if kind == "resonant":
        return resonant_process(params["kappa"], params["zeta"], params["omega_r"])
    raise InvalidParam(f"unknown process kind {kind!r}")


def ou_process(lambda_: float, kappa: float) -> ProcessModel:
    """Mean-reverting phase noise  dphi = -lambda*phi dt + sqrt(kappa) dV."""
    if lambda_ <= 0 or kappa <= 0:
        raise InvalidParam("lambda_ and kappa must be strictly positive")
    A = np.array([[-lambda_]])
    B = np.array([[math.sqrt(kappa)]])
    return ProcessModel(A=A, B=B, n=1, kind="ou", params={"lambda_": lambda_, "kappa": kappa})


def resonant_process(kappa: float, zeta: float, omega_r: float) -> ProcessModel:
    """Second-order resonant phase noise kappa/(s^2 + 2*zeta*omega_r*s + omega_r^2)."""
    if kappa <= 0 or zeta <= 0 or omega_r <= 0:
        raise InvalidParam("kappa, zeta and omega_r must be strictly positive")
    A = np.array([[0.0, 1.0], [-omega_r**2, -2.0 * zeta * omega_r]])
    B = np.array([[0.0], [kappa]])
    return ProcessModel(
        A=A, B=B, n=2, kind="resonant", params={"kappa": kappa, "zeta": zeta, "omega_r": omega_r}
    )


def uncertainty_for(model: ProcessModel, mu: float) -> UncertaintySpec:
    """Uncertainty structure matching the model kind.

    For the mean-reverting model the relaxation rate is perturbed,
    lambda -> lambda - mu*delta*lambda. For the resonant model the squared
    resonance frequency is perturbed; the damping cross term is left alone
    since it is far smaller for a resonant process.
    """
    if model.kind == "ou":
        lam = model.params["lambda_"]
        kappa = model.params["kappa"]
        K = np.array([[mu * lam / math.sqrt(kappa)]])
    elif model.kind == "resonant":
        omega_r = model.params["omega_r"]
        kappa = model.params["kappa"]
        K = np.array([[-mu * omega_r**2 / kappa, 0.0]])
    else:
        raise InvalidParam(f"unknown process kind {model.kind!r}")
    return UncertaintySpec(mu=mu, K=K, B1=model.B.copy())


def apply_uncertainty(model: ProcessModel, unc: UncertaintySpec, delta: float) -> np.ndarray:
    """True drift matrix A + B1*delta*K for a given uncertain parameter value."""
    if not abs(delta) <= 1.0:
        raise DeltaOutOfRange(f"|delta| must be <= 1, got {delta}")
    return model.A + unc.B1 * float(delta) @ unc.K


def effective_squeezing(r_pure: float, l_sq: float) -> tuple[float, float]:
    """Squeezing/anti-squeezing pair (r_m, r_p) after propagation loss.

    Loss mixes the beam with vacuum on an effective beam splitter, so the
    measured quadrature variances are the lossless ones pulled toward 1:

        exp(-2*r_m) = (1 - l_sq)*exp(-2*r_pure) + l_sq
        exp(+2*r_p) = (1 - l_sq)*exp(+2*r_pure) + l_sq
    """
    if r_pure < 0:
        raise InvalidParam("r_pure must be nonnegative")
    if not 0.0 <= l_sq < 1.0:
        raise InvalidParam("l_sq must lie in [0, 1)")
    if l_sq == 0.0:
        return r_pure, r_pure
    r_m = -0.5 * math.log((1.0 - l_sq) * math.exp(-2.0 * r_pure) + l_sq)
    r_p = 0.5 * math.log((1.0 - l_sq) * math.exp(2.0 * r_pure) + l_sq)
    # exp/log round-trip can land 1 ulp out of order near r_pure = 0
    r_m = max(r_m, 0.0)
    r_p = max(r_p, r_m)
    return r_m, r_p


@dataclass(frozen=True)
class SqueezingConfig:
    """Squeezed-beam configuration: photon flux plus effective quadrature pair.

    Either build from the pure squeezing parameter and a loss via
    ``SqueezingConfig.from_pure`` or give the effective (r_m, r_p) directly
    via ``SqueezingConfig.from_effective`` when measured values are known.
    """

    alpha_sq: float
    r_m: float
    r_p: float
    r_pure: float | None = None
    l_sq: float = 0.0

    def __post_init__(self):
        if self.alpha_sq <= 0:
            raise InvalidParam("alpha_sq must be strictly positive")
        if self.r_m < 0 or self.r_p < self.r_m:
            raise InvalidParam("need r_p >= r_m >= 0")

    @classmethod
    def from_pure(cls, alpha_sq: float, r_pure: float, l_sq: float = 0.0) -> "SqueezingConfig":
        r_m, r_p = effective_squeezing(r_pure, l_sq)
        return cls(alpha_sq=alpha_sq, r_m=r_m, r_p=r_p, r_pure=r_pure, l_sq=l_sq)

    @classmethod
    def from_effective(cls, alpha_sq: float, r_m: float, r_p: float) -> "SqueezingConfig":
        return cls(alpha_sq=alpha_sq, r_m=r_m, r_p=r_p)

    @classmethod
    def coherent(cls, alpha_sq: float) -> "SqueezingConfig":
        return cls(alpha_sq=alpha_sq, r_m=0.0, r_p=0.0, r_pure=0.0)


def compute_R_sq(sigma_f_sq: float, r_m: float, r_p: float) -> float:
    """Effective measurement noise power seen by the phase-locked homodyne.

    A convex mix of the anti-squeezed and squeezed quadrature variances
    weighted by the feedback filter's mean-square error:
    R_sq = sigma_f_sq*exp(2*r_p) + (1 - sigma_f_sq)*exp(-2*r_m).
    """
    if not 0.0 <= sigma_f_sq <= 1.0:
        raise SigmaOutOfRange(f"sigma_f_sq must lie in [0, 1], got {sigma_f_sq}")
    return sigma_f_sq * math.exp(2.0 * r_p) + (1.0 - sigma_f_sq) * math.exp(-2.0 * r_m)


def measurement_row(alpha_sq: float, R_sq: float, n: int) -> np.ndarray:
    """Scaled measurement row: theta = C x + w with C = [2*|alpha|/sqrt(R_sq), 0, ...]."""
    if alpha_sq <= 0 or R_sq <= 0:
        raise InvalidParam("alpha_sq and R_sq must be strictly positive")
    C = np.zeros((1, n))
    C[0, 0] = 2.0 * math.sqrt(alpha_sq) / math.sqrt(R_sq)
    return C


def squeezing_db(r_m: float) -> float:
    """Squeezed-quadrature variance relative to shot noise, in dB (<= 0)."""
    if r_m < 0:
        raise InvalidParam("r_m must be nonnegative")
    return 10.0 * math.log10(math.exp(-2.0 * r_m))
