"""Optimal and robust fixed-interval smoothing for squeezed-beam phase tracking.

The package designs steady-state two-filter smoothers for a continuously
varying optical phase read out by adaptive homodyne detection of a squeezed
beam, evaluates their true mean-square errors under explicit model
uncertainty through augmented-system Lyapunov analysis, and reproduces the
error-versus-parameter studies as CSV tables cross-validated by a stochastic
simulator.
"""

from .analysis import ErrorReport, combine_smoother, cross_cov, evaluate_error, filter_error_cov, worst_case_error
from .errors import (
    ConfigError,
    DegenerateDenominator,
    DeltaOutOfRange,
    FixedPointDiverged,
    IllConditioned,
    InvalidParam,
    NoAdmissibleSolution,
    NonUnimodalWarning,
    NoStabilizingSolution,
    NotHurwitz,
    RpsmoothError,
    SigmaOutOfRange,
    SingularInput,
    SingularSigma,
    Unstable,
)
from .estimators import (
    FilterDesign,
    SmootherDesign,
    design_optimal_filters,
    design_robust_filters,
    optimal_smoother_cov,
    robust_combine,
)
from .limits import BaselineCurve, compute_csl, compute_sql
from .matops import is_hurwitz, solve_filter_are, solve_lyapunov, solve_robust_are
from .models import (
    ProcessModel,
    SqueezingConfig,
    UncertaintySpec,
    apply_uncertainty,
    build_process,
    compute_R_sq,
    effective_squeezing,
    measurement_row,
    ou_process,
    resonant_process,
    squeezing_db,
    uncertainty_for,
)
from .montecarlo import SimConfig, SimResult, simulate_tracking
from .experiments import (
    DEFAULT_OU,
    DEFAULT_RESONANT,
    SweepSpec,
    SweepTable,
    load_config,
    optimize_squeezing,
    run_sweep,
    spec_for,
)

__version__ = "0.1.0"
