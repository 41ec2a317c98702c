"""Exception taxonomy shared across the package."""


class RpsmoothError(Exception):
    """Base class for all errors raised by this package."""


class NoStabilizingSolution(RpsmoothError):
    """No Riccati solution with the required closed-loop eigenvalue signs exists."""


class NoAdmissibleSolution(RpsmoothError):
    """The uncertainty-weighted Riccati pair has no positive definite solution
    with the required branch; typically the uncertainty level is too large."""


class IllConditioned(RpsmoothError):
    """A solver finished but could not meet its residual tolerance."""


class NotHurwitz(RpsmoothError):
    """A matrix required to be Hurwitz has an eigenvalue with nonnegative real part."""


class InvalidParam(RpsmoothError, ValueError):
    """A model or configuration parameter is outside its admissible range."""


class DeltaOutOfRange(RpsmoothError, ValueError):
    """The uncertain parameter must satisfy |delta| <= 1."""


class SigmaOutOfRange(RpsmoothError):
    """The feedback error fraction left [0, 1]; the noise fixed point diverged."""


class SingularInput(RpsmoothError):
    """A covariance expected to be invertible is singular."""


class SingularSigma(SingularInput):
    """The stationary state covariance is singular; cross-covariance undefined."""


class DegenerateDenominator(RpsmoothError):
    """The two-filter combination denominator is not positive."""


class FixedPointDiverged(RpsmoothError):
    """The measurement-noise fixed point failed to converge."""


class Unstable(RpsmoothError):
    """A simulated trajectory blew up (step size too coarse or plant destabilized)."""


class ConfigError(RpsmoothError):
    """A configuration file or command-line argument could not be interpreted."""


class NonUnimodalWarning(UserWarning):
    """The squeezing objective showed more than one descent region; the
    optimizer fell back to a dense grid scan."""
