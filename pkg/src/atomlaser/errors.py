"""Exception and warning types raised by :mod:`atomlaser`."""


class AtomLaserError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(AtomLaserError, ValueError):
    pass


class NonPositiveGamma(ParameterError):
    pass


class NegativeFrequency(ParameterError):
    pass


class NegativeSqueeze(ParameterError):
    pass


class UnitaryLimitUnsupported(AtomLaserError, ValueError):
    """Raised by paths that need a finite step frequency."""


class WindowOverflow(AtomLaserError, RuntimeError):
    """The Poisson window would exceed the configured step cap."""


class TruncationTooLarge(AtomLaserError, ValueError):
    pass


class InsufficientTruncation(AtomLaserError, ValueError):
    """The truncated Fock state drops more norm than allowed."""


class UnknownPreset(AtomLaserError, KeyError):
    pass


class ApproximationDomainWarning(UserWarning):
    """Large-gamma expansion used outside ``max(omega, omega') / gamma <= 0.1``."""
