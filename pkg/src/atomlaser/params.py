"""Model parameters, initial-state moments and the decoherence envelope.

Every frequency and time is a plain dimensionless number (hbar = 1); callers
pick one consistent unit system.  The step frequency ``gamma`` is either a
positive float or :data:`UNITARY_LIMIT`, which stands for gamma -> infinity
and switches every envelope to its pure-phase form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import NegativeFrequency, NegativeSqueeze, NonPositiveGamma, ParameterError

__all__ = [
    "UNITARY_LIMIT",
    "ModelParams",
    "TimeGrid",
    "GaussianMoments",
    "validate_params",
    "reduce_phase",
    "squeezed_vacuum_moments",
    "envelope",
    "log_envelope",
    "decay_rate",
]

#: Distinguished value of ``gamma`` meaning gamma -> infinity (von Neumann dynamics).
UNITARY_LIMIT = math.inf


def reduce_phase(angle: float) -> float:
    """Map ``angle`` onto the half-open interval (-pi, pi]."""
    reduced = math.remainder(float(angle), 2.0 * math.pi)
    if reduced <= -math.pi:
        reduced += 2.0 * math.pi
    return reduced


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the resonant output coupler.

    Attributes:
        omega: common frequency of the photon and untrapped-atom modes.
        omega_prime: effective coupling ``|alpha| * Omega``.
        gamma: mean frequency of the unitary steps, or :data:`UNITARY_LIMIT`.
        r: squeeze magnitude of the optical input.
        phi: squeeze phase.
        theta: phase of the condensate amplitude, ``alpha = |alpha| exp(-i theta)``.
    """

    omega: float = 0.0
    omega_prime: float = 1.0
    gamma: float = UNITARY_LIMIT
    r: float = 0.0
    phi: float = 0.0
    theta: float = 0.0

    @property
    def unitary(self) -> bool:
        return math.isinf(self.gamma)

    def with_(self, **changes) -> "ModelParams":
        """Return a validated copy with some fields replaced."""
        return validate_params(replace(self, **changes))


def validate_params(p: ModelParams) -> ModelParams:
    """Check the parameter constraints and return a copy with reduced phases.

    Raises:
        NonPositiveGamma: finite ``gamma <= 0`` (or ``-inf``/NaN).
        NegativeFrequency: ``omega < 0`` or ``omega_prime < 0``.
        NegativeSqueeze: ``r < 0``.
    """
    gamma = float(p.gamma)
    if math.isnan(gamma) or gamma <= 0.0:
        raise NonPositiveGamma(f"gamma must be positive or UNITARY_LIMIT, got {p.gamma!r}")
    for name in ("omega", "omega_prime"):
        value = float(getattr(p, name))
        if not value >= 0.0 or math.isinf(value):
            raise NegativeFrequency(f"{name} must be finite and >= 0, got {value!r}")
    r = float(p.r)
    if not r >= 0.0 or math.isinf(r):
        raise NegativeSqueeze(f"r must be finite and >= 0, got {r!r}")
    for name in ("phi", "theta"):
        if not math.isfinite(float(getattr(p, name))):
            raise ParameterError(f"{name} must be finite")
    return ModelParams(
        omega=float(p.omega),
        omega_prime=float(p.omega_prime),
        gamma=gamma,
        r=r,
        phi=reduce_phase(p.phi),
        theta=reduce_phase(p.theta),
    )


@dataclass(frozen=True)
class TimeGrid:
    """Sample times on ``[start, stop]``, linear or logarithmic."""

    start: float
    stop: float
    count: int = 2000
    log: bool = False

    def __post_init__(self):
        if self.start < 0 or not self.stop > self.start:
            raise ParameterError(f"need 0 <= start < stop, got [{self.start}, {self.stop}]")
        if int(self.count) != self.count or self.count < 2:
            raise ParameterError(f"count must be an integer >= 2, got {self.count!r}")
        if self.log and self.start <= 0:
            raise ParameterError("logarithmic spacing needs start > 0")

    def times(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.stop, int(self.count))
        return np.linspace(self.start, self.stop, int(self.count))


class GaussianMoments(NamedTuple):
    """Non-vanishing moments of the squeezed vacuum on the optical mode.

    The untrapped-atom mode starts in vacuum, so its only non-zero second
    moment is ``<b b^dagger> = 1``; all first moments vanish.
    """

    n_a0: float
    a2_0: complex


def squeezed_vacuum_moments(r: float, phi: float = 0.0) -> GaussianMoments:
    """``<a^dagger a> = sinh^2 r`` and ``<a^2> = exp(i phi) sinh r cosh r``.

    The sign of ``<a^2>`` makes the second quadrature the squeezed one at
    ``phi = 0``.
    """
    if not r >= 0.0:
        raise NegativeSqueeze(f"r must be >= 0, got {r!r}")
    sh, ch = math.sinh(r), math.cosh(r)
    return GaussianMoments(n_a0=sh * sh, a2_0=complex(math.cos(phi), math.sin(phi)) * sh * ch)


def log_envelope(nu, p: ModelParams, t):
    """Exponent of :func:`envelope`, ``gamma t (exp(i nu/gamma) - 1)``.

    Uses ``cos x - 1 = -2 sin^2(x/2)`` so that tiny ``nu/gamma`` keeps full
    relative precision in the real (decay) part.
    """
    nu = np.asarray(nu, dtype=float)
    t = np.asarray(t, dtype=float)
    if p.unitary:
        return 1j * nu * t
    x = nu / p.gamma
    gt = p.gamma * t
    half = np.sin(0.5 * x)
    return -2.0 * gt * half * half + 1j * gt * np.sin(x)


def envelope(nu, p: ModelParams, t):
    """Poisson-resummed phase factor ``E(nu, t) = exp(gamma t (exp(i nu/gamma) - 1))``.

    This is the average of ``exp(i k nu / gamma)`` over the Poisson number of
    unitary steps ``k`` with mean ``gamma t``.  In the unitary limit it is
    ``exp(i nu t)``.  Broadcasts over ``nu`` and ``t``.
    """
    if np.any(np.asarray(t) < 0):
        raise ParameterError("t must be >= 0")
    return np.exp(log_envelope(nu, p, t))


def decay_rate(nu: float, gamma: float) -> float:
    """Exponential decay rate of ``|E(nu, t)|``: ``2 gamma sin^2(nu / 2 gamma)``."""
    if math.isinf(gamma):
        return 0.0
    s = math.sin(0.5 * nu / gamma)
    return 2.0 * gamma * s * s
