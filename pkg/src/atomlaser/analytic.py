"""Closed-form observables of the output atom beam and the optical field.

All functions take validated :class:`~atomlaser.params.ModelParams` and a
scalar or array time, and are written directly in terms of the decoherence
envelope ``E(nu, t)``.  Nothing here branches on parameter coincidences:
``omega' == omega`` simply makes one envelope identically 1.
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple

import numpy as np

from .errors import ApproximationDomainWarning, UnitaryLimitUnsupported
from .observables import ObservablePoint, mandel_q_from, q_threshold
from .params import ModelParams, envelope

__all__ = [
    "mean_numbers",
    "number_variances",
    "mandel_q",
    "squeezing_exact",
    "squeezing_large_gamma",
    "stationary_values",
    "observables",
    "SqueezingCoefficients",
    "ApproxSqueezing",
    "StationaryValues",
]


class SqueezingCoefficients(NamedTuple):
    s1_a: np.ndarray
    s2_a: np.ndarray
    s1_b: np.ndarray
    s2_b: np.ndarray


class ApproxSqueezing(NamedTuple):
    s1_a: np.ndarray
    s2_a: np.ndarray
    s1_b: np.ndarray
    s2_b: np.ndarray
    outside_domain: bool


class StationaryValues(NamedTuple):
    s_generic: float
    s_special_plus: float | None
    s_special_minus: float | None
    squeezed_at_infinity: bool


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def mean_numbers(p: ModelParams, t):
    """Mean photon number ``n_a`` and output-atom number ``n_b``.

    Excitations oscillate between the modes at ``2 omega'``; decoherence damps
    the oscillation towards an equal split of ``sinh^2 r``.
    """
    sh2 = math.sinh(p.r) ** 2
    re2 = envelope(2.0 * p.omega_prime, p, t).real
    n_a = (0.5 + 0.5 * re2) * sh2
    n_b = (0.5 - 0.5 * re2) * sh2
    return _scalar(n_a), _scalar(n_b)


def number_variances(p: ModelParams, t):
    """Number variances ``(var_a, var_b)``, transcribed term by term.

    ``exp(2 gamma t e^{2i omega'/gamma}) e^{-2 gamma t}`` is ``E(2 omega')^2``
    and ``exp(2 gamma t cos(2 omega'/gamma)) e^{-2 gamma t}`` is ``|E(2 omega')|^2``.
    """
    sh, ch = math.sinh(p.r), math.cosh(p.r)
    sh2ch2 = sh * sh * ch * ch
    sh4 = sh**4
    sh2 = sh * sh

    e2 = envelope(2.0 * p.omega_prime, p, t)
    e2c = envelope(-2.0 * p.omega_prime, p, t)
    e4 = envelope(4.0 * p.omega_prime, p, t)
    e4c = envelope(-4.0 * p.omega_prime, p, t)

    osc2 = (0.5 * e2 + 0.5 * e2c).real
    osc4 = (0.125 * e4 + 0.125 * e4c).real
    quartic = (
        0.125
        + (e4 + e4c).real / 16.0
        - (e2 * e2 + e2c * e2c + 2.0 * (e2 * e2c)).real / 16.0
    )
    quadratic = 0.125 - (e4 + e4c).real / 16.0

    var_a = (0.75 + osc2 + osc4) * sh2ch2 + quartic * sh4 + quadratic * sh2
    var_b = (0.75 - osc2 + osc4) * sh2ch2 + quartic * sh4 + quadratic * sh2
    return _scalar(var_a), _scalar(var_b)


def mandel_q(p: ModelParams, t, rel_threshold: float = 1e-12):
    """Mandel Q of both modes; NaN where the mean number is below
    ``rel_threshold * sinh^2 r`` (e.g. ``q_b`` at ``t = 0``)."""
    n_a, n_b = mean_numbers(p, t)
    var_a, var_b = number_variances(p, t)
    eps = q_threshold(p.r, rel_threshold)
    return mandel_q_from(var_a, n_a, eps), mandel_q_from(var_b, n_b, eps)


def _squeeze_brackets(p: ModelParams, t):
    free = envelope(-2.0 * p.omega, p, t)
    side = 0.5 * envelope(2.0 * (p.omega_prime - p.omega), p, t) + 0.5 * envelope(
        -2.0 * (p.omega_prime + p.omega), p, t
    )
    amp = math.sinh(p.r) * math.cosh(p.r) * complex(math.cos(p.phi), math.sin(p.phi))
    rot = complex(math.cos(2.0 * p.theta), -math.sin(2.0 * p.theta))
    return ((free + side) * amp).real, ((-free + side) * amp * rot).real


def squeezing_exact(p: ModelParams, t) -> SqueezingCoefficients:
    """Squeezing coefficients ``S = (<dX^2> - 1/4) / (1/4)`` of all four quadratures.

    ``S < 0`` marks a squeezed quadrature; ``s1 + s2 = 4 n`` for each mode.
    """
    n_a, n_b = mean_numbers(p, t)
    term_a, term_b = _squeeze_brackets(p, t)
    return SqueezingCoefficients(
        _scalar(2.0 * n_a + term_a),
        _scalar(2.0 * n_a - term_a),
        _scalar(2.0 * n_b + term_b),
        _scalar(2.0 * n_b - term_b),
    )


def squeezing_large_gamma(p: ModelParams, t, domain: float = 0.1) -> ApproxSqueezing:
    """Cosine-times-Gaussian-decay approximation of :func:`squeezing_exact`.

    Valid when ``omega / gamma`` and ``omega' / gamma`` are small.  Beyond
    ``domain`` the result is still computed, with ``outside_domain`` set and
    an :class:`ApproximationDomainWarning` issued.  Always uses ``phi = theta = 0``
    forms, so nonzero phases are rejected.
    """
    if p.unitary:
        raise UnitaryLimitUnsupported("large-gamma expansion needs a finite gamma")
    if p.phi != 0.0 or p.theta != 0.0:
        raise ValueError("the large-gamma forms are written for phi = theta = 0")
    outside = max(p.omega, p.omega_prime) / p.gamma > domain
    if outside:
        warnings.warn(
            f"max(omega, omega')/gamma = {max(p.omega, p.omega_prime) / p.gamma:.3g} > {domain}",
            ApproximationDomainWarning,
            stacklevel=2,
        )
    t = np.asarray(t, dtype=float)
    g = p.gamma
    w, wp = p.omega, p.omega_prime
    sh, ch = math.sinh(p.r), math.cosh(p.r)

    def damped(freq):
        return np.cos(2.0 * freq * t) * np.exp(-2.0 * freq * freq * t / g)

    rabi = damped(wp)
    side = 0.5 * damped(wp - w) + 0.5 * damped(wp + w)
    free = damped(w)
    pop_a = (1.0 + rabi) * sh * sh
    pop_b = (1.0 - rabi) * sh * sh
    quad_a = (free + side) * sh * ch
    quad_b = (-free + side) * sh * ch
    return ApproxSqueezing(
        _scalar(pop_a + quad_a),
        _scalar(pop_a - quad_a),
        _scalar(pop_b + quad_b),
        _scalar(pop_b - quad_b),
        outside,
    )


def stationary_values(p: ModelParams, rel_tol: float = 1e-12) -> StationaryValues:
    """Long-time limits of the squeezing coefficients under decoherence.

    Generically every coefficient tends to ``sinh^2 r``.  When ``omega' == omega``
    (to ``rel_tol``) one envelope never decays and the limits split into
    ``sinh^2 r +/- sinh r cosh r / 2``; the minus branch is negative, i.e. the
    stationary beam is squeezed, exactly when ``0 < tanh r < 1/2``.
    """
    if p.unitary:
        raise UnitaryLimitUnsupported("no stationary limit without decoherence")
    sh, ch = math.sinh(p.r), math.cosh(p.r)
    generic = sh * sh
    if not math.isclose(p.omega_prime, p.omega, rel_tol=rel_tol):
        return StationaryValues(generic, None, None, False)
    half = 0.5 * sh * ch
    tr = math.tanh(p.r)
    return StationaryValues(generic, generic + half, generic - half, 0.0 < tr < 0.5)


def observables(p: ModelParams, t, rel_threshold: float = 1e-12) -> ObservablePoint:
    """Evaluate every closed-form observable at ``t`` (scalar or array)."""
    n_a, n_b = mean_numbers(p, t)
    var_a, var_b = number_variances(p, t)
    eps = q_threshold(p.r, rel_threshold)
    s = squeezing_exact(p, t)
    return ObservablePoint(
        t=_scalar(np.asarray(t, dtype=float)),
        n_a=n_a,
        n_b=n_b,
        var_a=var_a,
        var_b=var_b,
        q_a=mandel_q_from(var_a, n_a, eps),
        q_b=mandel_q_from(var_b, n_b, eps),
        s1_a=s.s1_a,
        s2_a=s.s2_a,
        s1_b=s.s1_b,
        s2_b=s.s2_b,
    )
