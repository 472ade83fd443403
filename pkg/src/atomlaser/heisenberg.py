"""Branch-sum oracle: observables as explicit Poisson sums over unitary steps.

After ``k`` unitary steps of length ``1/gamma`` the mode operators are a
passive two-mode rotation of the initial ones.  The initial state is a
zero-mean Gaussian, so every branch moment follows from second-order
contractions (Wick).  The branch moments are then averaged with Poisson
weights of mean ``gamma t`` term by term, never through the closed-form
resummation used in :mod:`atomlaser.analytic`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import UnitaryLimitUnsupported, WindowOverflow
from .observables import ObservablePoint, mandel_q_from, q_threshold
from .params import GaussianMoments, ModelParams, squeezed_vacuum_moments

__all__ = [
    "BranchCoefficients",
    "PoissonTruncation",
    "WickTable",
    "branch_coefficients",
    "branch_moments",
    "poisson_window",
    "poisson_weights",
    "poisson_observables",
    "poisson_series",
]

DEFAULT_TAIL = 1e-14
DEFAULT_MAX_K = 10**7


class BranchCoefficients(NamedTuple):
    """``a(k) = mu_a a + nu_a b`` and ``b(k) = mu_b b + nu_b a``.

    Fields are complex scalars or arrays over ``k``.
    """

    k: np.ndarray
    mu_a: np.ndarray
    nu_a: np.ndarray
    mu_b: np.ndarray
    nu_b: np.ndarray


def branch_coefficients(p: ModelParams, k) -> BranchCoefficients:
    """Heisenberg-picture rotation after ``k`` steps of ``exp(-i H0 / gamma)``."""
    if p.unitary:
        raise UnitaryLimitUnsupported("branch sums need a finite gamma")
    k = np.asarray(k)
    if np.any(k < 0):
        raise ValueError("k must be >= 0")
    angle = k * (p.omega_prime / p.gamma)
    free = k * (p.omega / p.gamma)
    c, s = np.cos(angle), np.sin(angle)
    mu = c * np.exp(-1j * free)
    nu_a = -1j * s * np.exp(1j * (p.theta - free))
    nu_b = -1j * s * np.exp(-1j * (p.theta + free))
    return BranchCoefficients(k, mu, nu_a, mu, nu_b)


@dataclass(frozen=True)
class WickTable:
    """Second-order contractions of the initial two-mode state, modes ordered (a, b).

    ``normal[i, j] = <x_i^dagger x_j>`` and ``anomalous[i, j] = <x_i x_j>``.
    """

    normal: np.ndarray
    anomalous: np.ndarray

    @classmethod
    def from_moments(cls, m: GaussianMoments) -> "WickTable":
        normal = np.array([[m.n_a0, 0.0], [0.0, 0.0]], dtype=complex)
        anomalous = np.array([[m.a2_0, 0.0], [0.0, 0.0]], dtype=complex)
        return cls(normal, anomalous)

    def mode_moments(self, u: np.ndarray):
        """``<y^dagger y>``, ``<y^2>`` and ``<(y^dagger y)^2>`` for ``y = u . x``.

        ``u`` has shape ``(..., 2)``.  The fourth moment uses
        ``<y+ y y+ y> = <y+ y>^2 + |<y y>|^2 + <y+ y><y y+>`` with
        ``<y y+> = <y+ y> + |u|^2``.
        """
        uc = np.conj(u)
        n = np.einsum("...i,ij,...j->...", uc, self.normal, u).real
        m = np.einsum("...i,ij,...j->...", u, self.anomalous, u)
        norm = np.einsum("...i,...i->...", uc, u).real
        n2 = n * n + (m * np.conj(m)).real + n * (n + norm)
        return n, m, n2


class BranchMoments(NamedTuple):
    n_a: np.ndarray
    n_b: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    n2_a: np.ndarray
    n2_b: np.ndarray


def branch_moments(c: BranchCoefficients, m: GaussianMoments | WickTable) -> BranchMoments:
    """Per-branch ``<a+a>, <b+b>, <a^2>, <b^2>, <(a+a)^2>, <(b+b)^2>``."""
    table = m if isinstance(m, WickTable) else WickTable.from_moments(m)
    ua = np.stack(np.broadcast_arrays(c.mu_a, c.nu_a), axis=-1)
    ub = np.stack(np.broadcast_arrays(c.nu_b, c.mu_b), axis=-1)
    n_a, a2, n2_a = table.mode_moments(ua)
    n_b, b2, n2_b = table.mode_moments(ub)
    return BranchMoments(n_a, n_b, a2, b2, n2_a, n2_b)


@dataclass(frozen=True)
class PoissonTruncation:
    """Window ``[k_lo, k_hi]`` of step counts kept in a Poisson sum.

    ``tail_mass`` is the probability outside the window; ``tail_bound`` is
    the Chernoff bound used to pick it.
    """

    mean: float
    k_lo: int
    k_hi: int
    tail_mass: float
    tail_bound: float
    target_tail: float = DEFAULT_TAIL

    @property
    def half_width(self) -> float:
        """Window half-width in units of ``sqrt(mean)``."""
        if self.mean == 0:
            return 0.0
        return max(self.mean - self.k_lo, self.k_hi - self.mean) / math.sqrt(self.mean)

    def ks(self) -> np.ndarray:
        return np.arange(self.k_lo, self.k_hi + 1)


def _log_chernoff(mean: float, k: float) -> float:
    # log of exp(-mean) (e mean / k)^k, bounding P(X >= k) for k > mean and P(X <= k) for k < mean
    if k == 0:
        return -mean
    return -mean + k * (1.0 + math.log(mean) - math.log(k))


def poisson_window(
    mean: float, target_tail: float = DEFAULT_TAIL, max_k: int = DEFAULT_MAX_K, _exact_tail: bool = True
) -> PoissonTruncation:
    """Smallest Chernoff-certified window with excluded mass <= ``target_tail``."""
    if mean < 0:
        raise ValueError("mean must be >= 0")
    if mean == 0:
        return PoissonTruncation(0.0, 0, 0, 0.0, 0.0, target_tail)
    log_half = math.log(0.5 * target_tail)

    # upper: smallest k_hi with P(X >= k_hi + 1) certified small
    lo, hi = math.floor(mean) + 1, math.floor(mean) + 2
    while _log_chernoff(mean, hi) > log_half:
        hi = lo + 2 * (hi - lo) + 1
        if hi > 4 * max_k + 64:
            break
    while lo < hi:
        mid = (lo + hi) // 2
        if _log_chernoff(mean, mid) <= log_half:
            hi = mid
        else:
            lo = mid + 1
    k_hi = lo - 1
    if k_hi > max_k:
        raise WindowOverflow(f"Poisson window reaches k={k_hi} > cap {max_k} (gamma t = {mean:g})")

    # lower: largest k_lo with P(X <= k_lo - 1) certified small
    bound_lo = 0.0
    if _log_chernoff(mean, 0) > log_half:
        k_lo = 0
    else:
        lo, hi = 0, math.ceil(mean) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if _log_chernoff(mean, mid) <= log_half:
                lo = mid
            else:
                hi = mid - 1
        k_lo = lo + 1
        bound_lo = math.exp(_log_chernoff(mean, lo))
    bound_hi = math.exp(_log_chernoff(mean, k_hi + 1))
    if not _exact_tail:
        return PoissonTruncation(float(mean), int(k_lo), int(k_hi), math.nan, bound_lo + bound_hi, target_tail)
    _, tail = _pmf_window(float(mean), k_lo, k_hi)
    return PoissonTruncation(float(mean), int(k_lo), int(k_hi), tail, bound_lo + bound_hi, target_tail)


def _pmf_window(mean: float, k_lo: int, k_hi: int):
    """Poisson pmf on ``[k_lo, k_hi]`` and the exact mass outside it.

    ``exp(k log mean - mean - lgamma(k+1))`` loses ~1e-12 relative accuracy
    once ``mean`` is in the thousands.  Instead, ratios to the mode are built
    by the recurrence ``p_{k+1} = p_k mean / (k+1)`` over a window wide enough
    that the remainder is below 1e-30, and normalised by their exact sum.
    """
    if mean == 0:
        return np.ones(k_hi - k_lo + 1), 0.0
    wide = poisson_window_bounds(mean, 1e-30)
    lo, hi = min(wide[0], k_lo), max(wide[1], k_hi)
    mode = min(max(int(math.floor(mean)), lo), hi)
    up = np.cumprod(mean / np.arange(mode + 1, hi + 1, dtype=float))
    down = np.cumprod(np.arange(mode, lo, -1, dtype=float) / mean)[::-1]
    rel = np.concatenate([down, [1.0], up])
    total = math.fsum(rel.tolist())
    inside = rel[k_lo - lo : k_hi - lo + 1]
    outside = math.fsum(rel[: k_lo - lo].tolist()) + math.fsum(rel[k_hi - lo + 1 :].tolist())
    return inside / total, outside / total


def poisson_window_bounds(mean: float, target_tail: float):
    """Chernoff-certified ``(k_lo, k_hi)`` without the overflow check."""
    t = poisson_window(mean, target_tail, max_k=2**62, _exact_tail=False)
    return t.k_lo, t.k_hi


def poisson_weights(trunc: PoissonTruncation) -> np.ndarray:
    """Poisson probabilities ``mean^k e^{-mean} / k!`` on the window."""
    return _pmf_window(trunc.mean, trunc.k_lo, trunc.k_hi)[0]


def _fsum(x) -> float:
    return math.fsum(np.asarray(x, dtype=float).tolist())


def _fsum_c(x) -> complex:
    x = np.asarray(x)
    return complex(_fsum(x.real), _fsum(x.imag))


def poisson_observables(
    p: ModelParams,
    t: float,
    target_tail: float = DEFAULT_TAIL,
    max_k: int = DEFAULT_MAX_K,
    table: WickTable | None = None,
    rel_threshold: float = 1e-12,
):
    """Observables at one time from the truncated Poisson branch sum.

    Returns ``(ObservablePoint, PoissonTruncation)``.  Sums run in ascending
    ``k`` with exactly rounded accumulation, so results are bit-stable.
    """
    if p.unitary:
        raise UnitaryLimitUnsupported("branch sums need a finite gamma")
    if t < 0:
        raise ValueError("t must be >= 0")
    trunc = poisson_window(p.gamma * t, target_tail, max_k)
    if table is None:
        table = WickTable.from_moments(squeezed_vacuum_moments(p.r, p.phi))
    w = poisson_weights(trunc)
    bm = branch_moments(branch_coefficients(p, trunc.ks()), table)

    n_a = _fsum(w * bm.n_a)
    n_b = _fsum(w * bm.n_b)
    a2 = _fsum_c(w * bm.a2)
    b2 = _fsum_c(w * bm.b2)
    var_a = _fsum(w * bm.n2_a) - n_a * n_a
    var_b = _fsum(w * bm.n2_b) - n_b * n_b
    eps = q_threshold(p.r, rel_threshold)
    point = ObservablePoint(
        t=float(t),
        n_a=n_a,
        n_b=n_b,
        var_a=var_a,
        var_b=var_b,
        q_a=mandel_q_from(var_a, n_a, eps),
        q_b=mandel_q_from(var_b, n_b, eps),
        s1_a=2.0 * n_a + 2.0 * a2.real,
        s2_a=2.0 * n_a - 2.0 * a2.real,
        s1_b=2.0 * n_b + 2.0 * b2.real,
        s2_b=2.0 * n_b - 2.0 * b2.real,
    )
    return point, trunc


def poisson_series(p: ModelParams, times, **kwargs):
    """:func:`poisson_observables` over a grid; returns ``(ObservablePoint, max tail mass)``."""
    table = WickTable.from_moments(squeezed_vacuum_moments(p.r, p.phi))
    points, tails = [], []
    for t in np.asarray(times, dtype=float):
        pt, tr = poisson_observables(p, float(t), table=table, **kwargs)
        points.append(pt)
        tails.append(tr.tail_mass)
    return ObservablePoint.stack(points), max(tails, default=0.0)
