"""Container for the photon/atom observables and the shared Mandel Q rule."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

__all__ = ["ObservablePoint", "OBSERVABLE_NAMES", "CORE_NAMES", "mandel_q_from", "q_threshold"]

#: Observables compared by the verification harness, in report order.
OBSERVABLE_NAMES = ("n_a", "n_b", "var_a", "var_b", "q_a", "q_b", "s1_a", "s2_a", "s1_b", "s2_b")
#: The subset that is always defined (no Mandel Q).
CORE_NAMES = ("n_a", "n_b", "var_a", "var_b", "s1_a", "s2_a", "s1_b", "s2_b")


def q_threshold(r: float, rel: float = 1e-12) -> float:
    """Occupation below which Mandel Q is reported as undefined."""
    return rel * np.sinh(r) ** 2


def mandel_q_from(var, n, threshold: float):
    """``(var - n) / n``, NaN wherever ``n <= threshold``.

    NaN is the package's UNDEFINED marker; the 0/0 limit at ``n -> 0``
    depends on how it is approached and is not guessed.
    """
    var = np.asarray(var, dtype=float)
    n = np.asarray(n, dtype=float)
    ok = n > threshold
    safe = np.where(ok, n, 1.0)
    q = np.where(ok, (var - n) / safe, np.nan)
    return q if q.ndim else float(q)


@dataclass(frozen=True)
class ObservablePoint:
    """Means, variances, Mandel Q and squeezing coefficients at time(s) ``t``.

    Fields are floats for a single time or equally shaped arrays for a grid.
    ``q_a``/``q_b`` hold NaN where undefined.
    """

    t: np.ndarray
    n_a: np.ndarray
    n_b: np.ndarray
    var_a: np.ndarray
    var_b: np.ndarray
    q_a: np.ndarray
    q_b: np.ndarray
    s1_a: np.ndarray
    s2_a: np.ndarray
    s1_b: np.ndarray
    s2_b: np.ndarray

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def stack(cls, points) -> "ObservablePoint":
        """Combine single-time points into one grid-valued point."""
        points = list(points)
        return cls(**{f.name: np.array([getattr(q, f.name) for q in points]) for f in fields(cls)})

    def max_abs_diff(self, other: "ObservablePoint", names=OBSERVABLE_NAMES) -> dict:
        """Largest absolute discrepancy per observable.

        Cells that are NaN on both sides are ignored; NaN on one side only
        counts as an infinite discrepancy.
        """
        out = {}
        for name in names:
            x = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            y = np.atleast_1d(np.asarray(getattr(other, name), dtype=float))
            both = np.isnan(x) & np.isnan(y)
            one = np.isnan(x) ^ np.isnan(y)
            d = np.where(both, 0.0, np.abs(x - y))
            d = np.where(one, np.inf, d)
            out[name] = float(np.max(d)) if d.size else 0.0
        return out
