"""Figure presets, the verification harness, and the parameter scans behind the CLI."""

from __future__ import annotations

import csv
import math
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic
from .errors import UnknownPreset
from .fock import fock_series
from .heisenberg import DEFAULT_TAIL, poisson_series
from .observables import OBSERVABLE_NAMES, ObservablePoint
from .params import UNITARY_LIMIT, ModelParams, TimeGrid, decay_rate, validate_params

__all__ = [
    "FigurePreset",
    "PRESETS",
    "get_preset",
    "figure_columns",
    "write_csv",
    "read_csv",
    "OracleComparison",
    "VerifyReport",
    "run_verify",
    "ScenarioSummary",
    "experiment_params",
    "scenario_experiment",
    "sensitivity_columns",
]


def _gamma_label(gamma: float) -> str:
    return "inf" if math.isinf(gamma) else f"{gamma:g}"


@dataclass(frozen=True)
class FigurePreset:
    """Parameter sets and default grid for one reference figure.

    ``curves`` maps a column label to the parameters of that curve.
    """

    id: str
    observable: str
    curves: tuple
    grid: TimeGrid

    def params(self) -> list[ModelParams]:
        return [p for _, p in self.curves]


def _gamma_curves(obs: str, base: ModelParams, gammas) -> tuple:
    return tuple((f"{obs}_gamma_{_gamma_label(g)}", validate_params(base.with_(gamma=g))) for g in gammas)


def _delta_curves(obs: str, base: ModelParams, deltas) -> tuple:
    return tuple(
        (f"{obs}_delta_{d:g}", validate_params(base.with_(omega_prime=base.omega_prime + d))) for d in deltas
    )


# omega does not enter N or Q; figs 1-2 fix it at 1 for the squeezing columns of `verify`
_FIG12 = ModelParams(omega=1.0, omega_prime=1.0, r=2.0)
_FIG3 = ModelParams(omega=0.1, omega_prime=math.pi, r=0.3)
_FIG4 = ModelParams(omega=10.0, omega_prime=10.0, gamma=100.0, r=0.3)
_FIG5 = ModelParams(omega=10.0, omega_prime=10.0, gamma=100.0, r=0.4)

FIG5_DELTAS = (0.0, 1e-7, 2e-7, 3e-7)

PRESETS = {
    "fig1": FigurePreset("fig1", "q_a", _gamma_curves("q_a", _FIG12, (UNITARY_LIMIT, 100.0)), TimeGrid(0.0, 10.0)),
    "fig2": FigurePreset("fig2", "q_b", _gamma_curves("q_b", _FIG12, (UNITARY_LIMIT, 100.0)), TimeGrid(0.0, 10.0)),
    "fig3": FigurePreset(
        "fig3", "s2_b", _gamma_curves("s2_b", _FIG3, (UNITARY_LIMIT, 1e3, 1e2)), TimeGrid(0.0, 100.0)
    ),
    "fig4": FigurePreset("fig4", "s2_b", _gamma_curves("s2_b", _FIG4, (100.0,)), TimeGrid(0.0, 20.0)),
    "fig5": FigurePreset(
        "fig5", "s2_b", _delta_curves("s2_b", _FIG5, FIG5_DELTAS), TimeGrid(1e-2, 1e8, 2000, log=True)
    ),
}


def get_preset(preset_id: str) -> FigurePreset:
    try:
        return PRESETS[preset_id]
    except KeyError:
        raise UnknownPreset(f"unknown preset {preset_id!r}; choose from {sorted(PRESETS)}") from None


def figure_columns(preset: FigurePreset, times=None) -> tuple[np.ndarray, dict]:
    """Evaluate every curve of ``preset`` on ``times`` (default: the preset grid)."""
    t = preset.grid.times() if times is None else np.asarray(times, dtype=float)
    cols = {}
    for label, p in preset.curves:
        cols[label] = np.asarray(getattr(analytic.observables(p, t), preset.observable), dtype=float)
    return t, cols


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else f"{x:.14e}"


def write_csv(path, t, columns: dict) -> Path:
    """Write ``t`` plus named columns; 15 significant digits, NaN as an empty cell."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", *columns])
        data = [np.asarray(c, dtype=float) for c in columns.values()]
        for i, ti in enumerate(np.asarray(t, dtype=float)):
            w.writerow([_fmt(ti), *(_fmt(c[i]) for c in data)])
    return path


def read_csv(path) -> tuple[np.ndarray, dict]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    table = np.array([[float(c) if c else np.nan for c in row] for row in body], dtype=float).reshape(
        len(body), len(header)
    )
    return table[:, 0], {name: table[:, i] for i, name in enumerate(header) if i}


def plot_columns(path, t, columns: dict, log_t: bool = False, ylabel: str = "") -> Path:
    """Line plot of CSV-shaped data; matplotlib is imported only here."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, col in columns.items():
        ax.plot(t, col, label=name, lw=1)
    if log_t:
        ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


# --------------------------------------------------------------------------- verify


@dataclass
class OracleComparison:
    oracle: str
    tolerance: float
    max_abs: dict = field(default_factory=dict)
    max_rel: dict = field(default_factory=dict)
    budget: float = 0.0
    wall_time: float = 0.0
    hygiene_ok: bool = True
    skipped: str | None = None

    @property
    def worst(self) -> float:
        return max(self.max_abs.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.skipped is None and self.hygiene_ok and self.worst <= self.tolerance


@dataclass
class VerifyReport:
    """Analytic-versus-oracle discrepancies for one parameter set."""

    params: ModelParams
    n_times: int
    analytic_time: float
    comparisons: list

    @property
    def passed(self) -> bool:
        # fails only on an exceeded tolerance or bad density-matrix hygiene
        return all(c.passed for c in self.comparisons if c.skipped is None)

    def format(self) -> str:
        p = self.params
        lines = [
            f"params: omega={p.omega:g} omega_prime={p.omega_prime:g} gamma={_gamma_label(p.gamma)} "
            f"r={p.r:g} phi={p.phi:g} theta={p.theta:g}  ({self.n_times} times, analytic {self.analytic_time:.3f}s)"
        ]
        for c in self.comparisons:
            if c.skipped:
                lines.append(f"  {c.oracle}: SKIPPED ({c.skipped})")
                continue
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"  {c.oracle}: {status}  max|d|={c.worst:.3e} tol={c.tolerance:.1e} "
                f"budget={c.budget:.1e} hygiene={'ok' if c.hygiene_ok else 'BAD'} time={c.wall_time:.2f}s"
            )
            for name in c.max_abs:
                lines.append(f"    {name:6s} abs={c.max_abs[name]:.3e} rel={c.max_rel[name]:.3e}")
        if all(c.skipped for c in self.comparisons):
            lines.append("  no oracle applies to this parameter set; nothing was compared")
        lines.append(f"  overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _compare(ref: ObservablePoint, other: ObservablePoint, comp: OracleComparison) -> None:
    comp.max_abs = ref.max_abs_diff(other, OBSERVABLE_NAMES)
    for name in OBSERVABLE_NAMES:
        scale = np.nanmax(np.abs(np.atleast_1d(getattr(ref, name))), initial=0.0)
        comp.max_rel[name] = comp.max_abs[name] / scale if scale > 0 else comp.max_abs[name]


def run_verify(
    p: ModelParams,
    times,
    oracles=("heisenberg", "fock"),
    tol_heisenberg: float = 1e-10,
    tol_fock: float = 1e-8,
    n_max: int = 24,
    tail: float = DEFAULT_TAIL,
    fock_r_max: float = 0.5,
) -> VerifyReport:
    """Compare the closed forms with the requested oracles on ``times``.

    The branch-sum oracle has no gamma = infinity form and is skipped there;
    the Fock oracle then runs plain unitary evolution.  The Fock oracle is
    skipped for ``r > fock_r_max``, where ``n_max`` cannot hold the state.
    """
    p = validate_params(p)
    times = np.asarray(times, dtype=float)
    t0 = time.perf_counter()
    ref = analytic.observables(p, times)
    report = VerifyReport(p, times.size, time.perf_counter() - t0, [])

    for name in oracles:
        if name == "heisenberg":
            comp = OracleComparison("heisenberg", tol_heisenberg)
            if p.unitary:
                comp.skipped = "branch sums need finite gamma"
                warnings.warn("heisenberg oracle skipped at gamma = inf", stacklevel=2)
            else:
                t0 = time.perf_counter()
                pts, comp.budget = poisson_series(p, times, target_tail=tail)
                comp.wall_time = time.perf_counter() - t0
                _compare(ref, pts, comp)
        elif name == "fock":
            comp = OracleComparison("fock", tol_fock)
            if p.r > fock_r_max:
                comp.skipped = f"r={p.r:g} > {fock_r_max:g} needs impractical n_max"
                warnings.warn(f"fock oracle skipped: {comp.skipped}", stacklevel=2)
            else:
                t0 = time.perf_counter()
                pts, checks, budget = fock_series(p, times, n_max=n_max, target_tail=tail)
                comp.wall_time = time.perf_counter() - t0
                comp.budget = budget + tail
                comp.hygiene_ok = all(c.ok() for c in checks)
                _compare(ref, pts, comp)
        else:
            raise ValueError(f"unknown oracle {name!r}")
        report.comparisons.append(comp)
    return report


# --------------------------------------------------------------------------- experiment scenario

#: Quoted experimental values: omega = 300 kHz, Omega = 60 kHz, N = 1e6, gamma = 1e5 MHz, r = 1.
EXPERIMENT = {"omega_khz": 300.0, "coupling_khz": 60.0, "atoms": 1e6, "gamma_mhz": 1e5, "r": 1.0}
QUOTED_FREEZE_S = 100e-6
QUOTED_SQUEEZE_LOSS_S = 0.15


def experiment_params(ordinary: bool = False) -> ModelParams:
    """Experimental parameters in rad/ms (angular reading) or with a 2 pi factor."""
    scale = 2.0 * math.pi if ordinary else 1.0
    e = EXPERIMENT
    return validate_params(
        ModelParams(
            omega=scale * e["omega_khz"],
            omega_prime=scale * math.sqrt(e["atoms"]) * e["coupling_khz"],
            gamma=e["gamma_mhz"] * 1e3,
            r=e["r"],
        )
    )


def _time_below(nu: float, gamma: float, level: float) -> float:
    # time in the model's unit at which |E(nu, t)| = level
    return -math.log(level) / decay_rate(nu, gamma)


@dataclass(frozen=True)
class ScenarioSummary:
    """Envelope timescales (seconds) for both readings of the quoted frequencies."""

    freeze_angular_s: float
    freeze_ordinary_s: float
    squeeze_loss_angular_s: float
    squeeze_loss_ordinary_s: float
    slowest_squeeze_rate_angular: float
    slowest_squeeze_rate_ordinary: float
    level: float = 1e-3

    @property
    def squeeze_loss_discrepant(self) -> bool:
        """True when the angular reading, the one that reproduces the quoted
        freeze time, misses the quoted squeezing-loss time by more than 2x."""
        return not 0.5 <= self.squeeze_loss_angular_s / QUOTED_SQUEEZE_LOSS_S <= 2.0

    def format(self) -> str:
        lines = [
            f"Rabi envelope |E(2 omega', t)| < {self.level:g}:",
            f"  angular reading : {self.freeze_angular_s * 1e6:.2f} us",
            f"  ordinary reading: {self.freeze_ordinary_s * 1e6:.3f} us",
            f"  quoted          : frozen after {QUOTED_FREEZE_S * 1e6:.0f} us",
            f"all squeezing envelopes < {self.level:g} (slowest is E(-2 omega, t)):",
            f"  angular reading : {self.squeeze_loss_angular_s:.4g} s (rate {self.slowest_squeeze_rate_angular:.4g} 1/s,"
            f" 1/e time {1 / self.slowest_squeeze_rate_angular:.3g} s)",
            f"  ordinary reading: {self.squeeze_loss_ordinary_s:.4g} s (rate {self.slowest_squeeze_rate_ordinary:.4g} 1/s,"
            f" 1/e time {1 / self.slowest_squeeze_rate_ordinary:.3g} s)",
            f"  quoted          : about {QUOTED_SQUEEZE_LOSS_S:g} s",
        ]
        if self.squeeze_loss_discrepant:
            lines.append(
                "  NOTE: the quoted squeezing-loss time is not reproduced by the envelope rates. The angular "
                "reading matches the freeze time but not the loss time; the ordinary reading comes closer on "
                "the loss time but puts the freeze at a few us. Reported as computed, not fitted."
            )
        return "\n".join(lines)


def _squeeze_loss_ms(p: ModelParams, level: float) -> tuple[float, float]:
    nus = (-2.0 * p.omega, 2.0 * (p.omega_prime - p.omega), -2.0 * (p.omega_prime + p.omega), 2.0 * p.omega_prime)
    rates = [decay_rate(nu, p.gamma) for nu in nus]
    slowest = min(rates)
    return -math.log(level) / slowest, slowest


def scenario_experiment(times_s=None, level: float = 1e-3):
    """N_b and S_2^(b) for the experimental parameters, plus envelope timescales.

    Model units are rad/ms and ms; returned times are seconds.  Returns
    ``(t_s, columns, ScenarioSummary)``.
    """
    if times_s is None:
        times_s = TimeGrid(1e-7, 1.0, 2000, log=True).times()
    t_s = np.asarray(times_s, dtype=float)
    p = experiment_params()
    obs = analytic.observables(p, t_s * 1e3)
    columns = {"n_b": np.asarray(obs.n_b), "s2_b": np.asarray(obs.s2_b)}

    po = experiment_params(ordinary=True)
    loss_a, rate_a = _squeeze_loss_ms(p, level)
    loss_o, rate_o = _squeeze_loss_ms(po, level)
    summary = ScenarioSummary(
        freeze_angular_s=_time_below(2 * p.omega_prime, p.gamma, level) * 1e-3,
        freeze_ordinary_s=_time_below(2 * po.omega_prime, po.gamma, level) * 1e-3,
        squeeze_loss_angular_s=loss_a * 1e-3,
        squeeze_loss_ordinary_s=loss_o * 1e-3,
        slowest_squeeze_rate_angular=rate_a * 1e3,
        slowest_squeeze_rate_ordinary=rate_o * 1e3,
        level=level,
    )
    return t_s, columns, summary


def sensitivity_columns(base: ModelParams, deltas, times) -> tuple[np.ndarray, dict]:
    """``S_2^(b)(t)`` for ``omega' = base.omega_prime + delta``, one column per delta."""
    base = validate_params(base)
    if base.unitary:
        raise ValueError("sensitivity scans need a finite gamma")
    t = np.asarray(times, dtype=float)
    cols = {}
    for d in deltas:
        p = validate_params(base.with_(omega_prime=base.omega_prime + d))
        cols[f"s2_b_delta_{d:g}"] = np.asarray(analytic.squeezing_exact(p, t).s2_b, dtype=float)
    return t, cols
