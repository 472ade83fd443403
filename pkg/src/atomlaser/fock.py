"""Brute-force density-matrix oracle in a truncated two-mode Fock space.

The basis holds all states ``|n_a, n_b>`` with total excitation
``N = n_a + n_b <= n_max``, ordered by ``N`` and then by ``j = n_b``.  The
Bogoliubov Hamiltonian conserves ``N``, so it splits into ``(N+1) x (N+1)``
blocks and truncation causes no leakage during evolution; the only error
is the norm the initial squeezed vacuum loses beyond ``n_max``.

Evolution applies the Kraus sum ``sum_k w_k U^k rho U^-k`` literally, with
``U^k`` built from block eigenvalues as ``exp(-i k lambda / gamma)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse

from .errors import InsufficientTruncation, TruncationTooLarge, UnitaryLimitUnsupported
from .heisenberg import DEFAULT_MAX_K, DEFAULT_TAIL, PoissonTruncation, poisson_weights, poisson_window
from .observables import ObservablePoint, mandel_q_from, q_threshold
from .params import ModelParams

__all__ = [
    "BlockHamiltonian",
    "TruncatedDensityMatrix",
    "basis_index",
    "build_hamiltonian",
    "squeezed_vacuum_fock",
    "initial_density",
    "kraus_evolve",
    "unitary_evolve",
    "observables_from_density",
    "DensityChecks",
    "density_checks",
    "fock_series",
]

DEFAULT_MAX_DIM = 20_000
_K_CHUNK = 512


def basis_index(n_total: int, j: int) -> int:
    """Position of ``|n_a = N - j, n_b = j>`` in the ordered basis."""
    return n_total * (n_total + 1) // 2 + j


def _dimension(n_max: int) -> int:
    return (n_max + 1) * (n_max + 2) // 2


@dataclass(frozen=True)
class BlockHamiltonian:
    """``H0`` split into fixed-``N`` blocks with their eigendecompositions."""

    n_max: int
    blocks: tuple
    eigenvalues: tuple
    eigenvectors: tuple

    @property
    def dim(self) -> int:
        return _dimension(self.n_max)

    @cached_property
    def spectrum(self) -> np.ndarray:
        """All eigenvalues in basis order (block by block)."""
        return np.concatenate(self.eigenvalues)

    @cached_property
    def eigenbasis(self) -> np.ndarray:
        """Block-diagonal unitary whose columns are eigenvectors."""
        v = np.zeros((self.dim, self.dim), dtype=complex)
        for n, vecs in enumerate(self.eigenvectors):
            s = basis_index(n, 0)
            v[s : s + n + 1, s : s + n + 1] = vecs
        return v

    def dense(self) -> np.ndarray:
        h = np.zeros((self.dim, self.dim), dtype=complex)
        for n, block in enumerate(self.blocks):
            s = basis_index(n, 0)
            h[s : s + n + 1, s : s + n + 1] = block
        return h


def build_hamiltonian(p: ModelParams, n_max: int, max_dim: int = DEFAULT_MAX_DIM) -> BlockHamiltonian:
    """Blocks of ``omega N + omega' (e^{-i theta} a b^dagger + e^{i theta} a^dagger b)``."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if _dimension(n_max) > max_dim:
        raise TruncationTooLarge(f"dimension {_dimension(n_max)} exceeds cap {max_dim}")
    hop = p.omega_prime * complex(math.cos(p.theta), -math.sin(p.theta))
    blocks, vals, vecs = [], [], []
    for n in range(n_max + 1):
        h = np.diag(np.full(n + 1, p.omega * n, dtype=complex))
        j = np.arange(n)
        amp = hop * np.sqrt((n - j) * (j + 1.0))
        # a b^dagger takes |n-j, j> to |n-j-1, j+1>
        h[j + 1, j] = amp
        h[j, j + 1] = np.conj(amp)
        lam, v = np.linalg.eigh(h)
        blocks.append(h)
        vals.append(lam)
        vecs.append(v)
    return BlockHamiltonian(n_max, tuple(blocks), tuple(vals), tuple(vecs))


@dataclass(frozen=True)
class TruncatedDensityMatrix:
    """Two-mode density matrix on the truncated basis.

    ``trace_deficit`` is ``1 - Tr(rho)``: norm already lost to the initial
    truncation plus any Poisson tail dropped during evolution.
    """

    n_max: int
    entries: np.ndarray

    @property
    def trace_deficit(self) -> float:
        return 1.0 - float(np.trace(self.entries).real)


def squeezed_vacuum_fock(r: float, phi: float, n_max: int, max_budget: float = 1e-10):
    """Squeezed-vacuum photon amplitudes up to ``n_max`` photons.

    ``c_{2m} = (e^{i phi} tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r)``,
    the sign choice that gives ``<a^2> = +e^{i phi} sinh r cosh r``.

    Returns ``(amplitudes, truncation_budget)`` where the budget is the
    discarded norm ``1 - sum |c|^2``.

    Raises:
        InsufficientTruncation: if the budget exceeds ``max_budget``.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    amps = np.zeros(n_max + 1, dtype=complex)
    z = complex(math.cos(phi), math.sin(phi)) * math.tanh(r)
    c = 1.0 / math.sqrt(math.cosh(r)) + 0j
    budget = 0.0
    m = 0
    # dropped norm summed directly, not as 1 - sum|c|^2, to keep it exact near 0
    while m < 1_000_000:
        if 2 * m <= n_max:
            amps[2 * m] = c
        else:
            term = abs(c) ** 2
            budget += term
            if term <= 1e-17 * budget or term == 0.0:
                break
        c = c * z * math.sqrt((2 * m + 1) * (2 * m + 2)) / (2.0 * (m + 1))
        m += 1
    if budget > max_budget:
        raise InsufficientTruncation(f"n_max={n_max} drops norm {budget:.3g} > {max_budget:.3g} at r={r}")
    return amps, budget


def initial_density(r: float, phi: float, n_max: int, max_budget: float = 1e-10):
    """``|xi><xi| (x) |0><0|`` on the truncated basis, with its truncation budget."""
    amps, budget = squeezed_vacuum_fock(r, phi, n_max, max_budget)
    psi = np.zeros(_dimension(n_max), dtype=complex)
    for n in range(n_max + 1):
        psi[basis_index(n, 0)] = amps[n]
    return TruncatedDensityMatrix(n_max, np.outer(psi, psi.conj())), budget


def _phase_weight_matrix(lam: np.ndarray, ks: np.ndarray, w: np.ndarray, gamma: float) -> np.ndarray:
    # sum_k w_k exp(-i k lam_i / gamma) exp(+i k lam_j / gamma), k chunks in ascending order
    out = np.zeros((lam.size, lam.size), dtype=complex)
    scaled = lam / gamma
    for start in range(0, ks.size, _K_CHUNK):
        k = ks[start : start + _K_CHUNK].astype(float)
        ph = np.exp(-1j * np.outer(k, scaled))
        out += (ph.T * w[start : start + _K_CHUNK]) @ ph.conj()
    return out


def kraus_evolve(
    h: BlockHamiltonian,
    rho0: TruncatedDensityMatrix,
    p: ModelParams,
    t: float,
    target_tail: float = DEFAULT_TAIL,
    max_k: int = DEFAULT_MAX_K,
):
    """Milburn evolution by explicit Poisson-weighted Kraus sum.

    Returns ``(rho_t, PoissonTruncation)``.
    """
    if p.unitary:
        raise UnitaryLimitUnsupported("use unitary_evolve for gamma = UNITARY_LIMIT")
    if t < 0:
        raise ValueError("t must be >= 0")
    trunc: PoissonTruncation = poisson_window(p.gamma * t, target_tail, max_k)
    if trunc.mean == 0:
        return rho0, trunc
    v = h.eigenbasis
    rho_eig = v.conj().T @ rho0.entries @ v
    phases = _phase_weight_matrix(h.spectrum, trunc.ks(), poisson_weights(trunc), p.gamma)
    rho_t = v @ (phases * rho_eig) @ v.conj().T
    return TruncatedDensityMatrix(rho0.n_max, rho_t), trunc


def unitary_evolve(h: BlockHamiltonian, rho0: TruncatedDensityMatrix, t: float) -> TruncatedDensityMatrix:
    """Von Neumann evolution ``e^{-i H0 t} rho e^{i H0 t}`` via spectral phases."""
    if t < 0:
        raise ValueError("t must be >= 0")
    v = h.eigenbasis
    u = (v * np.exp(-1j * h.spectrum * t)) @ v.conj().T
    return TruncatedDensityMatrix(rho0.n_max, u @ rho0.entries @ u.conj().T)


class _Ladder:
    """Sparse lowering and number operators on the truncated basis (cached per ``n_max``)."""

    _cache: dict = {}

    def __new__(cls, n_max: int):
        if n_max not in cls._cache:
            inst = super().__new__(cls)
            inst._build(n_max)
            cls._cache[n_max] = inst
        return cls._cache[n_max]

    def _build(self, n_max: int) -> None:
        d = _dimension(n_max)
        rows_a, cols_a, vals_a = [], [], []
        rows_b, cols_b, vals_b = [], [], []
        num_a = np.zeros(d)
        num_b = np.zeros(d)
        for n in range(n_max + 1):
            for j in range(n + 1):
                i = basis_index(n, j)
                na = n - j
                num_a[i] = na
                num_b[i] = j
                if na > 0:  # a|na, j> = sqrt(na) |na-1, j>
                    rows_a.append(basis_index(n - 1, j))
                    cols_a.append(i)
                    vals_a.append(math.sqrt(na))
                if j > 0:  # b|na, j> = sqrt(j) |na, j-1>
                    rows_b.append(basis_index(n - 1, j - 1))
                    cols_b.append(i)
                    vals_b.append(math.sqrt(j))
        self.a = sparse.csr_matrix((vals_a, (rows_a, cols_a)), shape=(d, d))
        self.b = sparse.csr_matrix((vals_b, (rows_b, cols_b)), shape=(d, d))
        self.num_a = num_a
        self.num_b = num_b


def _expect(op, rho: np.ndarray) -> complex:
    # Tr(op rho) for sparse op
    return complex((op @ rho).diagonal().sum())


def observables_from_density(rho: TruncatedDensityMatrix, t: float = 0.0, rel_threshold: float = 1e-12) -> ObservablePoint:
    """Trace-formula observables of a truncated density matrix.

    Quadrature variances keep the first-moment terms,
    ``S_1 = 2<n> + 2 Re<x^2> - 4 (Re<x>)^2`` and
    ``S_2 = 2<n> - 2 Re<x^2> - 4 (Im<x>)^2``, even though they vanish for the
    states this package evolves.  Mandel Q uses the same threshold rule as
    the closed forms, scaled by the state's own mean excitation.
    """
    lad = _Ladder(rho.n_max)
    m = rho.entries
    pops = m.diagonal().real
    n_a = float(np.dot(lad.num_a, pops))
    n_b = float(np.dot(lad.num_b, pops))
    var_a = float(np.dot(lad.num_a**2, pops)) - n_a * n_a
    var_b = float(np.dot(lad.num_b**2, pops)) - n_b * n_b
    a1 = _expect(lad.a, m)
    b1 = _expect(lad.b, m)
    a2 = _expect(lad.a @ lad.a, m)
    b2 = _expect(lad.b @ lad.b, m)

    eps = rel_threshold * (n_a + n_b)
    return ObservablePoint(
        t=float(t),
        n_a=n_a,
        n_b=n_b,
        var_a=var_a,
        var_b=var_b,
        q_a=mandel_q_from(var_a, n_a, eps),
        q_b=mandel_q_from(var_b, n_b, eps),
        s1_a=2 * n_a + 2 * a2.real - 4 * a1.real**2,
        s2_a=2 * n_a - 2 * a2.real - 4 * a1.imag**2,
        s1_b=2 * n_b + 2 * b2.real - 4 * b1.real**2,
        s2_b=2 * n_b - 2 * b2.real - 4 * b1.imag**2,
    )


@dataclass(frozen=True)
class DensityChecks:
    trace: float
    hermiticity: float
    min_eigenvalue: float

    def ok(self, trace_floor: float = 1 - 1e-9, herm: float = 1e-12, eig_floor: float = -1e-10) -> bool:
        return (
            trace_floor <= self.trace <= 1 + 1e-12
            and self.hermiticity <= herm
            and self.min_eigenvalue >= eig_floor
        )


def density_checks(rho: TruncatedDensityMatrix) -> DensityChecks:
    """Trace, max-norm Hermiticity drift and smallest eigenvalue."""
    m = rho.entries
    herm = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    sym = 0.5 * (m + m.conj().T)
    return DensityChecks(float(np.trace(m).real), herm, float(np.linalg.eigvalsh(sym).min()))


def fock_series(p: ModelParams, times, n_max: int = 24, target_tail: float = DEFAULT_TAIL, max_budget: float = 1e-10):
    """Evolve the initial state to each time and collect observables.

    Returns ``(ObservablePoint, list of DensityChecks, truncation_budget)``.
    """
    h = build_hamiltonian(p, n_max)
    rho0, budget = initial_density(p.r, p.phi, n_max, max_budget)
    points, checks = [], []
    for t in np.asarray(times, dtype=float):
        if p.unitary:
            rho = unitary_evolve(h, rho0, float(t))
        else:
            rho, _ = kraus_evolve(h, rho0, p, float(t), target_tail)
        points.append(observables_from_density(rho, float(t), rel_threshold=1e-12))
        checks.append(density_checks(rho))
    return ObservablePoint.stack(points), checks, budget
