"""Truncated two-mode bosonic Fock space.

Operators are plain ``numpy`` arrays in the number basis.  Two-mode objects
use the product basis ``|n_a, n_b>`` flattened as ``n_a * dim + n_b`` (the
``np.kron`` ordering), and two-mode states are stored as ``dim x dim`` grids
``c[n_a, n_b]``.

The squeezing generator ``a^dag b^dag - a b`` conserves ``n_a - n_b``, so the
squeezing operator is exponentiated one sector at a time.  Each sector is a
tridiagonal chain; it is exponentiated on a padded working cutoff and then
restricted, which keeps the returned block free of the artefacts a naive
truncated exponential produces near the cutoff.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as la
from scipy.special import gammainc

TAIL_WARN = 1e-10
#: largest two-mode dimension ``(n_max + 1)**2`` returned densely by squeeze_expm
EXPM_DIM_CAP = 41 ** 2
#: hard limit for the padded working cutoff
WORK_CUTOFF_CAP = 2048
# squared amplitude allowed in the top quarter of a working sector
_EDGE_WEIGHT = 1e-26


class TruncationWarning(UserWarning):
    """Raised when the weight discarded by the Fock cutoff is not negligible."""


@dataclass(frozen=True)
class FockCutoff:
    """Highest occupation number kept per mode."""

    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def safe(self) -> int:
        """Highest occupation treated as free of truncation artefacts."""
        return self.n_max // 2


def as_cutoff(cutoff) -> FockCutoff:
    return cutoff if isinstance(cutoff, FockCutoff) else FockCutoff(int(cutoff))


@dataclass(frozen=True)
class TwoModeState:
    """Normalized amplitudes ``c[n_a, n_b]`` plus the weight lost to truncation.

    ``tail`` is the probability that lived beyond the cutoff before the
    amplitudes were renormalized; ``raw`` undoes the renormalization.
    """

    amplitudes: np.ndarray
    tail: float = 0.0
    normalized: bool = True

    def __post_init__(self):
        c = np.array(self.amplitudes, dtype=complex)
        if c.ndim != 2:
            raise ValueError("amplitudes must be a 2-d grid c[n_a, n_b]")
        if not np.all(np.isfinite(c)):
            raise ValueError("amplitudes contain NaN or Inf")
        if self.normalized and abs(np.vdot(c, c).real - 1.0) > 1e-12:
            raise ValueError("state is not normalized")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @property
    def dims(self) -> tuple[int, int]:
        return self.amplitudes.shape

    @property
    def raw(self) -> np.ndarray:
        """Amplitudes before renormalization over the truncated space."""
        return self.amplitudes * math.sqrt(1.0 - self.tail)

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


def _from_raw(grid: np.ndarray, total: float = 1.0, what: str = "state",
              threshold: float = TAIL_WARN) -> TwoModeState:
    kept = float(np.vdot(grid, grid).real)
    tail = max(0.0, 1.0 - kept / total)
    if tail > threshold:
        warnings.warn(f"{what}: truncation tail {tail:.3e} exceeds {threshold:g}",
                      TruncationWarning, stacklevel=3)
    return TwoModeState(grid / math.sqrt(kept), tail=tail)


# --------------------------------------------------------------------------
# parametrizations
# --------------------------------------------------------------------------

def tau_from_gamma(gamma: float) -> float:
    if gamma <= 0:
        return math.inf
    return -2.0 * math.log(math.tanh(gamma))


def gamma_from_tau(tau: float) -> float:
    if tau <= 0:
        raise ValueError("tau must be > 0 (tau = 0 is infinite squeezing)")
    return math.atanh(math.exp(-tau / 2))


def chi_from_tau(tau: float) -> float:
    if tau <= 0:
        raise ValueError("tau must be > 0")
    return 1.0 / math.tanh(tau / 2)


def tau_from_chi(chi: float) -> float:
    if chi < 1:
        raise ValueError(f"chi must be >= 1, got {chi}")
    if chi == 1:
        return math.inf
    return math.log1p(2.0 / (chi - 1.0))


def chi_from_gamma(gamma: float) -> float:
    return math.cosh(2 * gamma)


def gamma_from_chi(chi: float) -> float:
    if chi < 1:
        raise ValueError(f"chi must be >= 1, got {chi}")
    return 0.5 * math.acosh(chi)


@dataclass(frozen=True)
class SqueezeParametrization:
    """The equivalent squeeze labels (gamma, tau, chi).

    ``cosh(gamma) = (1 - exp(-tau))**-0.5`` and
    ``tau = ln(chi + 1) - ln(chi - 1)``; equivalently ``chi = cosh(2 gamma)``.
    """

    gamma: float
    tau: float
    chi: float

    @classmethod
    def from_gamma(cls, gamma: float) -> "SqueezeParametrization":
        if gamma < 0:
            raise ValueError("gamma must be >= 0")
        return cls(gamma, tau_from_gamma(gamma), chi_from_gamma(gamma))

    @classmethod
    def from_tau(cls, tau: float) -> "SqueezeParametrization":
        return cls(gamma_from_tau(tau), tau, chi_from_tau(tau))

    @classmethod
    def from_chi(cls, chi: float) -> "SqueezeParametrization":
        return cls(gamma_from_chi(chi), tau_from_chi(chi), chi)

    @property
    def u(self) -> float:
        return math.cosh(self.gamma)

    @property
    def v(self) -> float:
        return math.sinh(self.gamma)


# --------------------------------------------------------------------------
# single-mode operators
# --------------------------------------------------------------------------

def make_ladder(cutoff) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(a, a_dag)`` truncated at ``cutoff``.

    ``[a, a_dag]`` is the identity except for the last diagonal entry, which
    equals ``-n_max``.
    """
    c = as_cutoff(cutoff)
    a = np.diag(np.sqrt(np.arange(1, c.dim, dtype=float)), 1).astype(complex)
    return a, a.conj().T


def two_mode_ladders(cutoff) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(a, b)`` acting on the flattened product space."""
    a, _ = make_ladder(cutoff)
    eye = np.eye(as_cutoff(cutoff).dim)
    return np.kron(a, eye), np.kron(eye, a)


def coherent_tail(xi: complex, cutoff) -> float:
    """Poisson weight of a coherent state above the cutoff."""
    c = as_cutoff(cutoff)
    lam = abs(xi) ** 2
    return 0.0 if lam == 0 else float(gammainc(c.dim, lam))


def displacement_operator(xi: complex, cutoff) -> np.ndarray:
    """``D(xi) = exp(xi a_dag - xi^* a)`` on the truncated space."""
    c = as_cutoff(cutoff)
    tail = coherent_tail(xi, c)
    if tail > TAIL_WARN:
        warnings.warn(f"displacement {xi}: coherent tail {tail:.3e} beyond n_max={c.n_max}",
                      TruncationWarning, stacklevel=2)
    if xi == 0:
        return np.eye(c.dim, dtype=complex)
    a, ad = make_ladder(c)
    return la.expm(xi * ad - np.conj(xi) * a)


def coherent_amplitudes(xi: complex, cutoff) -> np.ndarray:
    """Closed-form ``exp(-|xi|^2/2) xi^n / sqrt(n!)`` for ``n <= n_max``."""
    n = np.arange(as_cutoff(cutoff).dim)
    logfact = np.array([math.lgamma(k + 1) for k in n])
    if xi == 0:
        out = np.zeros(n.size, dtype=complex)
        out[0] = 1.0
        return out
    return np.exp(-abs(xi) ** 2 / 2 + n * np.log(complex(xi)) - logfact / 2)


# --------------------------------------------------------------------------
# two-mode squeezing
# --------------------------------------------------------------------------

def _sector_states(k: int, n_work: int) -> tuple[np.ndarray, np.ndarray]:
    """Occupations ``(n_a, n_b)`` of the sector ``n_a - n_b = k``."""
    m = np.arange(n_work - abs(k) + 1)
    return m + max(k, 0), m + max(-k, 0)


@lru_cache(maxsize=1024)
def _sector_columns(gamma: float, k: int, n_work: int, ncols: int) -> np.ndarray:
    """First ``ncols`` columns of ``exp(G_k)`` for the sector ``n_a - n_b = k``.

    ``G_k`` is real, antisymmetric and tridiagonal, so ``G_k = i P^-1 T P``
    with ``T`` the real symmetric chain and ``P = diag(i^m)``; the exponential
    follows from the tridiagonal eigensystem of ``T``.  The result is real.
    """
    na, nb = _sector_states(k, n_work)
    size = na.size
    if size == 1:
        out = np.ones((1, 1))
    else:
        hop = gamma * np.sqrt((na[:-1] + 1.0) * (nb[:-1] + 1.0))
        lam, vec = la.eigh_tridiagonal(np.zeros(size), hop)
        phase = 1j ** (np.arange(size) % 4)
        full = (phase.conj()[:, None] * vec) @ (np.exp(1j * lam)[:, None]
                                               * (vec[:ncols].T * phase[:ncols]))
        out = full.real
    out = np.ascontiguousarray(out[:, :ncols])
    out.setflags(write=False)
    return out


def _sector_propagator(gamma: float, k: int, n_work: int) -> np.ndarray:
    return _sector_columns(gamma, k, n_work, n_work - abs(k) + 1)


def _edge_weight(block_columns: np.ndarray) -> float:
    """Largest column weight sitting in the top quarter of a working sector."""
    size = block_columns.shape[0]
    edge = block_columns[size - max(1, size // 4):]
    return float(np.max(np.sum(np.abs(edge) ** 2, axis=0))) if edge.size else 0.0


def _work_cutoff(gamma: float, n_max: int, sectors, start: int | None = None) -> int:
    """Smallest doubling of the working cutoff that keeps the edges quiet."""
    n_work = start or max(2 * n_max + 16, 32)
    while True:
        worst = 0.0
        for k in sectors:
            cols = n_max - abs(k) + 1
            worst = max(worst, _edge_weight(_sector_columns(gamma, k, n_work, cols)),
                        _edge_weight(_sector_columns(-gamma, k, n_work, cols)))
        if worst < _EDGE_WEIGHT:
            return n_work
        if n_work >= WORK_CUTOFF_CAP:
            warnings.warn(f"squeeze gamma={gamma}: working cutoff capped at {n_work}, "
                          f"edge weight {worst:.2e}", TruncationWarning, stacklevel=3)
            return n_work
        n_work = min(2 * n_work, WORK_CUTOFF_CAP)


def squeeze_expm(gamma: float, cutoff, pad: bool = True) -> np.ndarray:
    """``S(gamma) = exp[gamma (a_dag b_dag - a b)]`` as a dense matrix.

    With ``pad=True`` (default) each conserved sector is exponentiated on a
    working cutoff large enough that the returned ``n_max`` block matches the
    untruncated operator.  ``pad=False`` exponentiates the generator truncated
    at ``n_max`` itself.
    """
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    c = as_cutoff(cutoff)
    if c.dim ** 2 > EXPM_DIM_CAP:
        raise ValueError(f"two-mode dimension {c.dim ** 2} exceeds cap {EXPM_DIM_CAP}; "
                         "use tmss_bch for states")
    d = c.dim
    if gamma == 0:
        return np.eye(d * d, dtype=complex)
    sectors = range(-c.n_max, c.n_max + 1)
    n_work = _work_cutoff(gamma, c.n_max, sectors) if pad else c.n_max
    out = np.zeros((d * d, d * d), dtype=complex)
    for k in sectors:
        na, nb = _sector_states(k, n_work)
        keep = (na <= c.n_max) & (nb <= c.n_max)
        idx = na[keep] * d + nb[keep]
        block = _sector_columns(gamma, k, n_work, int(keep.sum()))
        out[np.ix_(idx, idx)] = block[keep]
    return out


def apply_squeeze(gamma: float, grid: np.ndarray) -> np.ndarray:
    """Apply ``S(gamma)`` to a square amplitude grid on its own cutoff."""
    grid = np.asarray(grid, dtype=complex)
    n_work = grid.shape[0] - 1
    if grid.shape != (n_work + 1, n_work + 1):
        raise ValueError("squeeze needs a square grid (equal cutoffs on both modes)")
    if gamma == 0:
        return grid.copy()
    out = np.zeros_like(grid)
    for k in range(-n_work, n_work + 1):
        na, nb = _sector_states(k, n_work)
        vec = grid[na, nb]
        if not np.any(vec):
            continue
        out[na, nb] = _sector_propagator(gamma, k, n_work) @ vec
    return out


def _squeeze_work_grid(gamma: float, grid_fn, n_max: int) -> np.ndarray:
    """Squeeze ``grid_fn(n_work)`` on a working cutoff with a quiet edge."""
    n_work = max(2 * n_max, 32)
    while True:
        out = apply_squeeze(gamma, grid_fn(n_work))
        cut = n_work - max(1, n_work // 4)
        edge = np.sum(np.abs(out[cut:, :]) ** 2) + np.sum(np.abs(out[:, cut:]) ** 2)
        if edge < _EDGE_WEIGHT or n_work >= WORK_CUTOFF_CAP // 4:
            return out
        n_work *= 2


def tmss_bch(gamma: float, cutoff) -> TwoModeState:
    """Squeezed vacuum from the disentangled form ``exp(tanh(g) a_dag b_dag)|0> / cosh(g)``.

    The exponential is summed as a terminating operator series: the truncated
    ``a_dag b_dag`` is nilpotent on the grid.
    """
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    c = as_cutoff(cutoff)
    t = math.tanh(gamma)
    n = np.arange(c.dim, dtype=float)
    term = np.zeros((c.dim, c.dim), dtype=complex)
    term[0, 0] = 1.0
    total = term.copy()
    for k in range(1, c.dim):
        # (a_dag b_dag term)[n_a, n_b] = sqrt(n_a n_b) term[n_a - 1, n_b - 1]
        nxt = np.zeros_like(term)
        nxt[1:, 1:] = np.sqrt(np.outer(n[1:], n[1:])) * term[:-1, :-1]
        term = nxt * (t / k)
        total += term
    total /= math.cosh(gamma)
    tail = t ** (2 * c.dim)
    if tail > TAIL_WARN:
        warnings.warn(f"tmss_bch gamma={gamma}: tail {tail:.3e} beyond n_max={c.n_max}",
                      TruncationWarning, stacklevel=2)
    return TwoModeState(total / math.sqrt(1.0 - tail), tail=tail)


def tmss_fock(tau: float, cutoff) -> TwoModeState:
    """Squeezed vacuum as ``sum_n exp(-tau n / 2) |n>|n> / sqrt(Z(tau))``."""
    if not tau > 0:
        raise ValueError("tau must be > 0 (tau = 0 is infinite squeezing)")
    c = as_cutoff(cutoff)
    n = np.arange(c.dim)
    q = math.exp(-tau)
    raw = np.diag(np.exp(-tau * n / 2) * math.sqrt(-math.expm1(-tau))).astype(complex)
    tail = q ** c.dim
    if tail > TAIL_WARN:
        warnings.warn(f"tmss_fock tau={tau}: tail {tail:.3e} beyond n_max={c.n_max}",
                      TruncationWarning, stacklevel=2)
    return TwoModeState(raw / math.sqrt(1.0 - tail), tail=tail)


def tmss_expm(gamma: float, cutoff) -> TwoModeState:
    """Squeezed vacuum as the first column of :func:`squeeze_expm`."""
    c = as_cutoff(cutoff)
    col = squeeze_expm(gamma, c)[:, 0].reshape(c.dim, c.dim)
    return _from_raw(col, what=f"tmss_expm gamma={gamma}")


@dataclass(frozen=True)
class DisplacementParams:
    xi: complex = 0j
    eta: complex = 0j

    def __post_init__(self):
        if not (np.isfinite(self.xi) and np.isfinite(self.eta)):
            raise ValueError("displacements must be finite")


def _coherent_pair(params: DisplacementParams, n_work: int) -> np.ndarray:
    return np.outer(coherent_amplitudes(params.xi, n_work),
                    coherent_amplitudes(params.eta, n_work))


def cs_state(params: DisplacementParams, gamma: float, cutoff) -> TwoModeState:
    """``S(gamma) D_a(xi) D_b(eta) |0,0>`` truncated to ``cutoff``."""
    c = as_cutoff(cutoff)
    grid = _squeeze_work_grid(gamma, lambda n: _coherent_pair(params, n), c.n_max)
    return _from_raw(grid[:c.dim, :c.dim], total=float(np.vdot(grid, grid).real),
                     what="cs_state", threshold=1e-8)


def displaced_tmss(params: DisplacementParams, gamma: float, cutoff) -> TwoModeState:
    """``D_a(xi) D_b(eta) S(gamma) |0,0>`` truncated to ``cutoff``.

    This is the displaced-after-squeezing ordering whose mode-a reduced
    density is ``D(xi) f(tau) D(xi)^dag``.
    """
    c = as_cutoff(cutoff)
    n_work = max(2 * c.n_max, 32)
    while True:
        t = math.tanh(gamma)
        base = np.diag(t ** np.arange(n_work + 1) / math.cosh(gamma)).astype(complex)
        grid = displacement_operator_quiet(params.xi, n_work) @ base \
            @ displacement_operator_quiet(params.eta, n_work).T
        cut = n_work - max(1, n_work // 4)
        edge = np.sum(np.abs(grid[cut:, :]) ** 2) + np.sum(np.abs(grid[:, cut:]) ** 2)
        if edge < _EDGE_WEIGHT or n_work >= WORK_CUTOFF_CAP // 4:
            break
        n_work *= 2
    return _from_raw(grid[:c.dim, :c.dim], total=float(np.vdot(grid, grid).real),
                     what="displaced_tmss", threshold=1e-8)


def displacement_operator_quiet(xi: complex, cutoff) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return displacement_operator(xi, cutoff)


# --------------------------------------------------------------------------
# Bogoliubov matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BogoliubovMatrix:
    entries: np.ndarray = field(repr=False)
    kind: str

    def __post_init__(self):
        if self.kind not in ("boson", "fermion"):
            raise ValueError(f"kind must be 'boson' or 'fermion', got {self.kind!r}")
        m = np.array(self.entries, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))

    def __matmul__(self, vec):
        return self.entries @ np.asarray(vec)


def bogoliubov_matrix(gamma: float, kind: str = "boson") -> BogoliubovMatrix:
    """Matrix form of the squeezing transformation.

    boson: ``[[cosh g, -sinh g], [-sinh g, cosh g]]`` (hyperbolic, det 1);
    fermion: ``[[cos g, sin g], [-sin g, cos g]]`` (rotation, det 1).
    """
    if kind == "boson":
        u, v = math.cosh(gamma), math.sinh(gamma)
        return BogoliubovMatrix(np.array([[u, -v], [-v, u]]), kind)
    if kind == "fermion":
        u, v = math.cos(gamma), math.sin(gamma)
        return BogoliubovMatrix(np.array([[u, v], [-v, u]]), kind)
    raise ValueError(f"kind must be 'boson' or 'fermion', got {kind!r}")


def bogoliubov_transform_params(params: DisplacementParams, gamma: float,
                                kind: str = "boson") -> DisplacementParams:
    """Displacements ``(xi', eta')`` with ``S D_a(xi) D_b(eta) = D_a(xi') D_b(eta') S``.

    The pair ``(xi', conj(eta'))`` is a Bogoliubov matrix applied to
    ``(xi, conj(eta))``.  For bosons that matrix is ``[[u, v], [v, u]]``,
    i.e. ``bogoliubov_matrix(-gamma)``, because conjugation by ``S`` maps
    ``a`` to ``u a - v b_dag``.  The fermionic map uses ``bogoliubov_matrix``
    directly with complex coefficients (the Grassmann version lives in
    :mod:`squeezent.fermion`).
    """
    mat = bogoliubov_matrix(-gamma if kind == "boson" else gamma, kind).entries
    xi_bar, eta_bar_conj = mat @ np.array([params.xi, np.conj(params.eta)])
    return DisplacementParams(complex(xi_bar), complex(np.conj(eta_bar_conj)))


# --------------------------------------------------------------------------
# operator-level checks on the working space
# --------------------------------------------------------------------------

def _lower_a(grid):
    """``a`` on grids ``c[..., n_a, n_b]``."""
    out = np.zeros_like(grid)
    n = np.sqrt(np.arange(1, grid.shape[-2]))
    out[..., :-1, :] = n[:, None] * grid[..., 1:, :]
    return out


def _raise_a(grid):
    out = np.zeros_like(grid)
    n = np.sqrt(np.arange(1, grid.shape[-2]))
    out[..., 1:, :] = n[:, None] * grid[..., :-1, :]
    return out


def _lower_b(grid):
    return _lower_a(grid.swapaxes(-1, -2)).swapaxes(-1, -2)


def _raise_b(grid):
    return _raise_a(grid.swapaxes(-1, -2)).swapaxes(-1, -2)


@dataclass(frozen=True)
class _SectorVec:
    """A working-space vector supported on the single sector ``n_a - n_b = k``."""

    k: int
    n_work: int
    vals: np.ndarray

    def ladder(self, mode: str, step: int) -> "_SectorVec":
        """Apply ``a``/``b`` (step -1) or ``a_dag``/``b_dag`` (step +1)."""
        na, nb = _sector_states(self.k, self.n_work)
        occ = na if mode == "a" else nb
        coeff = np.sqrt(occ + (step > 0))
        na2, nb2 = (na + step, nb) if mode == "a" else (na, nb + step)
        k2 = self.k + (step if mode == "a" else -step)
        ok = (na2 >= 0) & (nb2 >= 0) & (na2 <= self.n_work) & (nb2 <= self.n_work)
        out = np.zeros(self.n_work - abs(k2) + 1, dtype=self.vals.dtype)
        out[(na2 - max(k2, 0))[ok]] = (coeff * self.vals)[ok]
        return _SectorVec(k2, self.n_work, out)

    def pair(self, step: int) -> "_SectorVec":
        """Apply ``a b`` (step -1) or ``a_dag b_dag`` (step +1); stays in sector."""
        return self.ladder("a", step).ladder("b", step)

    def dot(self, other: "_SectorVec") -> complex:
        if self.k != other.k:
            return 0.0
        return complex(np.vdot(self.vals, other.vals))

    def __sub__(self, other):
        return _SectorVec(self.k, self.n_work, self.vals - other.vals)


def _safe_images(gamma: float, c: FockCutoff, adjoint: bool):
    """``S|i,j>`` (or ``S^dag|i,j>``) for every safe basis state, on a padded space."""
    s = c.safe
    sectors = range(-s, s + 1)
    n_work = _work_cutoff(gamma, s, sectors, start=max(2 * c.n_max + 16, 32))
    labels = [(i, j) for i in range(s + 1) for j in range(s + 1)]
    vecs = []
    for i, j in labels:
        m = min(i, j)
        # S is real orthogonal per sector, so row m of S is column m of S(-g)
        block = _sector_columns(-gamma if adjoint else gamma, i - j, n_work, m + 1)
        vecs.append(_SectorVec(i - j, n_work, block[:, m].astype(complex)))
    return labels, vecs


def _gram(left, right) -> np.ndarray:
    return np.array([[x.dot(y) for y in right] for x in left])


def _safe_target(c: FockCutoff, op: np.ndarray) -> np.ndarray:
    s = c.safe
    idx = [i * c.dim + j for i in range(s + 1) for j in range(s + 1)]
    return op[np.ix_(idx, idx)]


@dataclass
class OperatorCheck:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def bogoliubov_operator_check(gamma: float, cutoff, tol: float = 1e-8) -> list[OperatorCheck]:
    """Max deviations of the squeezed ladder relations on the safe subspace.

    Checks ``S a S^dag = u a - v b_dag``, ``S b S^dag = u b - v a_dag``,
    ``[a(g), a(g)^dag] = [b(g), b(g)^dag] = 1``, ``[a(g), b(g)] = 0`` and
    unitarity of ``S``.  Matrix elements ``<i|S X S^dag|j>`` are overlaps of
    ``S^dag|i>`` with ``X S^dag|j>`` on a padded working space.
    """
    c = as_cutoff(cutoff)
    u, v = math.cosh(gamma), math.sinh(gamma)
    _, w = _safe_images(gamma, c, adjoint=True)
    a, b = two_mode_ladders(c)
    eye = np.eye(len(w))
    la_ = [x.ladder("a", -1) for x in w]
    lb_ = [x.ladder("b", -1) for x in w]
    ra_ = [x.ladder("a", +1) for x in w]
    rb_ = [x.ladder("b", +1) for x in w]
    ab = [x.ladder("b", -1).ladder("a", -1) for x in w]
    ba = [x.ladder("a", -1).ladder("b", -1) for x in w]

    def dev(mat, target):
        return float(np.max(np.abs(mat - target)))

    return [
        OperatorCheck("S a S^dag = u a - v b^dag",
                      dev(_gram(w, la_), _safe_target(c, u * a - v * b.conj().T)), tol),
        OperatorCheck("S b S^dag = u b - v a^dag",
                      dev(_gram(w, lb_), _safe_target(c, u * b - v * a.conj().T)), tol),
        OperatorCheck("[a(g), a(g)^dag] = 1", dev(_gram(ra_, ra_) - _gram(la_, la_), eye), tol),
        OperatorCheck("[b(g), b(g)^dag] = 1", dev(_gram(rb_, rb_) - _gram(lb_, lb_), eye), tol),
        OperatorCheck("[a(g), b(g)] = 0", dev(_gram(w, [x - y for x, y in zip(ab, ba)]), 0.0), tol),
        OperatorCheck("S S^dag = 1", dev(_gram(w, w), eye), tol),
    ]


def squeezed_vacuum_annihilation(gamma: float, cutoff) -> tuple[float, float]:
    """Norms of ``(u a - v b_dag)|g>`` and ``(u b - v a_dag)|g>`` on the safe block."""
    c = as_cutoff(cutoff)
    u, v = math.cosh(gamma), math.sinh(gamma)
    psi = tmss_bch(gamma, c).raw
    s = c.safe + 1
    ra = (u * _lower_a(psi) - v * _raise_b(psi))[:s, :s]
    rb = (u * _lower_b(psi) - v * _raise_a(psi))[:s, :s]
    return float(np.linalg.norm(ra)), float(np.linalg.norm(rb))


def bch_identity_check(gamma: float, cutoff) -> float:
    """Deviation of the disentangled product from ``S(gamma)`` on safe columns.

    ``exp[g(A + B)] = exp(tanh(g) B) exp(ln cosh(g) C) exp(tanh(g) A)`` with
    ``A = -ab``, ``B = a_dag b_dag``, ``C = -(n_a + n_b + 1)``; both outer
    exponentials are summed as terminating series.
    """
    c = as_cutoff(cutoff)
    labels, exact = _safe_images(gamma, c, adjoint=False)
    t = math.tanh(gamma)
    worst = 0.0
    for (i, j), ref in zip(labels, exact):
        na, nb = _sector_states(i - j, ref.n_work)
        start = np.zeros_like(ref.vals)
        start[min(i, j)] = 1.0
        term = _SectorVec(ref.k, ref.n_work, start)
        total = start.copy()
        for k in range(1, min(i, j) + 1):
            term = _SectorVec(ref.k, ref.n_work, -t / k * term.pair(-1).vals)
            total += term.vals
        total *= math.cosh(gamma) ** -(na + nb + 1.0)
        term = _SectorVec(ref.k, ref.n_work, total)
        out = total.copy()
        for k in range(1, ref.vals.size):
            term = _SectorVec(ref.k, ref.n_work, t / k * term.pair(+1).vals)
            out += term.vals
            if np.max(np.abs(term.vals)) < 1e-18:
                break
        worst = max(worst, float(np.max(np.abs(out - ref.vals))))
    return worst
