"""Reduced densities, entropies and energies of two-mode states.

Entropies are in nats and energies in quanta of mode ``a`` (``H_a = a_dag a``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .fock import (
    DisplacementParams,
    TwoModeState,
    as_cutoff,
    bogoliubov_transform_params,
    cs_state,
    displaced_tmss,
    displacement_operator_quiet,
    gamma_from_tau,
    tau_from_gamma,
    tau_from_chi,
    tmss_fock,
)

EIG_FLOOR = 1e-12
LN2 = math.log(2.0)


class DensityError(ValueError):
    """A matrix failed the density-matrix invariants."""


@dataclass(frozen=True)
class DensityMatrix:
    """Single-mode density matrix; Hermitian, unit trace, positive."""

    entries: np.ndarray
    tol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DensityError(f"density must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DensityError("density has NaN or Inf entries")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > self.tol:
            raise DensityError(f"not Hermitian (deviation {herm:.2e})")
        tr = np.trace(m)
        if abs(tr - 1) > self.tol:
            raise DensityError(f"trace {tr} differs from 1")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues with solver jitter in ``[-1e-12, 0)`` clamped to zero."""
        lam = np.linalg.eigvalsh(self.entries)
        if lam.min() < -EIG_FLOOR:
            raise DensityError(f"negative eigenvalue {lam.min():.3e}")
        return np.clip(lam, 0.0, None)


def partial_trace_b(state) -> DensityMatrix:
    """``rho_a[m, n] = sum_r c[m, r] conj(c[n, r])``."""
    c = state.amplitudes if isinstance(state, TwoModeState) else np.asarray(state, dtype=complex)
    norm2 = float(np.vdot(c, c).real)
    if abs(norm2 - 1.0) > 1e-8:
        raise DensityError(f"state norm^2 {norm2} differs from 1")
    rho = c @ c.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    lam = rho.eigenvalues()
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def reduced_energy(rho: DensityMatrix) -> float:
    n = np.arange(rho.dim)
    return float(np.sum(n * np.diag(rho.entries).real))


# --------------------------------------------------------------------------
# Gibbs densities and closed forms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GibbsDensity:
    """``exp(-tau a_dag a) / Z`` on the truncated space, optionally displaced."""

    tau: float
    dim: int
    Z: float
    xi: complex = 0j

    @property
    def Z_exact(self) -> float:
        return 1.0 / -math.expm1(-self.tau)

    @property
    def tail(self) -> float:
        return math.exp(-self.tau * self.dim)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(-self.tau * np.arange(self.dim)) / self.Z

    @property
    def rho(self) -> DensityMatrix:
        f = np.diag(self.weights).astype(complex)
        if self.xi:
            d = displacement_operator_quiet(self.xi, self.dim - 1)
            f = d @ f @ d.conj().T
            f /= np.trace(f).real
        return DensityMatrix(f)


def gibbs_density(tau: float, cutoff, xi: complex = 0j) -> GibbsDensity:
    if not tau > 0:
        raise ValueError("tau must be > 0")
    c = as_cutoff(cutoff)
    z = float(np.sum(np.exp(-tau * np.arange(c.dim))))
    return GibbsDensity(tau, c.dim, z, xi)


def entropy_closed_form(tau: float) -> float:
    """``S(tau) = tau / (e^tau - 1) - ln(1 - e^-tau)``."""
    if not tau > 0:
        raise ValueError("tau must be > 0")
    if math.isinf(tau):
        return 0.0
    return tau / math.expm1(tau) - math.log(-math.expm1(-tau))


def energy_closed_form(tau: float) -> float:
    """``E(tau) = 1 / (e^tau - 1)``."""
    if not tau > 0:
        raise ValueError("tau must be > 0")
    if math.isinf(tau):
        return 0.0
    return 1.0 / math.expm1(tau)


def tau_for_energy(energy: float) -> float:
    """Inverse of :func:`energy_closed_form`."""
    if energy <= 0:
        return math.inf
    return math.log1p(1.0 / energy)


def entropy_chi(chi: float) -> float:
    """``[(chi+1) ln(chi+1) - (chi-1) ln(chi-1) - 2 ln 2] / 2``, cancellation-free."""
    if chi < 1:
        raise ValueError(f"chi must be >= 1, got {chi}")
    if chi == 1:
        return 0.0
    if chi < 2:
        x = chi - 1.0
        return 0.5 * ((chi + 1) * math.log(chi + 1) - x * math.log(x)) - LN2
    # (chi+-1) ln(chi+-1) = (chi+-1)(ln chi + log1p(+-1/chi))
    return math.log(chi) + 0.5 * ((chi + 1) * math.log1p(1 / chi)
                                  - (chi - 1) * math.log1p(-1 / chi)) - LN2


@dataclass(frozen=True)
class EntanglementCurvePoint:
    chi: float
    tau: float
    S: float
    E: float
    lnchi: float
    deltaS: float


def curve_chi(chi: float) -> EntanglementCurvePoint:
    """Entropy and energy of the squeezed vacuum labelled by ``chi``.

    ``chi = 1`` is the unsqueezed limit (``tau = inf``, ``S = E = 0``).
    """
    s = entropy_chi(chi)
    lnchi = math.log(chi)
    return EntanglementCurvePoint(chi, tau_from_chi(chi), s, (chi - 1) / 2, lnchi, s - lnchi)


# --------------------------------------------------------------------------
# displaced Gibbs form
# --------------------------------------------------------------------------

@dataclass
class DisplacedGibbsReport:
    xi: complex
    tau: float
    etas: tuple
    deviation: float
    eta_spread: float
    entropies: list[float]


def displaced_gibbs_check(xi: complex, tau: float, cutoff, etas=(0.0, 0.2)) -> DisplacedGibbsReport:
    """Compare ``Tr_b`` of ``D_a(xi) D_b(eta) S|0>`` with ``D(xi) f(tau) D(xi)^dag``.

    The displaced Gibbs density is built on a doubled working cutoff and then
    restricted, so its own truncation does not enter the comparison.
    """
    c = as_cutoff(cutoff)
    gamma = gamma_from_tau(tau)
    target = _displaced_gibbs_target(xi, tau, c.n_max)
    rhos = [partial_trace_b(displaced_tmss(DisplacementParams(xi, eta), gamma, c)).entries
            for eta in etas]
    deviation = max(float(np.max(np.abs(r - target))) for r in rhos)
    spread = max(float(np.max(np.abs(r - rhos[0]))) for r in rhos)
    ents = [von_neumann_entropy(DensityMatrix(r)) for r in rhos]
    return DisplacedGibbsReport(xi, tau, tuple(etas), deviation, spread, ents)


def _displaced_gibbs_target(xi: complex, tau: float, n_max: int) -> np.ndarray:
    work = 2 * n_max
    f = np.diag(np.exp(-tau * np.arange(work + 1)) * -math.expm1(-tau)).astype(complex)
    d = displacement_operator_quiet(xi, work)
    return (d @ f @ d.conj().T)[:n_max + 1, :n_max + 1]


@dataclass
class CSReducedReport:
    params: DisplacementParams
    xi_bar: complex
    deviation: float
    entropy: float


def cs_reduced_check(params: DisplacementParams, gamma: float, cutoff) -> CSReducedReport:
    """Mode-a density of ``S D_a(xi) D_b(eta)|0>`` against ``D(xi') f D(xi')^dag``.

    ``xi'`` is the Bogoliubov image of the displacements, so the entropy
    equals that of the undisplaced squeezed vacuum.
    """
    c = as_cutoff(cutoff)
    tau = tau_from_gamma(gamma)
    xi_bar = bogoliubov_transform_params(params, gamma).xi
    rho = partial_trace_b(cs_state(params, gamma, c))
    target = _displaced_gibbs_target(xi_bar, tau, c.n_max)
    return CSReducedReport(params, xi_bar, float(np.max(np.abs(rho.entries - target))),
                           von_neumann_entropy(rho))


# --------------------------------------------------------------------------
# comparison family |Psi_N>
# --------------------------------------------------------------------------

def psi_N_state(N: int) -> TwoModeState:
    """Equal-weight twin-Fock state ``N^-1/2 sum_{n<N} |n>|n>`` on cutoff ``max(N-1, 1)``."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be an integer >= 1, got {N!r}")
    dim = max(N, 2)
    c = np.zeros((dim, dim), dtype=complex)
    c[np.arange(N), np.arange(N)] = 1 / math.sqrt(N)
    return TwoModeState(c)


def psi_N_stats(N: int) -> tuple[float, float]:
    """``(E'(N), S'(N)) = ((N - 1) / 2, ln N)``."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be an integer >= 1, got {N!r}")
    return (N - 1) / 2, math.log(N)


def tmss_beats_psiN(N: int) -> float:
    """Entropy excess of the squeezed vacuum over ``|Psi_N>`` at equal energy.

    Equal energy ``(chi - 1)/2 = (N - 1)/2`` fixes ``chi = N``.
    """
    if int(N) != N or N < 2:
        raise ValueError(f"N must be an integer >= 2, got {N!r}")
    return entropy_chi(N) - math.log(N)


# --------------------------------------------------------------------------
# maximum-entropy corroboration
# --------------------------------------------------------------------------

@dataclass
class MaxEntReport:
    """Sampled fixed-energy pure states against the Gibbs entropy bound.

    A finite-dimensional corroboration of the maximum-entropy argument, not a
    proof.
    """

    energy: float
    bound: float
    samples: int
    max_entropy: float
    max_energy_error: float
    entropies: np.ndarray = field(repr=False)

    @property
    def gap(self) -> float:
        return self.bound - self.max_entropy

    @property
    def violations(self) -> int:
        return int(np.sum(self.entropies > self.bound + 1e-9))


def _row_energy(weights: np.ndarray, s: float) -> float:
    n = np.arange(weights.size)
    logw = np.log(np.where(weights > 0, weights, 1e-300)) - s * n
    logw -= logw.max()
    p = np.exp(logw) * (weights > 0)
    return float(np.sum(n * p) / np.sum(p))


def tilt_to_energy(grid: np.ndarray, energy: float, max_iter: int = 200) -> np.ndarray:
    """Rescale row ``n`` by ``exp(-s n / 2)`` so the reduced energy equals ``energy``.

    The reduced energy is strictly decreasing in ``s`` whenever two rows carry
    weight, so the shell is reached by bracketing and root-finding.
    """
    grid = np.asarray(grid, dtype=complex)
    w = np.sum(np.abs(grid) ** 2, axis=1)
    occupied = np.flatnonzero(w > 0)
    if occupied.size == 0:
        raise ValueError("zero state")
    if not occupied.min() < energy < occupied.max():
        raise RuntimeError(f"energy {energy} outside reachable range "
                           f"[{occupied.min()}, {occupied.max()}]")
    lo, hi = -1.0, 1.0
    for _ in range(max_iter):
        if _row_energy(w, lo) > energy > _row_energy(w, hi):
            break
        lo, hi = 2 * lo, 2 * hi
    else:
        raise RuntimeError("could not bracket the energy shell")
    s = brentq(lambda x: _row_energy(w, x) - energy, lo, hi, xtol=1e-15,
               maxiter=max_iter)
    n = np.arange(grid.shape[0])
    logscale = -s * n / 2
    out = grid * np.exp(logscale - logscale[occupied].max())[:, None]
    return out / np.linalg.norm(out)


def sample_fixed_energy_states(energy: float, cutoff, samples: int, seed: int):
    """Seeded random pure two-mode states with reduced energy ``energy``.

    Half the draws are dense complex Gaussian grids, half are twin-Fock
    (Schmidt-diagonal) states with Dirichlet weights; every draw is tilted
    onto the energy shell.
    """
    c = as_cutoff(cutoff)
    if not 0 <= energy < c.n_max:
        raise ValueError(f"energy {energy} not representable below n_max={c.n_max}")
    rng = np.random.default_rng(seed)
    for i in range(samples):
        if energy == 0:
            g = np.zeros((c.dim, c.dim), dtype=complex)
            g[0] = rng.normal(size=c.dim) + 1j * rng.normal(size=c.dim)
            yield g / np.linalg.norm(g)
            continue
        if i % 2 == 0:
            g = rng.normal(size=(c.dim, c.dim)) + 1j * rng.normal(size=(c.dim, c.dim))
        else:
            g = np.diag(np.sqrt(rng.dirichlet(np.full(c.dim, 0.5)))).astype(complex)
        yield tilt_to_energy(g, energy)


def maxent_property_check(energy: float, cutoff=8, samples: int = 200, seed: int = 7) -> MaxEntReport:
    """Entropy of sampled fixed-energy states versus ``S(tau(E))``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    bound = entropy_closed_form(tau_for_energy(energy)) if energy > 0 else 0.0
    ents, errs = [], []
    for grid in sample_fixed_energy_states(energy, cutoff, samples, seed):
        rho = partial_trace_b(grid)
        ents.append(von_neumann_entropy(rho))
        errs.append(abs(reduced_energy(rho) - energy))
    ents = np.array(ents)
    return MaxEntReport(energy, bound, samples, float(ents.max()), float(max(errs)), ents)


# --------------------------------------------------------------------------
# Lagrange / Legendre bookkeeping
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LagrangeSolution:
    tau: float
    lambda0: float
    lambda1: float
    lnZ: float
    free_energy: float
    entropy: float
    energy: float

    @property
    def gibbs_residual(self) -> float:
        """``|ln Z - (lambda1 E + S)|``."""
        return abs(self.lnZ - (self.lambda1 * self.energy + self.entropy))

    @property
    def legendre_residual(self) -> float:
        """``|F - (E - S / tau)|``."""
        return abs(self.free_energy - (self.energy - self.entropy / self.tau))


def legendre_report(tau: float, cutoff=60) -> LagrangeSolution:
    """Multipliers and free energy of the truncated Gibbs density.

    ``lambda1 = -tau`` and ``Z = exp(1 - lambda0)``.
    """
    g = gibbs_density(tau, cutoff)
    p = g.weights
    pos = p[p > 0]
    s = float(-np.sum(pos * np.log(pos)))
    e = float(np.sum(np.arange(g.dim) * p))
    lnz = math.log(g.Z)
    return LagrangeSolution(tau, 1.0 - lnz, -tau, lnz, -lnz / tau, s, e)


def tmss_reduced(tau: float, cutoff=60) -> DensityMatrix:
    return partial_trace_b(tmss_fock(tau, cutoff))
