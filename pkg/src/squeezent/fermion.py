"""Fermionic coherent states, Cahill-Glauber densities and two-mode squeezing.

Kets are encoded as :class:`~squeezent.grassmann.SuperOperator` columns
``|psi><0|`` so that bras, outer products and overlaps all reuse the graded
operator product.  Grassmann coefficients sit on the left of Fock matrices;
matrix elements quoted in the literature correspond to the graded sandwich
``<m|X|n>`` (see :meth:`SuperOperator.sandwich`).

The default generator set is ``α, α*, β, β*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grassmann import (
    GeneratorSet,
    GrassmannElement,
    SuperOperator,
    basis_ket,
    berezin_integrate,
    fermion_ladders,
    super_exp_nilpotent,
    super_trace,
)

LN2 = math.log(2.0)


def default_generators() -> GeneratorSet:
    return GeneratorSet.conjugate_pairs("α", "β")


def _as_element(gens: GeneratorSet, theta) -> GrassmannElement:
    if isinstance(theta, GrassmannElement):
        return theta
    if theta is None or theta == 0:
        return gens.zero()
    return gens.gen(theta)


# --------------------------------------------------------------------------
# states
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FermionState:
    """Grassmann-valued ket stored as the column operator ``|psi><0|``."""

    column: SuperOperator

    @classmethod
    def from_amplitudes(cls, gens: GeneratorSet, amps, modes: int = 1) -> "FermionState":
        """``sum_n amps[n] |n>`` with each amplitude written left of its ket."""
        op = SuperOperator(gens, modes)
        for n, amp in enumerate(amps):
            if not isinstance(amp, GrassmannElement):
                amp = gens.scalar(amp)
            op = op + SuperOperator.grassmann(amp, modes) * basis_ket(gens, n, modes)
        return cls(op)

    @property
    def gens(self) -> GeneratorSet:
        return self.column.gens

    @property
    def modes(self) -> int:
        return self.column.modes

    def amplitude(self, n: int) -> GrassmannElement:
        """Coefficient of ``|n>`` (written on the left)."""
        return self.column.entry(n, 0)

    def projection(self, n: int) -> GrassmannElement:
        """Graded overlap ``<n|psi>``."""
        return self.column.sandwich(n, 0)

    def dual(self, n: int) -> GrassmannElement:
        """Graded overlap ``<psi|n>``."""
        return self.column.dagger.sandwich(0, n)

    @property
    def bra(self) -> SuperOperator:
        return self.column.dagger

    def overlap(self, other: "FermionState") -> GrassmannElement:
        """``<self|other>``."""
        return (self.bra * other.column).entry(0, 0)

    def outer(self, other: "FermionState") -> SuperOperator:
        """``|self><other|``."""
        return self.column * other.bra

    def apply(self, op: SuperOperator) -> "FermionState":
        return FermionState(op * self.column)

    def is_physical(self) -> bool:
        """True when no amplitude carries Grassmann monomials."""
        return self.column.is_grassmann_free()

    def vector(self) -> np.ndarray:
        return self.column.numeric()[:, 0]

    def max_abs_diff(self, other: "FermionState") -> float:
        return self.column.max_abs_diff(other.column)

    def __eq__(self, other):
        return isinstance(other, FermionState) and self.column == other.column

    __hash__ = None


def vacuum(gens: GeneratorSet | None = None, modes: int = 1) -> FermionState:
    return FermionState(basis_ket(gens or default_generators(), 0, modes))


# --------------------------------------------------------------------------
# single-mode coherent states
# --------------------------------------------------------------------------

def displacement_generator(theta, gens: GeneratorSet | None = None, modes: int = 1,
                           mode: str = "a") -> SuperOperator:
    """``c_dag θ - θ* c`` for the mode ``c`` in ``{a, b}``."""
    gens = gens or (theta.gens if isinstance(theta, GrassmannElement) else default_generators())
    theta = _as_element(gens, theta)
    ladders = fermion_ladders(gens, modes)
    c = ladders if modes == 1 else ladders["ab".index(mode)]
    gr = lambda x: SuperOperator.grassmann(x, modes)
    return c.dagger * gr(theta) - gr(theta.conjugate()) * c


def fermion_displacement(theta, gens: GeneratorSet | None = None, modes: int = 1,
                         mode: str = "a") -> SuperOperator:
    """``D(θ) = exp(c_dag θ - θ* c)``, summed exactly (the generator is nilpotent).

    ``theta`` may be a generator label (``"α"``) or any odd Grassmann element,
    e.g. a Bogoliubov combination ``u α + v β*``.
    """
    return super_exp_nilpotent(displacement_generator(theta, gens, modes, mode))


def fermion_coherent_state(theta="α", gens: GeneratorSet | None = None) -> FermionState:
    """``|θ> = D(θ)|0>``."""
    gens = gens or default_generators()
    return vacuum(gens).apply(fermion_displacement(theta, gens))


def coherent_state_series(theta="α", gens: GeneratorSet | None = None) -> FermionState:
    """``exp(-θ* θ / 2) sum_n (-θ)^n |n>`` assembled coefficient by coefficient."""
    gens = gens or default_generators()
    th = _as_element(gens, theta)
    pref = (-(th.conjugate() * th) / 2).exp()
    return FermionState.from_amplitudes(gens, [pref, pref * (-th)])


def coherent_overlap_formula(alpha="α", beta="β", gens: GeneratorSet | None = None) -> GrassmannElement:
    """``exp(α* β - α* α / 2 - β* β / 2)``."""
    gens = gens or default_generators()
    a, b = _as_element(gens, alpha), _as_element(gens, beta)
    ac, bc = a.conjugate(), b.conjugate()
    return (ac * b - ac * a / 2 - bc * b / 2).exp()


def rho_alpha(theta="α", gens: GeneratorSet | None = None) -> SuperOperator:
    """Cahill-Glauber coherent density ``|-θ><θ|``."""
    gens = gens or default_generators()
    th = _as_element(gens, theta)
    return fermion_coherent_state(-th, gens).outer(fermion_coherent_state(th, gens))


def rho_alpha_matrix_form(theta="α", gens: GeneratorSet | None = None):
    """``[[1 - θ*θ, θ*], [-θ, θ*θ]]`` as Grassmann elements."""
    gens = gens or default_generators()
    th = _as_element(gens, theta)
    tc = th.conjugate()
    return [[1 - tc * th, tc], [-th, tc * th]]


def berezin_operator(op: SuperOperator, *vars_) -> SuperOperator:
    """Integrate every Grassmann coefficient: ``int dv1 ... dvk op``."""
    out = {}
    for mono, mat in op.terms.items():
        x = GrassmannElement(op.gens, {mono: 1.0})
        for v in reversed(vars_):
            x = berezin_integrate(x, v)
        for m2, c in x.terms.items():
            out[m2] = out[m2] + c * mat if m2 in out else c * mat
    return SuperOperator(op.gens, op.modes, out)


def completeness_integral(theta="α", gens: GeneratorSet | None = None) -> SuperOperator:
    """``int dθ* dθ |θ><θ|``."""
    gens = gens or default_generators()
    name = gens.names[gens.index(theta)]
    ket = fermion_coherent_state(name, gens)
    return berezin_operator(ket.outer(ket), gens.names[gens.partner[gens.index(name)]], name)


def displaced_number_state(theta, n: int, gens: GeneratorSet | None = None):
    """``D(θ)|n>`` and ``(a_dag - θ*)^n |θ>`` for ``n`` in ``{0, 1}``."""
    if n not in (0, 1):
        raise ValueError("fermion occupation must be 0 or 1")
    gens = gens or default_generators()
    th = _as_element(gens, theta)
    direct = FermionState(basis_ket(gens, n)).apply(fermion_displacement(th, gens))
    coh = fermion_coherent_state(th, gens)
    if n == 0:
        return direct, coh
    a = fermion_ladders(gens, 1)
    shifted = a.dagger - SuperOperator.grassmann(th.conjugate(), 1)
    return direct, coh.apply(shifted)


def matrix_element_signs(theta="α", gens: GeneratorSet | None = None) -> dict:
    """``<m|ρ|n>`` against ``(-1)^{m(n+1)} <θ|n><m|θ>`` for all ``m, n``.

    Returns the two sides per ``(m, n)``.
    """
    gens = gens or default_generators()
    rho = rho_alpha(theta, gens)
    ket = fermion_coherent_state(theta, gens)
    out = {}
    for m in (0, 1):
        for n in (0, 1):
            rhs = ket.dual(n) * ket.projection(m) * (-1) ** (m * (n + 1))
            out[m, n] = (rho.sandwich(m, n), rhs)
    return out


# --------------------------------------------------------------------------
# two-mode squeezing
# --------------------------------------------------------------------------

def squeeze_generator(gens: GeneratorSet | None = None) -> SuperOperator:
    """``a_dag b_dag - b a``; anti-Hermitian and squares to ``-1`` on ``{|00>, |11>}``."""
    gens = gens or default_generators()
    a, b = fermion_ladders(gens, 2)
    return a.dagger * b.dagger - b * a


def fermion_squeeze(gamma: float, gens: GeneratorSet | None = None) -> SuperOperator:
    """``S(γ) = exp[γ (a_dag b_dag - b a)] = 1 + sin γ K + (1 - cos γ) K^2``.

    The closed form uses ``K^3 = -K``.
    """
    k = squeeze_generator(gens)
    eye = SuperOperator.identity(k.gens, 2)
    return eye + k * math.sin(gamma) + (k * k) * (1 - math.cos(gamma))


def gamma_from_tau(tau: float) -> float:
    """``cos γ = (1 + e^-τ)^-1/2``; ``τ = 0`` maps to ``π/4``."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    return math.atan(math.exp(-tau / 2))


def tau_from_gamma(gamma: float) -> float:
    if not 0 <= gamma <= math.pi / 4:
        raise ValueError("only gamma in [0, pi/4] has a tau image")
    return math.inf if gamma == 0 else -2 * math.log(math.tan(gamma))


@dataclass(frozen=True)
class FermionGibbs:
    tau: float

    @property
    def Z(self) -> float:
        return 1 + math.exp(-self.tau)

    @property
    def weights(self) -> np.ndarray:
        return np.array([1.0, math.exp(-self.tau)]) / self.Z

    def operator(self, gens: GeneratorSet | None = None) -> SuperOperator:
        return SuperOperator.from_matrix(gens or default_generators(), np.diag(self.weights))


def _tmss_amplitudes(tau: float) -> tuple[float, float]:
    if tau < 0:
        raise ValueError("tau must be >= 0")
    z = 1 + math.exp(-tau)
    return 1 / math.sqrt(z), math.exp(-tau / 2) / math.sqrt(z)


def fermion_tmss(tau: float, gens: GeneratorSet | None = None) -> FermionState:
    """``(1 + e^-τ)^-1/2 (1 + e^-τ/2 a_dag b_dag)|00>``; ``τ = 0`` is allowed."""
    gens = gens or default_generators()
    c0, c1 = _tmss_amplitudes(tau)
    return FermionState.from_amplitudes(gens, [c0, 0, 0, c1], modes=2)


def alt_state(tau: float, gens: GeneratorSet | None = None) -> FermionState:
    """``(|0>|1> + e^-τ/2 |1>|0>) / sqrt(Z)``."""
    gens = gens or default_generators()
    c0, c1 = _tmss_amplitudes(tau)
    return FermionState.from_amplitudes(gens, [0, c0, c1, 0], modes=2)


def partial_trace_b(op: SuperOperator) -> SuperOperator:
    """Trace out mode ``b``: ``(Tr_b X)[m, n] = sum_r X[(m r), (n r)]``.

    With coefficients on the left and ``b`` to the right of ``a`` in every
    basis ket, no reordering signs arise.
    """
    if op.modes != 2:
        raise ValueError("partial trace needs a two-mode operator")
    out = {}
    for mono, mat in op.terms.items():
        out[mono] = mat.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)
    return SuperOperator(op.gens, 1, out)


def bogoliubov_grassmann(alpha, beta, gamma: float, gens: GeneratorSet | None = None):
    """``(ᾱ, β̄)`` with ``(ᾱ, β̄*) = B_F(γ) (α, β*)``."""
    gens = gens or default_generators()
    a, b = _as_element(gens, alpha), _as_element(gens, beta)
    u, v = math.cos(gamma), math.sin(gamma)
    abar = a * u + b.conjugate() * v
    bbar_conj = a * (-v) + b.conjugate() * u
    return abar, bbar_conj.conjugate()


def two_mode_displacement(alpha, beta, gens: GeneratorSet | None = None) -> SuperOperator:
    gens = gens or default_generators()
    return (fermion_displacement(alpha, gens, modes=2, mode="a")
            * fermion_displacement(beta, gens, modes=2, mode="b"))


@dataclass
class IntertwiningReport:
    gamma: float
    lhs: SuperOperator
    rhs: SuperOperator

    @property
    def residual(self) -> float:
        return self.lhs.max_abs_diff(self.rhs)


def fermion_cs_identity_check(alpha="α", beta="β", gamma: float = 0.6,
                              gens: GeneratorSet | None = None) -> IntertwiningReport:
    """``S D_a(α) D_b(β)`` versus ``D_a(ᾱ) D_b(β̄) S``."""
    gens = gens or default_generators()
    s = fermion_squeeze(gamma, gens)
    abar, bbar = bogoliubov_grassmann(alpha, beta, gamma, gens)
    lhs = s * two_mode_displacement(alpha, beta, gens)
    rhs = two_mode_displacement(abar, bbar, gens) * s
    return IntertwiningReport(gamma, lhs, rhs)


def cs_ket(alpha, beta, gamma: float, gens: GeneratorSet | None = None) -> FermionState:
    """``|α, β; γ> = D_a(α) D_b(β) S(γ) |00>``."""
    gens = gens or default_generators()
    op = two_mode_displacement(alpha, beta, gens) * fermion_squeeze(gamma, gens)
    return vacuum(gens, 2).apply(op)


def fermion_reduced_density(alpha="α", beta="β", gamma: float = 0.6,
                            gens: GeneratorSet | None = None) -> SuperOperator:
    """``Tr_b |-α, -β, γ><γ, β, α|``."""
    gens = gens or default_generators()
    a, b = _as_element(gens, alpha), _as_element(gens, beta)
    return partial_trace_b(cs_ket(-a, -b, gamma, gens).outer(cs_ket(a, b, gamma, gens)))


def displaced_fermion_gibbs(alpha, tau: float, gens: GeneratorSet | None = None,
                            ordered: bool = True) -> SuperOperator:
    """``D(-α) f(τ) D(α)^dag`` (ordered, the ``|-α><α|`` pattern) or ``D(α) f D(α)^dag``."""
    gens = gens or default_generators()
    a = _as_element(gens, alpha)
    f = FermionGibbs(tau).operator(gens)
    left = fermion_displacement(-a if ordered else a, gens)
    return left * f * fermion_displacement(a, gens).dagger


@dataclass
class ReducedDensityReport:
    tau: float
    rho: SuperOperator
    ordered_residual: float
    literal_residual: float
    trace: GrassmannElement


def reduced_density_check(alpha="α", beta="β", gamma: float = 0.6,
                          gens: GeneratorSet | None = None) -> ReducedDensityReport:
    """Compare ``Tr_b`` of the squeezed coherent density with displaced Gibbs forms.

    ``ordered_residual`` is against ``D(-α) f D(α)^dag``; ``literal_residual``
    against ``D(α) f D(α)^dag``, which differs because the plain trace is not
    cyclic for Grassmann-odd blocks.
    """
    gens = gens or default_generators()
    tau = tau_from_gamma(gamma)
    rho = fermion_reduced_density(alpha, beta, gamma, gens)
    if math.isinf(tau):
        ordered = rho_alpha(alpha, gens)
        literal = fermion_coherent_state(alpha, gens).outer(fermion_coherent_state(alpha, gens))
    else:
        ordered = displaced_fermion_gibbs(alpha, tau, gens, ordered=True)
        literal = displaced_fermion_gibbs(alpha, tau, gens, ordered=False)
    return ReducedDensityReport(tau, rho, rho.max_abs_diff(ordered), rho.max_abs_diff(literal),
                                super_trace(rho))


# --------------------------------------------------------------------------
# physical entropies
# --------------------------------------------------------------------------

def numeric_reduced(state: FermionState) -> np.ndarray:
    """Mode-a reduced density of a Grassmann-free two-mode state."""
    if not state.is_physical():
        raise ValueError("entropy is only defined for Grassmann-free states")
    return partial_trace_b(state.outer(state)).numeric()


def entropy_of(rho: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(np.asarray(rho))
    lam = np.clip(lam, 0, None)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def fermion_entropy_energy(tau: float) -> tuple[float, float]:
    """``S_F = ln(1 + e^-τ) + τ / (e^τ + 1)`` and ``E_F = 1 / (e^τ + 1)``."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if math.isinf(tau):
        return 0.0, 0.0
    return math.log1p(math.exp(-tau)) + tau / (math.exp(tau) + 1), 1 / (math.exp(tau) + 1)


@dataclass
class AltStateReport:
    tau: float
    rho: np.ndarray
    rho_alt: np.ndarray
    entropy: float
    entropy_alt: float

    @property
    def identical(self) -> bool:
        return bool(np.array_equal(self.rho, self.rho_alt))


def alt_state_check(tau: float, gens: GeneratorSet | None = None) -> AltStateReport:
    rho = numeric_reduced(fermion_tmss(tau, gens))
    rho_alt = numeric_reduced(alt_state(tau, gens))
    return AltStateReport(tau, rho, rho_alt, entropy_of(rho), entropy_of(rho_alt))


@dataclass
class DaggerReport:
    """How ``ρ_α^dag`` compares with ``ρ_α`` and ``ρ_{-α}``."""

    equals_rho: bool
    equals_rho_minus: bool
    dagger: SuperOperator


def rho_alpha_dagger_report(theta="α", gens: GeneratorSet | None = None) -> DaggerReport:
    gens = gens or default_generators()
    th = _as_element(gens, theta)
    rho = rho_alpha(th, gens)
    dag = rho.dagger
    return DaggerReport(dag == rho, dag == rho_alpha(-th, gens), dag)


# --------------------------------------------------------------------------
# relation reports
# --------------------------------------------------------------------------

def displacement_shift_residual(theta="α", gens: GeneratorSet | None = None) -> float:
    """``D a D^dag - (a - θ)``."""
    gens = gens or default_generators()
    th = _as_element(gens, theta)
    d = fermion_displacement(th, gens)
    a = fermion_ladders(gens, 1)
    eye = SuperOperator.identity(gens, 1)
    return (d * a * d.dagger).max_abs_diff(a - SuperOperator.grassmann(th, 1) * eye)


@dataclass
class DualRelationReport:
    """``<θ| a^dag`` and ``<θ| D^dag(θ)`` each compared with ``<θ| θ*``."""

    ladder_residual: float
    displacement_residual: float


def dual_relation_check(theta="α", gens: GeneratorSet | None = None) -> DualRelationReport:
    gens = gens or default_generators()
    th = _as_element(gens, theta)
    bra = fermion_coherent_state(th, gens).bra
    target = bra * SuperOperator.grassmann(th.conjugate(), 1)
    a = fermion_ladders(gens, 1)
    d = fermion_displacement(th, gens)
    return DualRelationReport((bra * a.dagger).max_abs_diff(target),
                              (bra * d.dagger).max_abs_diff(target))


def car_residual(gamma: float, gens: GeneratorSet | None = None) -> float:
    """Largest CAR violation of the squeezed pair ``S a S^dag, S b S^dag``."""
    gens = gens or default_generators()
    s = fermion_squeeze(gamma, gens)
    a, b = fermion_ladders(gens, 2)
    ops = [s * a * s.dagger, s * b * s.dagger]
    eye = SuperOperator.identity(gens, 2)
    worst = 0.0
    for i, x in enumerate(ops):
        for j, y in enumerate(ops):
            worst = max(worst, (x * y + y * x).max_abs_diff(SuperOperator(gens, 2)))
            acomm = x * y.dagger + y.dagger * x
            worst = max(worst, acomm.max_abs_diff(eye if i == j else SuperOperator(gens, 2)))
    return worst


def squeeze_bogoliubov_residual(gamma: float, gens: GeneratorSet | None = None) -> float:
    """``S a S^dag = cos γ a - sin γ b^dag`` and ``S b S^dag = cos γ b + sin γ a^dag``."""
    gens = gens or default_generators()
    s = fermion_squeeze(gamma, gens)
    a, b = fermion_ladders(gens, 2)
    c, sn = math.cos(gamma), math.sin(gamma)
    ra = (s * a * s.dagger).max_abs_diff(a * c - b.dagger * sn)
    rb = (s * b * s.dagger).max_abs_diff(b * c + a.dagger * sn)
    return max(ra, rb)
