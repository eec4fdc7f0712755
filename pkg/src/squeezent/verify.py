"""Aggregated relation checks grouped into suites.

Each check returns a residual and a tolerance; ``pass`` means
``residual <= tolerance``.  Checks marked ``record`` report an outcome that
is documented rather than asserted and come back as ``warn`` when the
residual is nonzero.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import entanglement as ent
from . import fermion as fm
from . import fock
from .grassmann import (
    GeneratorSet,
    GrassmannElement,
    SuperOperator,
    berezin_integrate,
    berezin_multiple,
    fermion_ladders,
    super_exp_nilpotent,
    super_trace,
)

SUITES = ("boson", "fermion", "grassmann", "maxent")
STATUS_RANK = {"pass": 0, "warn": 1, "fail": 2}


@dataclass
class CheckResult:
    name: str
    status: str
    residual: float
    tolerance: float
    notes: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{self.name}\t{self.status}\t{self.residual:.3e}\t{self.tolerance:.1e}"


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def status(self) -> str:
        if not self.checks:
            return "pass"
        return max((c.status for c in self.checks), key=STATUS_RANK.__getitem__)

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def summary_lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def render(self) -> str:
        rows = [f"[{self.suite}]"]
        for c in self.checks:
            note = f"  ({c.notes})" if c.notes else ""
            rows.append(f"  {c.status.upper():4s}  {c.name:<44s} residual={c.residual:.3e} "
                        f"tol={c.tolerance:.1e} {c.seconds:6.2f}s{note}")
        rows.append(f"  -> {self.status}")
        return "\n".join(rows)


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[[], float]
    tolerance: float
    notes: str = ""
    record: bool = False


def run_checks(suite: str, checks: list[Check]) -> SuiteReport:
    report = SuiteReport(suite)
    for chk in checks:
        t0 = time.perf_counter()
        try:
            res = float(chk.fn())
        except Exception as exc:  # a crashing check is a failing check
            report.checks.append(CheckResult(chk.name, "fail", math.inf, chk.tolerance,
                                             f"{type(exc).__name__}: {exc}"))
            continue
        ok = res <= chk.tolerance
        status = "pass" if ok else ("warn" if chk.record else "fail")
        report.checks.append(CheckResult(chk.name, status, res, chk.tolerance, chk.notes,
                                         time.perf_counter() - t0))
    return report


# --------------------------------------------------------------------------
# random exact elements
# --------------------------------------------------------------------------

def random_element(gens: GeneratorSet, rng: np.random.Generator, terms: int = 4) -> GrassmannElement:
    """Sparse element with small integer (Gaussian-integer) coefficients."""
    out = {}
    n = len(gens)
    for _ in range(terms):
        k = int(rng.integers(0, n + 1))
        mono = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        out[mono] = complex(int(rng.integers(-3, 4)), int(rng.integers(-2, 3)))
    return GrassmannElement(gens, out)


def random_superop(gens: GeneratorSet, rng: np.random.Generator, modes: int = 1,
                   terms: int = 3) -> SuperOperator:
    dim = 2 ** modes
    out = {}
    for _ in range(terms):
        mono = next(iter(random_element(gens, rng, 1).terms), ())
        mat = rng.integers(-2, 3, size=(dim, dim)) * (rng.random((dim, dim)) < 0.5)
        out[mono] = out.get(mono, 0) + mat.astype(complex)
    return SuperOperator(gens, modes, out)


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def grassmann_checks(seed: int = 7, trials: int = 100) -> list[Check]:
    gens = fm.default_generators()
    names = gens.names
    g = [gens.gen(n) for n in names]
    al, als = gens.gen("α"), gens.gen("α*")

    def nilpotency():
        return max((x * x).max_abs_diff(gens.zero()) for x in g)

    def anticommutation():
        return max((x * y + y * x).max_abs_diff(gens.zero()) for x in g for y in g)

    def conjugation():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            x, y = random_element(gens, rng), random_element(gens, rng)
            worst = max(worst, (x * y).conjugate().max_abs_diff(y.conjugate() * x.conjugate()),
                        x.conjugate().conjugate().max_abs_diff(x))
        return worst

    def conjugation_example():
        g4 = GeneratorSet.conjugate_pairs("α1", "α2", "β1", "β2")
        c = 2 - 3j
        x = g4.gen("α1") * g4.gen("α2*") + g4.gen("β1") * g4.gen("β2") * c
        want = g4.gen("α2") * g4.gen("α1*") + g4.gen("β2*") * g4.gen("β1*") * c.conjugate()
        return x.conjugate().max_abs_diff(want)

    def berezin():
        one = gens.one()
        res = [
            berezin_integrate(one, "α").max_abs_diff(gens.zero()),
            berezin_integrate(al, "α").max_abs_diff(one),
            berezin_integrate(als, "α*").max_abs_diff(one),
            berezin_multiple(al * als, "α*", "α").max_abs_diff(one),
        ]
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            x = random_element(gens, rng)
            for k in range(len(names)):
                # conj(int dg x) = (-1)^(|x|+1) int dg* x*, per homogeneous part
                for p in (0, 1):
                    xp = x.graded_part(p)
                    lhs = berezin_integrate(xp, k).conjugate()
                    rhs = berezin_integrate(xp.conjugate(), gens.partner[k]) * (-1) ** (p + 1)
                    res.append(lhs.max_abs_diff(rhs))
        return max(res)

    def car_relations():
        eye1 = SuperOperator.identity(gens, 1)
        a = fermion_ladders(gens, 1)
        zero1 = SuperOperator(gens, 1)
        res = [(a * a.dagger + a.dagger * a).max_abs_diff(eye1), (a * a).max_abs_diff(zero1)]
        for x in g:
            gx = SuperOperator.grassmann(x, 1)
            res += [(gx * a + a * gx).max_abs_diff(zero1),
                    (gx * a.dagger + a.dagger * gx).max_abs_diff(zero1)]
        A, B = fermion_ladders(gens, 2)
        eye2 = SuperOperator.identity(gens, 2)
        zero2 = SuperOperator(gens, 2)
        for x in (A, B):
            res += [(x * x.dagger + x.dagger * x).max_abs_diff(eye2), (x * x).max_abs_diff(zero2)]
            for y in g:
                gy = SuperOperator.grassmann(y, 2)
                res += [(gy * x + x * gy).max_abs_diff(zero2)]
        res += [(A * B + B * A).max_abs_diff(zero2),
                (A * B.dagger + B.dagger * A).max_abs_diff(zero2)]
        return max(res)

    def associativity():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            x, y, z = (random_superop(gens, rng) for _ in range(3))
            worst = max(worst, ((x * y) * z).max_abs_diff(x * (y * z)))
        return worst

    def dagger_antiautomorphism():
        rng = np.random.default_rng(seed + 1)
        worst = 0.0
        for _ in range(trials):
            x, y = random_superop(gens, rng), random_superop(gens, rng)
            worst = max(worst, (x * y).dagger.max_abs_diff(y.dagger * x.dagger),
                        x.dagger.dagger.max_abs_diff(x))
        return worst

    def dagger_example():
        a = fermion_ladders(gens, 1)
        gr = lambda x: SuperOperator.grassmann(x, 1)
        lhs = (a * gr(al) * a.dagger * gr(gens.gen("β*"))).dagger
        rhs = a * a.dagger * gr(als) * gr(gens.gen("β"))
        return lhs.max_abs_diff(rhs)

    def nilpotent_exp():
        x = fm.displacement_generator("α", gens)
        a = fermion_ladders(gens, 1)
        eye = SuperOperator.identity(gens, 1)
        sq = SuperOperator.grassmann(als * al, 1) * (a.dagger * a * 2 - eye)
        e = super_exp_nilpotent(x) * super_exp_nilpotent(-x)
        cube = x * x * x
        return max((x * x).max_abs_diff(sq), e.max_abs_diff(eye), cube.max_abs_diff(SuperOperator(gens, 1)))

    def trace_basics():
        return abs(super_trace(SuperOperator.identity(gens, 1)).scalar_part - 2)

    return [
        Check("nilpotency", nilpotency, 0.0),
        Check("generator anticommutation", anticommutation, 0.0),
        Check("conjugation anti-automorphism", conjugation, 0.0),
        Check("conjugation worked example", conjugation_example, 0.0),
        Check("berezin identities", berezin, 0.0),
        Check("superalgebra CAR and mixed relations", car_relations, 0.0),
        Check(f"associativity ({trials} triples)", associativity, 0.0),
        Check(f"dagger anti-automorphism ({trials} pairs)", dagger_antiautomorphism, 0.0),
        Check("dagger worked example", dagger_example, 0.0),
        Check("nilpotent exponential", nilpotent_exp, 0.0),
        Check("trace of identity", trace_basics, 0.0),
    ]


def fermion_checks() -> list[Check]:
    gens = fm.default_generators()
    al, als = gens.gen("α"), gens.gen("α*")

    def coherent_expansion():
        ket = fm.fermion_coherent_state("α", gens)
        return ket.max_abs_diff(fm.coherent_state_series("α", gens))

    def projection_form():
        ket = fm.fermion_coherent_state("α", gens)
        pref = (-(als * al) / 2).exp()
        return max(ket.projection(0).max_abs_diff(pref), ket.projection(1).max_abs_diff(pref * al))

    def eigenvalue():
        ket = fm.fermion_coherent_state("α", gens)
        a = fermion_ladders(gens, 1)
        return ket.apply(a).column.max_abs_diff(SuperOperator.grassmann(al, 1) * ket.column)

    def overlap():
        lhs = fm.fermion_coherent_state("α", gens).overlap(fm.fermion_coherent_state("β", gens))
        return lhs.max_abs_diff(fm.coherent_overlap_formula("α", "β", gens))

    def unitarity():
        d = fm.fermion_displacement("α", gens)
        return (d.dagger * d).max_abs_diff(SuperOperator.identity(gens, 1))

    def rho_matrix():
        got = fm.rho_alpha("α", gens).matrix(graded=True)
        want = fm.rho_alpha_matrix_form("α", gens)
        return max(got[i][j].max_abs_diff(want[i][j]) for i in range(2) for j in range(2))

    def rho_trace():
        rho = fm.rho_alpha("α", gens)
        a = fermion_ladders(gens, 1)
        return max(super_trace(rho).max_abs_diff(gens.one()),
                   super_trace(rho * a.dagger * a).max_abs_diff(als * al))

    def sign_rule():
        return max(l.max_abs_diff(r) for l, r in fm.matrix_element_signs("α", gens).values())

    def diagonal_symmetry():
        ket, neg = fm.fermion_coherent_state(al, gens), fm.fermion_coherent_state(-al, gens)
        return max((neg.projection(n) * ket.dual(n)).max_abs_diff(ket.dual(n) * ket.projection(n))
                   for n in (0, 1))

    def completeness():
        return fm.completeness_integral("α", gens).max_abs_diff(SuperOperator.identity(gens, 1))

    def displaced_number():
        return max(d.max_abs_diff(s) for d, s in
                   (fm.displaced_number_state("α", n, gens) for n in (0, 1)))

    def intertwining(gamma):
        return lambda: fm.fermion_cs_identity_check("α", "β", gamma, gens).residual

    def alt_state():
        rep = fm.alt_state_check(1.0, gens)
        return 0.0 if rep.identical else float(np.max(np.abs(rep.rho - rep.rho_alt)))

    def entropy_tau0():
        s_closed = fm.fermion_entropy_energy(0.0)[0]
        s_gibbs = fm.entropy_of(fm.FermionGibbs(0.0).operator(gens).numeric())
        return max(abs(s_closed - math.log(2)), abs(s_gibbs - math.log(2)))

    def entropy_oracle():
        worst = 0.0
        for tau in (0.0, 0.5, 1.0, 3.0):
            rho = fm.numeric_reduced(fm.fermion_tmss(tau, gens))
            s, e = fm.fermion_entropy_energy(tau)
            worst = max(worst, abs(fm.entropy_of(rho) - s), abs(rho[1, 1].real - e))
        return worst

    def tmss_vs_squeeze():
        worst = 0.0
        for tau in (0.0, 1.0, 4.0):
            s = fm.vacuum(gens, 2).apply(fm.fermion_squeeze(fm.gamma_from_tau(tau), gens))
            worst = max(worst, s.max_abs_diff(fm.fermion_tmss(tau, gens)))
        return worst

    def reduced_ordered():
        return max(fm.reduced_density_check("α", "β", g, gens).ordered_residual
                   for g in (0.3, 0.6, math.pi / 4))

    def reduced_literal():
        return fm.reduced_density_check("α", "β", 0.6, gens).literal_residual

    def dual_literal():
        return fm.dual_relation_check("α", gens).displacement_residual

    def rho_dagger():
        rep = fm.rho_alpha_dagger_report("α", gens)
        return 0.0 if rep.equals_rho else rep.dagger.max_abs_diff(fm.rho_alpha("α", gens))

    return [
        Check("D a D^dag = a - alpha", lambda: fm.displacement_shift_residual("α", gens), 0.0),
        Check("D^dag D = 1", unitarity, 0.0),
        Check("coherent state number expansion", coherent_expansion, 0.0),
        Check("<n|alpha> = exp(-a*a/2) alpha^n (graded)", projection_form, 0.0),
        Check("a|alpha> = alpha|alpha>", eigenvalue, 0.0),
        Check("coherent overlap", overlap, 0.0),
        Check("rho_alpha matrix form", rho_matrix, 0.0),
        Check("rho_alpha trace and number", rho_trace, 0.0),
        Check("matrix-element sign rule", sign_rule, 0.0),
        Check("m = n symmetry", diagonal_symmetry, 0.0),
        Check("completeness", completeness, 0.0),
        Check("displaced number states", displaced_number, 0.0),
        Check("<alpha| a^dag = <alpha| alpha*", lambda: fm.dual_relation_check("α", gens).ladder_residual, 0.0),
        Check("squeeze Bogoliubov (gamma=0.7)", lambda: fm.squeeze_bogoliubov_residual(0.7, gens), 1e-13),
        Check("squeeze CAR (gamma=0.7)", lambda: fm.car_residual(0.7, gens), 1e-13),
        Check("B_F determinant", lambda: abs(fock.bogoliubov_matrix(0.7, "fermion").det - 1), 1e-15),
        Check("TMSS = S(gamma(tau))|00>", tmss_vs_squeeze, 1e-13),
        *[Check(f"intertwining (gamma={g:.4g})", intertwining(g), 1e-13) for g in (0.0, 0.6, math.pi / 4)],
        Check("Tr_b = D(-alpha) f D(alpha)^dag", reduced_ordered, 1e-13),
        Check("alternative state reduced density", alt_state, 0.0),
        Check("entropy at tau=0 is ln 2", entropy_tau0, 0.0),
        Check("entropy/energy closed forms", entropy_oracle, 1e-13),
        Check("Tr_b = D(alpha) f D(alpha)^dag (literal)", reduced_literal, 0.0, record=True,
              notes="not attainable for |-a,-b><b,a|; recorded"),
        Check("<alpha| D^dag = <alpha| alpha* (literal)", dual_literal, 0.0, record=True,
              notes="holds with a^dag in place of D^dag; recorded"),
        Check("rho_alpha^dag = rho_alpha", rho_dagger, 0.0, record=True,
              notes="rho_alpha^dag equals rho_{-alpha}; recorded"),
    ]


def boson_checks(cutoff: int | None = None) -> list[Check]:
    n_route = cutoff or 12

    def closed_form():
        worst = 0.0
        for tau in (0.5, 1.0, 2.0):
            rho = ent.tmss_reduced(tau, 60)
            worst = max(worst, abs(ent.von_neumann_entropy(rho) - ent.entropy_closed_form(tau)),
                        abs(ent.reduced_energy(rho) - ent.energy_closed_form(tau)))
        return worst

    def routes():
        worst = 0.0
        for g in (0.3, 0.7, 1.0):
            with warnings.catch_warnings():
                # the tails at n_max=12 are expected; the routes compare raw amplitudes
                warnings.simplefilter("ignore", fock.TruncationWarning)
                states = [fock.tmss_expm(g, n_route).raw, fock.tmss_bch(g, n_route).raw,
                          fock.tmss_fock(fock.tau_from_gamma(g), n_route).raw]
            for i in range(3):
                for j in range(i):
                    worst = max(worst, float(np.max(np.abs(states[i] - states[j]))))
        return worst

    def displacement():
        vals = (0, 0.3, 0.2j)
        dev, ents = 0.0, []
        tau = fock.tau_from_gamma(0.5)
        for xi in vals:
            rep = ent.displaced_gibbs_check(xi, tau, 40, etas=vals)
            dev = max(dev, rep.deviation)
            ents += rep.entropies
        return max(dev, max(ents) - min(ents))

    def operator_relations():
        return max(c.residual for c in fock.bogoliubov_operator_check(0.5, n_route))

    def bch():
        return fock.bch_identity_check(0.5, n_route)

    def fig1_monotone():
        d = np.array([ent.curve_chi(c).deltaS for c in np.geomspace(1, 1e4, 4001)])
        return float(max(0.0, -np.min(np.diff(d))))

    def psi_positive():
        return max(0.0, -min(ent.tmss_beats_psiN(n) for n in range(2, 101)))

    def legendre():
        return max(max(r.gibbs_residual, r.legendre_residual)
                   for r in (ent.legendre_report(t, 60) for t in (0.5, 1.0, 2.0)))

    return [
        Check("reduced entropy/energy closed forms", closed_form, 1e-10),
        Check(f"expm/BCH/Fock routes (n_max={n_route})", routes, 1e-9),
        Check("displacement invariance and D f D^dag", displacement, 1e-8),
        Check(f"Bogoliubov operator relations (n_max={n_route})", operator_relations, 1e-8),
        Check(f"BCH disentangling (n_max={n_route})", bch, 1e-9),
        Check("deltaS(1) = 0", lambda: abs(ent.curve_chi(1).deltaS), 0.0),
        Check("deltaS(2) = 0.26165", lambda: abs(ent.curve_chi(2).deltaS - 0.26165), 1e-4),
        Check("deltaS monotone on [1, 1e4]", fig1_monotone, 0.0),
        Check("deltaS(1e6) = 1 - ln 2", lambda: abs(ent.curve_chi(1e6).deltaS - (1 - math.log(2))), 1e-5),
        Check("TMSS beats |Psi_N>, N=2..100", psi_positive, 0.0),
        Check("Legendre bookkeeping", legendre, 1e-10),
    ]


def maxent_checks(seed: int = 7, samples: int = 200, cutoff: int | None = None) -> list[Check]:
    n = cutoff or 8
    holder = {}

    def report():
        if "r" not in holder:
            holder["r"] = ent.maxent_property_check(1.0, n, samples, seed)
        return holder["r"]

    def dominance():
        r = report()
        return max(0.0, r.max_entropy - r.bound)

    def tmss_bound():
        rho = ent.tmss_reduced(math.log(2), 60)
        return max(0.0, 2 * math.log(2) - ent.von_neumann_entropy(rho))

    return [
        Check(f"sampled entropies <= Gibbs bound ({samples} @ n_max={n}, seed={seed})", dominance, 1e-9,
              notes="finite-dimensional corroboration"),
        Check("sampled energies on shell", lambda: report().max_energy_error, 1e-9),
        Check("TMSS attains 2 ln 2 at E=1", tmss_bound, 1e-10),
    ]


def run_suite(suite: str, seed: int = 7, samples: int = 200, cutoff: int | None = None) -> list[SuiteReport]:
    if suite not in SUITES + ("all",):
        raise ValueError(f"unknown suite {suite!r}")
    chosen = SUITES if suite == "all" else (suite,)
    builders = {
        "grassmann": lambda: grassmann_checks(seed),
        "fermion": fermion_checks,
        "boson": lambda: boson_checks(cutoff),
        "maxent": lambda: maxent_checks(seed, samples, cutoff),
    }
    return [run_checks(name, builders[name]()) for name in chosen]
