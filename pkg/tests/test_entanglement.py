import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezent import entanglement as ent
from squeezent.fock import DisplacementParams, TruncationWarning, TwoModeState, tau_from_gamma

LN2 = math.log(2)


def naive_entropy_chi(chi):
    return 0.5 * ((chi + 1) * math.log(chi + 1) - (chi - 1) * math.log(chi - 1) - 2 * LN2)


def eig_entropy(rho):
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > 1e-300]
    return float(-np.sum(lam * np.log(lam)))


# -- density matrices ---------------------------------------------------------

def test_density_rejects_non_hermitian():
    with pytest.raises(ent.DensityError):
        ent.DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_density_rejects_bad_trace():
    with pytest.raises(ent.DensityError):
        ent.DensityMatrix(np.diag([0.5, 0.6]))


def test_partial_trace_rejects_unnormalized_grid():
    with pytest.raises(ent.DensityError):
        ent.partial_trace_b(np.eye(3))


def test_product_state_is_unentangled():
    grid = np.outer([0.6, 0.8j], [1 / math.sqrt(2), -1 / math.sqrt(2)])
    rho = ent.partial_trace_b(TwoModeState(grid))
    assert ent.von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("rho,expected", [
    (np.diag([0.5, 0.5]), LN2),
    (np.diag([1.0, 0.0]), 0.0),
    (np.diag([0.25] * 4), 2 * LN2),
])
def test_entropy_known_values(rho, expected):
    assert ent.von_neumann_entropy(ent.DensityMatrix(rho)) == pytest.approx(expected, abs=1e-15)


# -- closed forms -------------------------------------------------------------

@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
def test_tmss_reduced_matches_closed_form(tau):
    rho = ent.tmss_reduced(tau, 60)
    assert ent.von_neumann_entropy(rho) == pytest.approx(ent.entropy_closed_form(tau), abs=1e-10)
    assert ent.reduced_energy(rho) == pytest.approx(ent.energy_closed_form(tau), abs=1e-10)


def test_tau_ln2_values():
    assert ent.entropy_closed_form(LN2) == pytest.approx(2 * LN2, abs=1e-15)
    assert ent.energy_closed_form(LN2) == pytest.approx(1.0, abs=1e-15)
    assert ent.tau_for_energy(1.0) == pytest.approx(LN2, abs=1e-15)


def test_gibbs_weights_geometric():
    g = ent.gibbs_density(LN2, 60)
    n = np.arange(61)
    assert np.allclose(g.weights, 2.0 ** -(n + 1) / (1 - g.tail), rtol=1e-13)


@given(st.floats(min_value=1e-3, max_value=30.0))
def test_energy_tau_inverse(tau):
    e = ent.energy_closed_form(tau)
    if e > 1e-300:
        assert ent.tau_for_energy(e) == pytest.approx(tau, rel=1e-9)


# -- chi curve ----------------------------------------------------------------

@given(st.floats(min_value=1.001, max_value=1e4))
def test_entropy_chi_matches_naive(chi):
    assert ent.entropy_chi(chi) == pytest.approx(naive_entropy_chi(chi), rel=1e-10, abs=1e-12)


@given(st.floats(min_value=1.001, max_value=1e5))
def test_entropy_chi_matches_tau_form(chi):
    tau = math.log1p(2 / (chi - 1))
    assert ent.entropy_chi(chi) == pytest.approx(ent.entropy_closed_form(tau), rel=1e-11)


def test_chi_three():
    p = ent.curve_chi(3.0)
    assert p.E == 1.0
    assert p.S == pytest.approx(2 * LN2, abs=1e-15)
    assert p.tau == pytest.approx(LN2, abs=1e-15)


def test_delta_s_values():
    assert ent.curve_chi(1.0).deltaS == 0.0
    assert ent.curve_chi(2.0).deltaS == pytest.approx(1.5 * math.log(3) - 2 * LN2, abs=1e-15)
    assert ent.curve_chi(2.0).deltaS == pytest.approx(0.26165, abs=1e-4)
    assert ent.curve_chi(1e6).deltaS == pytest.approx(1 - LN2, abs=1e-5)


def test_delta_s_monotone():
    d = [ent.curve_chi(c).deltaS for c in np.geomspace(1, 1e4, 2000)]
    assert np.all(np.diff(d) >= 0)


# -- |Psi_N> ------------------------------------------------------------------

@pytest.mark.parametrize("N", [1, 2, 5, 10])
def test_psi_n_stats_match_state(N):
    rho = ent.partial_trace_b(ent.psi_N_state(N))
    e, s = ent.psi_N_stats(N)
    assert ent.reduced_energy(rho) == pytest.approx(e, abs=1e-14)
    assert ent.von_neumann_entropy(rho) == pytest.approx(s, abs=1e-14)


def test_psi_n_two():
    assert ent.psi_N_stats(2) == (0.5, LN2)


def test_tmss_beats_psi_n():
    d = [ent.tmss_beats_psiN(N) for N in range(2, 101)]
    assert min(d) > 0
    assert d[0] == pytest.approx(0.26165, abs=1e-4)
    assert d[0] < d[1] < 1 - LN2
    assert ent.tmss_beats_psiN(10) < 1 - LN2


@pytest.mark.parametrize("bad", [0, 1.5, -2])
def test_psi_n_rejects(bad):
    with pytest.raises(ValueError):
        ent.psi_N_state(bad)


# -- displaced Gibbs ----------------------------------------------------------

@pytest.mark.parametrize("xi", [0, 0.3, 0.2j])
def test_displaced_gibbs(xi):
    rep = ent.displaced_gibbs_check(xi, 1.0, 30, etas=(0, 0.3, 0.2j))
    assert rep.deviation < 1e-8
    assert rep.eta_spread < 1e-8
    assert max(rep.entropies) == pytest.approx(ent.entropy_closed_form(1.0), abs=1e-8)


def test_cs_reduced_density_invariant():
    vals = (0, 0.3, 0.2j)
    reps = [ent.cs_reduced_check(DisplacementParams(x, e), 0.5, 30)
            for x, e in itertools.product(vals, vals)]
    ents = [r.entropy for r in reps]
    assert max(r.deviation for r in reps) < 1e-8
    assert max(ents) - min(ents) < 1e-8
    assert ents[0] == pytest.approx(ent.entropy_closed_form(tau_from_gamma(0.5)), abs=1e-10)


# -- max entropy --------------------------------------------------------------

def test_tilt_hits_energy():
    rng = np.random.default_rng(3)
    grid = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    out = ent.tilt_to_energy(grid / np.linalg.norm(grid), 1.0)
    rho = ent.partial_trace_b(out)
    assert ent.reduced_energy(rho) == pytest.approx(1.0, abs=1e-10)


def test_maxent_small_run():
    rep = ent.maxent_property_check(1.0, 8, samples=40, seed=1)
    assert rep.violations == 0
    assert rep.gap > 0
    assert rep.max_energy_error < 1e-9


def test_maxent_seeded_reproducible():
    a = ent.maxent_property_check(0.5, 6, samples=10, seed=4)
    b = ent.maxent_property_check(0.5, 6, samples=10, seed=4)
    assert np.array_equal(a.entropies, b.entropies)


def test_tmss_attains_bound():
    rho = ent.tmss_reduced(LN2, 60)
    assert ent.von_neumann_entropy(rho) >= 2 * LN2 - 1e-10


# -- Legendre ---------------------------------------------------------------

@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
def test_legendre_identities(tau):
    sol = ent.legendre_report(tau, 60)
    assert sol.gibbs_residual < 1e-10
    assert sol.legendre_residual < 1e-10


def test_legendre_tau2_lnz():
    sol = ent.legendre_report(2.0, 60)
    assert sol.lnZ == pytest.approx(-math.log(1 - math.exp(-2)), abs=1e-12)


def test_free_energy_ln2():
    assert ent.legendre_report(LN2, 60).free_energy == pytest.approx(-1.0, abs=1e-12)


def test_truncated_gibbs_eig_entropy():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        rho = ent.gibbs_density(1.0, 60).rho
    assert ent.von_neumann_entropy(rho) == pytest.approx(eig_entropy(rho.entries), abs=1e-13)
