import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezent import fock
from squeezent.fock import (
    DisplacementParams,
    FockCutoff,
    SqueezeParametrization,
    TruncationWarning,
    TwoModeState,
)


@pytest.fixture(autouse=True)
def quiet_truncation():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        yield


# -- parametrizations -------------------------------------------------------

def test_tau_ln2_labels():
    p = SqueezeParametrization.from_tau(math.log(2))
    assert p.chi == pytest.approx(3.0, abs=1e-14)
    assert p.gamma == pytest.approx(math.atanh(2 ** -0.5), abs=1e-15)
    assert math.cosh(p.gamma) == pytest.approx((1 - math.exp(-p.tau)) ** -0.5, rel=1e-14)


@pytest.mark.parametrize("tau", [0.1, 0.5, 1.0, 2.0, 7.0])
def test_cosh_gamma_relation(tau):
    g = fock.gamma_from_tau(tau)
    assert math.cosh(g) == pytest.approx((1 - math.exp(-tau)) ** -0.5, rel=1e-13)
    assert fock.chi_from_gamma(g) == pytest.approx(fock.chi_from_tau(tau), rel=1e-13)


@given(st.floats(min_value=1e-3, max_value=5.0))
def test_gamma_tau_roundtrip(gamma):
    assert fock.gamma_from_tau(fock.tau_from_gamma(gamma)) == pytest.approx(gamma, rel=1e-9)


@given(st.floats(min_value=1.0 + 1e-6, max_value=1e6))
def test_chi_tau_roundtrip(chi):
    assert fock.chi_from_tau(fock.tau_from_chi(chi)) == pytest.approx(chi, rel=1e-9)


def test_parametrization_edges():
    assert fock.tau_from_chi(1.0) == math.inf
    assert fock.tau_from_gamma(0.0) == math.inf
    with pytest.raises(ValueError):
        fock.gamma_from_tau(0.0)
    with pytest.raises(ValueError):
        fock.tau_from_chi(0.5)


# -- cutoff, ladders, states ------------------------------------------------

@pytest.mark.parametrize("bad", [0, -3, 2.5])
def test_cutoff_rejects(bad):
    with pytest.raises(ValueError):
        FockCutoff(bad)


def test_two_mode_state_validation():
    with pytest.raises(ValueError):
        TwoModeState(np.ones((2, 2)))
    with pytest.raises(ValueError):
        TwoModeState(np.array([[np.nan, 0], [0, 0]]))
    s = TwoModeState(np.eye(2) / math.sqrt(2), tail=0.25)
    assert s.norm() == pytest.approx(1.0)
    assert np.allclose(np.abs(s.raw) ** 2, np.diag([0.375, 0.375]))


@pytest.mark.parametrize("n_max", [3, 8, 20])
def test_ladder_commutator_masked(n_max):
    a, ad = fock.make_ladder(n_max)
    comm = a @ ad - ad @ a
    # sqrt(n)^2 carries one rounding, so "exact" means to a few ulp
    assert np.max(np.abs(comm[:-1, :-1] - np.eye(n_max))) < 1e-13
    assert comm[-1, -1] == pytest.approx(-n_max)


@pytest.mark.parametrize("xi", [0.3, 0.2j, -0.5 + 0.4j])
def test_coherent_amplitudes_match_displacement(xi):
    n = 40
    col = fock.displacement_operator(xi, n)[:, 0]
    ref = fock.coherent_amplitudes(xi, n)
    assert np.max(np.abs(col[:20] - ref[:20])) < 1e-12


def test_displacement_warns_on_tail():
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        with pytest.raises(TruncationWarning):
            fock.displacement_operator(3.0, 5)


# -- squeezed vacuum routes ---------------------------------------------------

def test_tmss_ln2_amplitudes():
    s = fock.tmss_fock(math.log(2), 60)
    n = np.arange(61)
    probs = np.abs(np.diag(s.raw)) ** 2
    assert np.allclose(probs, 2.0 ** -(n + 1), rtol=1e-13, atol=0)
    ratios = np.diag(s.amplitudes)[1:] / np.diag(s.amplitudes)[:-1]
    assert np.allclose(ratios, 2 ** -0.5, rtol=1e-13)


@pytest.mark.parametrize("route", ["bch", "fock"])
def test_tmss_exactly_diagonal(route):
    s = fock.tmss_bch(0.7, 12) if route == "bch" else fock.tmss_fock(1.0, 12)
    off = s.amplitudes - np.diag(np.diag(s.amplitudes))
    assert np.all(off == 0)


def test_tmss_expm_nearly_diagonal():
    s = fock.tmss_expm(0.7, 12)
    off = s.amplitudes - np.diag(np.diag(s.amplitudes))
    assert np.max(np.abs(off)) <= 1e-10


@pytest.mark.parametrize("gamma", [0.3, 0.7, 1.0])
def test_route_triangle(gamma):
    raws = [fock.tmss_expm(gamma, 12).raw, fock.tmss_bch(gamma, 12).raw,
            fock.tmss_fock(fock.tau_from_gamma(gamma), 12).raw]
    for i in range(3):
        for j in range(i):
            assert np.max(np.abs(raws[i] - raws[j])) <= 1e-9


def test_unpadded_expm_shows_truncation_error():
    # exponentiating the generator truncated at n_max is not the restriction of S
    col = fock.squeeze_expm(1.0, 12, pad=False)[:, 0].reshape(13, 13)
    ref = fock.tmss_bch(1.0, 12).raw
    assert np.max(np.abs(col - ref)) > 1e-4


def test_gamma_zero_is_identity():
    assert np.array_equal(fock.squeeze_expm(0.0, 5), np.eye(36))
    s = fock.tmss_bch(0.0, 5)
    assert s.amplitudes[0, 0] == 1 and s.tail == 0


def test_expm_cap():
    with pytest.raises(ValueError):
        fock.squeeze_expm(0.5, 60)


# -- Bogoliubov ---------------------------------------------------------------

@pytest.mark.parametrize("kind", ["boson", "fermion"])
@pytest.mark.parametrize("gamma", [0.0, 0.4, 1.3])
def test_bogoliubov_det(kind, gamma):
    assert fock.bogoliubov_matrix(gamma, kind).det == pytest.approx(1.0, abs=1e-14)


def test_bogoliubov_kind_rejected():
    with pytest.raises(ValueError):
        fock.bogoliubov_matrix(0.1, "anyon")


def test_transform_params_unit_xi():
    g = 0.8
    p = fock.bogoliubov_transform_params(DisplacementParams(1.0, 0.0), g)
    assert p.xi == pytest.approx(math.cosh(g))
    assert p.eta == pytest.approx(math.sinh(g))


@pytest.mark.parametrize("xi,eta", [(0.3, 0.0), (0.2j, 0.3), (-0.1 + 0.2j, 0.25j)])
def test_squeeze_intertwines_displacements(xi, eta):
    g, n = 0.5, 30
    params = DisplacementParams(xi, eta)
    lhs = fock.cs_state(params, g, n).raw
    rhs = fock.displaced_tmss(fock.bogoliubov_transform_params(params, g), g, n).raw
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@pytest.mark.parametrize("gamma", [0.0, 0.5])
def test_operator_relations(gamma):
    checks = fock.bogoliubov_operator_check(gamma, 12)
    assert len(checks) == 6
    assert all(c.passed for c in checks), [(c.name, c.residual) for c in checks]


def test_squeezed_vacuum_is_annihilated():
    ra, rb = fock.squeezed_vacuum_annihilation(0.7, 16)
    assert ra < 1e-12 and rb < 1e-12


def test_bch_identity():
    assert fock.bch_identity_check(0.5, 12) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.9))
def test_tmss_norm_and_tail(gamma):
    s = fock.tmss_bch(gamma, 20)
    assert s.norm() == pytest.approx(1.0, abs=1e-13)
    assert s.tail == pytest.approx(math.tanh(gamma) ** 42, rel=1e-12)
