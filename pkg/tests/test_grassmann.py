import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezent.grassmann import (
    GeneratorSet,
    GrassmannElement,
    GrassmannError,
    SuperOperator,
    berezin_integrate,
    berezin_multiple,
    fermion_ladders,
    super_exp_nilpotent,
    super_trace,
)
from squeezent.verify import random_superop

G = GeneratorSet.conjugate_pairs("α", "β")
al, als, be, bes = (G.gen(n) for n in G.names)
ZERO1 = SuperOperator(G, 1)


@st.composite
def elements(draw, gens=G, max_terms=4):
    n = len(gens)
    monos = draw(st.lists(st.lists(st.integers(0, n - 1), unique=True), max_size=max_terms))
    coefs = draw(st.lists(st.complex_numbers(max_magnitude=4).map(
        lambda z: complex(round(z.real), round(z.imag))), min_size=len(monos), max_size=len(monos)))
    return GrassmannElement(gens, {tuple(sorted(m)): c for m, c in zip(monos, coefs)})


odd_generators = st.sampled_from(G.names).map(G.gen)


# -- generator set ------------------------------------------------------------

def test_generator_order_and_pairing():
    assert G.names == ("α", "α*", "β", "β*")
    assert G.partner == (1, 0, 3, 2)


def test_generator_set_rejects_duplicates():
    with pytest.raises(GrassmannError):
        GeneratorSet(("α", "α"), (1, 0))


def test_mismatched_sets_rejected():
    other = GeneratorSet.conjugate_pairs("γ")
    with pytest.raises(GrassmannError):
        al * other.gen("γ")


# -- products -----------------------------------------------------------------

def test_nilpotency():
    for g in (al, als, be, bes):
        assert (g * g).is_zero()


def test_anticommuting_pair():
    assert str(al * als) == "α α*"
    assert str(als * al) == "-α α*"


def test_expansion_example():
    got = (1 + al) * (1 + als)
    assert got == 1 + al + als + al * als


@given(odd_generators, odd_generators)
def test_generators_anticommute(x, y):
    assert (x * y + y * x).is_zero()


@given(elements(), elements(), elements())
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(elements(), elements())
def test_graded_commutativity(x, y):
    for p in (0, 1):
        for q in (0, 1):
            xp, yq = x.graded_part(p), y.graded_part(q)
            assert xp * yq == yq * xp * (-1) ** (p * q)


# -- conjugation --------------------------------------------------------------

@given(elements(), elements())
def test_conjugation_anti_automorphism(x, y):
    assert (x * y).conjugate() == y.conjugate() * x.conjugate()


@given(elements())
def test_conjugation_involution(x):
    assert x.conjugate().conjugate() == x


def test_conjugation_scalar():
    assert G.scalar(2 - 1j).conjugate() == G.scalar(2 + 1j)


def test_conjugation_worked_example():
    g4 = GeneratorSet.conjugate_pairs("α1", "α2", "β1", "β2")
    c = 1.5 + 2j
    x = g4.gen("α1") * g4.gen("α2*") + g4.gen("β1") * g4.gen("β2") * c
    assert x.conjugate() == g4.gen("α2") * g4.gen("α1*") + g4.gen("β2*") * g4.gen("β1*") * c.conjugate()


# -- Berezin ------------------------------------------------------------------

@pytest.mark.parametrize("x,var,expected", [
    (G.one(), "α", 0),
    (al, "α", 1),
    (als, "α*", 1),
    (be, "α", 0),
])
def test_berezin_single(x, var, expected):
    assert berezin_integrate(x, var) == G.scalar(expected)


def test_berezin_double():
    assert berezin_multiple(al * als, "α*", "α") == G.one()
    assert berezin_multiple(als * al, "α*", "α") == -G.one()


def test_berezin_moves_variable_left():
    # int dα (β α) = -β
    assert berezin_integrate(be * al, "α") == -be


@given(elements())
def test_berezin_conjugation_rule(x):
    # (dα)* = -dα* lifted to homogeneous integrands
    for k in range(len(G)):
        for p in (0, 1):
            xp = x.graded_part(p)
            lhs = berezin_integrate(xp, k).conjugate()
            rhs = berezin_integrate(xp.conjugate(), G.partner[k]) * (-1) ** (p + 1)
            assert lhs == rhs


# -- superalgebra -------------------------------------------------------------

def test_car_single_mode():
    a = fermion_ladders(G, 1)
    assert a * a.dagger + a.dagger * a == SuperOperator.identity(G, 1)
    assert (a * a).is_zero()


@pytest.mark.parametrize("name", G.names)
def test_grassmann_anticommutes_with_ladders(name):
    g = SuperOperator.grassmann(G.gen(name), 1)
    a = fermion_ladders(G, 1)
    assert (g * a + a * g).is_zero()
    assert (g * a.dagger + a.dagger * g).is_zero()


def test_two_mode_relations():
    a, b = fermion_ladders(G, 2)
    eye = SuperOperator.identity(G, 2)
    for x in (a, b):
        assert x * x.dagger + x.dagger * x == eye
        assert (x * x).is_zero()
        for name in G.names:
            g = SuperOperator.grassmann(G.gen(name), 2)
            assert (g * x + x * g).is_zero()
    assert (a * b + b * a).is_zero()
    assert (a * b.dagger + b.dagger * a).is_zero()


def test_random_associativity_100_triples():
    rng = np.random.default_rng(11)
    for _ in range(100):
        x, y, z = (random_superop(G, rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)


@pytest.mark.parametrize("modes", [1, 2])
def test_random_dagger_pairs(modes):
    rng = np.random.default_rng(5 + modes)
    for _ in range(100):
        x, y = random_superop(G, rng, modes), random_superop(G, rng, modes)
        assert (x * y).dagger == y.dagger * x.dagger
        assert x.dagger.dagger == x


def test_dagger_worked_example():
    a = fermion_ladders(G, 1)
    gr = lambda x: SuperOperator.grassmann(x, 1)
    assert (a * gr(al) * a.dagger * gr(bes)).dagger == a * a.dagger * gr(als) * gr(be)


def test_dagger_of_ladder():
    a = fermion_ladders(G, 1)
    assert np.array_equal(a.dagger.numeric(), a.numeric().conj().T)


# -- trace and exponential ----------------------------------------------------

def test_trace_identity():
    assert super_trace(SuperOperator.identity(G, 1)) == G.scalar(2)


def test_exp_zero_is_identity():
    assert super_exp_nilpotent(ZERO1) == SuperOperator.identity(G, 1)


def test_displacement_generator_square():
    a = fermion_ladders(G, 1)
    gr = lambda x: SuperOperator.grassmann(x, 1)
    x = a.dagger * gr(al) - gr(als) * a
    eye = SuperOperator.identity(G, 1)
    assert x * x == gr(als * al) * (a.dagger * a * 2 - eye)
    assert (x * x * x).is_zero()
    assert super_exp_nilpotent(x) * super_exp_nilpotent(-x) == eye


def test_exp_rejects_non_nilpotent():
    with pytest.raises(GrassmannError):
        super_exp_nilpotent(SuperOperator.identity(G, 1), max_order=5)


@settings(max_examples=30)
@given(elements(), elements())
def test_trace_cyclic_for_even_factor(x, y):
    # cyclicity is asserted only when one factor is Grassmann-even with even matrices
    rng = np.random.default_rng(0)
    m = np.diag(rng.integers(-2, 3, size=2)).astype(complex)
    even = SuperOperator(G, 1, {mono: c * m for mono, c in x.graded_part(0).terms.items()})
    full = SuperOperator.from_matrix(G, rng.integers(-2, 3, size=(2, 2)))
    other = SuperOperator.grassmann(y, 1) * full
    assert super_trace(even * other) == super_trace(other * even)


def test_render_signs():
    assert str(G.zero()) == "0"
    assert str(-al) == "-α"
