import random

import pytest
from hypothesis import given, strategies as st

from metabelian import zoo
from metabelian.endo import (
    Coset,
    Endomorphism,
    NotAutomorphism,
    NotIA,
    automorphism_commutator,
    star_act,
    tame_lift,
    tame_lift_inverse,
)
from metabelian.graded import bullet, gl_generators
from metabelian.laurent import INFINITY
from metabelian.magnus import FreeMetabelian, commutator

G3 = FreeMetabelian(3)
words = st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=6)


def element(word, G=G3):
    w = G.one()
    for i, s in word:
        w = w * G.gen(i) ** s
    return w


@given(words, words)
def test_endomorphism_is_a_homomorphism(u, v):
    phi = Endomorphism([element(u) * G3.gen(1), G3.gen(2) * G3.gen(1), element(v)])
    x, y = element(u), element(v)
    assert phi(x * y) == phi(x) * phi(y)
    assert phi(x.inverse()) == phi(x).inverse()


def test_composition_applies_right_factor_first():
    phi = zoo.pi(G3, 1, 2)
    psi = zoo.sigma(G3, 1, 2)
    w = G3.gen(1) * G3.gen(3)
    assert (phi * psi)(w) == phi(psi(w))
    assert (phi * psi) != (psi * phi)


def test_identity_and_powers():
    e = Endomorphism.identity(3)
    assert e.is_identity() and e.is_ia() and e.ia_depth() is INFINITY
    phi = zoo.pi(G3, 2, 3)
    assert phi ** 3 == phi * phi * phi
    assert phi ** -2 * phi ** 2 == e


def test_jacobian_rows_are_fox_rows_of_images():
    phi = zoo.beta(G3)
    assert phi.jacobian[1] == (G3.gen(2) * G3.gen(1)).d
    assert phi.abelianized == ((1, 1, 0), (0, 1, 0), (0, 0, 1))


def test_determinant_criterion_on_simple_cases():
    pi12 = zoo.pi(G3, 1, 2)
    assert pi12.det_jacobian().unit_monomial() == (1, (0, -1, 0))
    assert pi12.is_automorphism()
    squaring = Endomorphism([G3.gen(1) ** 2, G3.gen(2), G3.gen(3)])
    assert not squaring.is_automorphism()
    with pytest.raises(NotAutomorphism):
        squaring.inverse()
    assert zoo.sigma(G3, 1, 3).is_automorphism()


def test_non_ia_inverse_via_tame_lift():
    phi = zoo.beta(G3) * zoo.pi(G3, 3, 1) * zoo.sigma(G3, 2, 3)
    assert phi * phi.inverse() == Endomorphism.identity(3)
    assert phi.inverse() * phi == Endomorphism.identity(3)


@given(st.lists(st.sampled_from(gl_generators(3)), min_size=1, max_size=5))
def test_tame_lift_realizes_matrix(factors):
    g = factors[0]
    for h in factors[1:]:
        g = tuple(tuple(sum(g[i][k] * h[k][j] for k in range(3)) for j in range(3)) for i in range(3))
    t = tame_lift(g)
    assert t.abelianized == g
    assert t * tame_lift_inverse(g) == Endomorphism.identity(3)


def test_tame_lift_rejects_singular_matrix():
    with pytest.raises(NotAutomorphism):
        tame_lift(((2, 0, 0), (0, 1, 0), (0, 0, 1)))


def test_ia_depth_requires_ia():
    with pytest.raises(NotIA):
        zoo.sigma(G3, 1, 2).ia_depth()


def test_chi_of_single_generator_change_lives_in_one_slot():
    G = FreeMetabelian(4)
    phi = zoo.tau_seq(G, 2, (3, 1, 4))
    chi = phi.chi(3)
    assert [not chi[k].is_zero() for k in range(4)] == [False, True, False, False]


def test_inner_commutator_law():
    G = FreeMetabelian(3)
    x, y = G.gen(1), G.gen(2) * G.gen(3)

    def conj_by(g):
        return zoo.inner(G, g.inverse())

    assert automorphism_commutator(conj_by(x), conj_by(y)) == conj_by(commutator(x, y))


def test_commutator_depth_is_superadditive_on_examples():
    G = FreeMetabelian(4)
    a = zoo.tau_seq(G, 1, (2, 3))
    b = zoo.tau_seq(G, 2, (3, 4, 4))
    assert automorphism_commutator(a, b).ia_depth() >= 2 + 3 - 1


def test_coset_equality_and_star_action():
    G = FreeMetabelian(4)
    phi = zoo.tau_seq(G, 1, (2, 3, 4))
    deeper = zoo.tau_seq(G, 1, (2, 3, 4, 4))
    assert Coset(phi, 3) == Coset(phi * deeper, 3)
    assert Coset(phi, 3) != Coset(phi * phi, 3)
    with pytest.raises(ValueError):
        Coset(zoo.pi(G, 1, 2), 3)
    rng = random.Random(3)
    for _ in range(5):
        g = rng.choice(gl_generators(4))
        assert star_act(g, Coset(phi, 3)).chi() == bullet(g, phi.chi(3))
