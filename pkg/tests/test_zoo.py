import pytest

from metabelian import zoo
from metabelian.endo import Endomorphism
from metabelian.harness import tau_first_column
from metabelian.laurent import omega
from metabelian.magnus import FreeMetabelian, commutator, left_normed

G4 = FreeMetabelian(4)
ID4 = Endomorphism.identity(4)


def test_zero_exponent_tau_is_the_basic_tau():
    assert zoo.tau_P(G4, 1, 2, 3, (0, 0, 0, 0)) == zoo.tau_seq(G4, 1, (2, 3))


def test_tau_with_exponents_equals_iterated_tau():
    # [x2, x3]^{(a3-1)(a4-1)} has the same class as [x2, x3, x3, x4]
    t = zoo.tau_P(G4, 1, 2, 3, (0, 0, 1, 1))
    s = zoo.tau_seq(G4, 1, (2, 3, 3, 4))
    assert t.ia_depth() == 4
    assert t.chi(4) == s.chi(4)


@pytest.mark.parametrize("seq", [(2, 3), (3, 2, 2), (2, 3, 3, 3), (4, 2, 3, 3, 4)])
def test_tau_seq_depth_is_length(seq):
    assert zoo.tau_seq(G4, 1, seq).ia_depth() == len(seq)


@pytest.mark.parametrize("make", [
    lambda: zoo.tau_P(G4, 1, 2, 3, (1, 0, 1, 0)),
    lambda: zoo.B_P(G4, 1, 2, 3, (0, 1, 0, 1)),
    lambda: zoo.B_P(G4, 2, 4, 1, 3),
    lambda: zoo.B_Q(G4, 1, 2, (1, 0, 0, 1)),
    lambda: zoo.mu(G4),
    lambda: zoo.inner(G4, commutator(G4.gen(1), G4.gen(4))),
    lambda: zoo.psi1(G4, 2),
])
def test_zoo_automorphisms_have_unit_determinant_and_invert(make):
    phi = make()
    unit = phi.det_jacobian().unit_monomial()
    assert unit is not None and unit[0] == 1
    assert phi.is_automorphism()
    assert phi * phi.inverse() == ID4


def test_mu_depth_and_eta_failure():
    assert zoo.mu(G4).ia_depth() == 4
    eta = zoo.eta(G4, 4)
    assert eta.det_jacobian().unit_monomial() is None
    assert not eta.is_automorphism()


def test_inner_depth_and_inverse():
    u = left_normed([G4.gen(2), G4.gen(1), G4.gen(3)])
    xi = zoo.inner(G4, u)
    assert xi.ia_depth() == u.gamma_depth() + 1 == 4
    assert zoo.inner(G4, u.inverse()) == xi.inverse()
    assert xi(G4.gen(1)) == G4.gen(1).conjugate(u)


def test_psi1_closed_form():
    n = G4.n
    for s in range(4):
        img = G4.gen(1) * left_normed([G4.gen(2), G4.gen(3)] + [G4.gen(n)] * s).inverse()
        assert zoo.psi1(G4, s) == Endomorphism.fixing_except(n, {1: img})


def test_first_column_tau_helper_is_exact():
    for s in range(3):
        t = tau_first_column(G4, s)
        assert t == zoo.tau_P(G4, 1, 2, 3, (s + 1, 0, 0, 0))


def test_displayed_delta_matches_late_product_modulo_next_term():
    c = 4
    for r in [(2, 0, 0, 0), (0, 1, 1, 0), (0, 0, 0, 2)]:
        shown = zoo.delta(G4, r)
        late = zoo.delta_product(G4, r, "late")
        assert all((a.inverse() * b).gamma_depth() >= c + 1 for a, b in zip(shown.images, late.images))
    shown = zoo.delta(G4, (0, 0, 0, 1))
    early = zoo.delta_product(G4, (0, 0, 0, 1), "early")
    assert any((a.inverse() * b).gamma_depth() < 4 for a, b in zip(shown.images, early.images))


def test_displayed_delta_images_do_not_give_an_automorphism():
    assert not zoo.delta(G4, (0, 0, 0, 1)).is_automorphism()


def test_scalar_forms_are_interchangeable():
    r = (1, 0, 0, 1)
    assert zoo.B_P(G4, 1, 2, 3, r) == zoo.B_P(G4, 1, 2, 3, omega(r))


@pytest.mark.parametrize("bad", [
    lambda: zoo.tau_seq(G4, 1, (1, 2)),
    lambda: zoo.tau_seq(G4, 1, (2, 2, 3)),
    lambda: zoo.tau_seq(G4, 5, (2, 3)),
    lambda: zoo.tau_P(G4, 1, 1, 3, (0, 0, 0, 0)),
    lambda: zoo.tau_P(G4, 1, 2, 3, (0, 0, 0, 1), weight=4),
    lambda: zoo.B_Q(G4, 1, 2, (0, -1, 0, 0)),
    lambda: zoo.eta(G4, 1),
    lambda: zoo.psi1(FreeMetabelian(3), 0),
    lambda: zoo.delta_product(G4, (0, 0, 0, 0), "middle"),
])
def test_invalid_arguments_raise(bad):
    with pytest.raises(ValueError):
        bad()
