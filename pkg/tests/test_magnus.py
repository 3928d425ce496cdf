import random

import pytest
import sympy
from hypothesis import given, strategies as st

from metabelian.laurent import INFINITY, LaurentPoly
from metabelian.magnus import (
    ContextMismatch,
    FreeMetabelian,
    InvariantViolation,
    MagnusElement,
    NotDerived,
    commutator,
    invariant_checks,
    left_normed,
)

N = 3
G = FreeMetabelian(N)
SYMS = sympy.symbols("a1:4")

words = st.lists(st.tuples(st.integers(1, N), st.sampled_from([1, -1])), max_size=8)


def element(word):
    w = G.one()
    for i, s in word:
        w = w * G.gen(i) ** s
    return w


def fox_oracle(word, j):
    """Fox derivative of a free-group word by the product rule, in sympy."""
    total, prefix = sympy.Integer(0), sympy.Integer(1)
    for i, s in word:
        a = SYMS[i - 1]
        if i == j:
            total += prefix if s == 1 else -prefix / a
        prefix *= a ** s
    return sympy.simplify(total)


def to_sympy(p):
    out = sympy.Integer(0)
    for e, c in p.terms():
        m = sympy.Integer(c)
        for s, x in zip(SYMS, e):
            m *= s ** x
        out += m
    return out


@given(words)
def test_fox_row_matches_word_oracle(word):
    w = element(word)
    for j in range(1, N + 1):
        assert sympy.simplify(to_sympy(w.d[j - 1]) - fox_oracle(word, j)) == 0


@given(words, words, words)
def test_group_axioms(u, v, w):
    x, y, z = element(u), element(v), element(w)
    assert (x * y) * z == x * (y * z)
    assert x * x.inverse() == G.one()
    assert (x * y).inverse() == y.inverse() * x.inverse()


@given(words, words, words, words)
def test_derived_subgroup_is_abelian(u, v, w, z):
    p = commutator(element(u), element(v))
    q = commutator(element(w), element(z))
    assert commutator(p, q).is_one()


def test_commutator_rows_closed_form():
    H = FreeMetabelian(4)
    for j in range(1, 5):
        for k in range(1, 5):
            if j == k:
                continue
            aj, ak = H.a(j), H.a(k)
            inv = aj ** -1 * ak ** -1
            row = commutator(H.gen(j), H.gen(k)).d
            assert row[j - 1] == inv * (1 - ak)
            assert row[k - 1] == inv * (aj - 1)
            assert all(row[m].is_zero() for m in range(4) if m not in (j - 1, k - 1))


def test_module_power_by_variable_is_conjugation():
    w = commutator(G.gen(1), G.gen(2))
    for i in range(1, N + 1):
        assert w.module_pow(G.a(i)) == w.conjugate(G.gen(i))
    assert w.module_pow(LaurentPoly.const(N, 3)) == w ** 3
    with pytest.raises(NotDerived):
        G.gen(1).module_pow(G.a(1))


@given(st.lists(st.integers(1, N), min_size=2, max_size=6))
def test_depth_of_left_normed_generators(seq):
    w = left_normed(G.gen(i) for i in seq)
    if seq[0] == seq[1]:
        assert w.is_one()
    else:
        assert w.gamma_depth() == len(seq)


def test_depth_of_identity_and_generators():
    assert G.one().gamma_depth() is INFINITY
    assert G.gen(2).gamma_depth() == 1
    assert commutator(G.gen(1), G.gen(3)).gamma_depth() == 2


def test_invariant_violation_is_detected():
    before = invariant_checks.checked
    G.gen(1) * G.gen(2)
    assert invariant_checks.checked > before
    bad = (LaurentPoly.one(N), LaurentPoly.zero(N), LaurentPoly.zero(N))
    with pytest.raises(InvariantViolation):
        MagnusElement(N, (0, 0, 0), bad)


def test_rank_mismatch_raises():
    with pytest.raises(ContextMismatch):
        G.gen(1) * FreeMetabelian(4).gen(1)
    with pytest.raises(ValueError):
        FreeMetabelian(1)


def test_random_products_are_reproducible():
    rng1, rng2 = random.Random(5), random.Random(5)
    word1 = [(rng1.randint(1, N), rng1.choice((1, -1))) for _ in range(20)]
    word2 = [(rng2.randint(1, N), rng2.choice((1, -1))) for _ in range(20)]
    assert element(word1) == element(word2)
