"""Named endomorphisms and automorphisms of M_n.

Every constructor takes the rank (an int or a FreeMetabelian) first.
Generator indices are 1-based.  Exponent tuples ``r`` stand for the scalar
(a_1 - 1)^{r_1} ... (a_n - 1)^{r_n}.
"""

from __future__ import annotations

from typing import Sequence, Tuple, Union

from .endo import Endomorphism, automorphism_commutator
from .laurent import LaurentPoly, omega
from .magnus import FreeMetabelian, MagnusElement, commutator, left_normed

__all__ = [
    "tau_seq",
    "tau_P",
    "B_P",
    "B_Q",
    "inner",
    "pi",
    "sigma",
    "beta",
    "mu",
    "eta",
    "delta",
    "delta_product",
    "psi1",
    "bracket_repeat",
    "auto_bracket",
    "auto_bracket_repeat",
]

Ctx = Union[int, FreeMetabelian]
Scalar = Union[LaurentPoly, Sequence[int], int]


def _ctx(ctx: Ctx) -> FreeMetabelian:
    return ctx if isinstance(ctx, FreeMetabelian) else FreeMetabelian(ctx)


def _check_index(G: FreeMetabelian, *idx: int):
    for i in idx:
        if not isinstance(i, int) or not 1 <= i <= G.n:
            raise ValueError(f"index {i!r} outside 1..{G.n}")


def _distinct(*idx: int):
    if len(set(idx)) != len(idx):
        raise ValueError(f"indices {idx} must be distinct")


def _exponent_tuple(G: FreeMetabelian, r: Sequence[int], weight) -> Tuple[int, ...]:
    r = tuple(r)
    if len(r) != G.n or any((not isinstance(x, int)) or x < 0 for x in r):
        raise ValueError(f"expected {G.n} nonnegative integers, got {r}")
    if weight is not None and sum(r) != weight:
        raise ValueError(f"exponents {r} sum to {sum(r)}, expected {weight}")
    return r


def _scalar(G: FreeMetabelian, s: Scalar, weight=None) -> LaurentPoly:
    if isinstance(s, LaurentPoly):
        if s.n != G.n:
            raise ValueError("scalar rank differs from group rank")
        return s
    if isinstance(s, int):
        return LaurentPoly.const(G.n, s)
    return omega(_exponent_tuple(G, s, weight))


def _mono(G: FreeMetabelian, **powers: int) -> LaurentPoly:
    """a_1^{e_1} ... given as keyword ``a1=-1`` etc."""
    e = [0] * G.n
    for name, v in powers.items():
        e[int(name[1:]) - 1] += v
    return LaurentPoly.monomial(e)


def bracket_repeat(x: MagnusElement, m: int, y: MagnusElement) -> MagnusElement:
    """[x, m y] = [x, y, ..., y] with m copies of y; [x, 0 y] = x."""
    if m < 0:
        raise ValueError("repeat count must be nonnegative")
    for _ in range(m):
        x = commutator(x, y)
    return x


def auto_bracket(*items: Endomorphism) -> Endomorphism:
    """Left-normed commutator of automorphisms, [a, b] = a^-1 b^-1 a b."""
    if len(items) < 2:
        raise ValueError("need at least two entries")
    acc = items[0]
    for b in items[1:]:
        acc = automorphism_commutator(acc, b)
    return acc


def auto_bracket_repeat(a: Endomorphism, m: int, b: Endomorphism) -> Endomorphism:
    """[a, m b] for automorphisms; [a, 0 b] = a."""
    if m < 0:
        raise ValueError("repeat count must be nonnegative")
    for _ in range(m):
        a = automorphism_commutator(a, b)
    return a


# -- families ----------------------------------------------------------------

def tau_seq(ctx: Ctx, i: int, seq: Sequence[int]) -> Endomorphism:
    """x_i -> x_i [x_{i_1}, ..., x_{i_c}], other generators fixed."""
    G = _ctx(ctx)
    seq = tuple(seq)
    _check_index(G, i, *seq)
    if len(seq) < 2:
        raise ValueError("need at least two bracket entries")
    if i in seq:
        raise ValueError(f"index {i} may not occur in {seq}")
    if seq[0] == seq[1]:
        raise ValueError("first two bracket entries must differ")
    u = left_normed(G.gen(k) for k in seq)
    return Endomorphism.fixing_except(G.n, {i: G.gen(i) * u})


def tau_P(ctx: Ctx, i: int, j: int, k: int, r: Sequence[int], weight: int = None) -> Endomorphism:
    """x_i -> x_i [x_j, x_k]^{omega(r)}; ``weight`` (if given) must equal sum(r) + 2."""
    G = _ctx(ctx)
    _check_index(G, i, j, k)
    _distinct(i, j, k)
    r = _exponent_tuple(G, r, None if weight is None else weight - 2)
    u = commutator(G.gen(j), G.gen(k)).module_pow(omega(r))
    return Endomorphism.fixing_except(G.n, {i: G.gen(i) * u})


def B_P(ctx: Ctx, i: int, k: int, j: int, P: Scalar, weight: int = None) -> Endomorphism:
    """The two-generator automorphism moving x_i and x_k, with scalar P."""
    G = _ctx(ctx)
    _check_index(G, i, k, j)
    _distinct(i, k, j)
    P = _scalar(G, P, None if weight is None else weight - 2)
    ai, aj, ak = f"a{i}", f"a{j}", f"a{k}"
    xi_xj = commutator(G.gen(i), G.gen(j))
    xk_xj = commutator(G.gen(k), G.gen(j))
    img_i = (G.gen(i) * xi_xj.module_pow(_mono(G, **{ai: -1, aj: -1}) * _mono(G, **{ak: -1}) * P)
             * xk_xj.module_pow(_mono(G, **{ak: -2, aj: -1}) * P))
    img_k = (G.gen(k) * xi_xj.module_pow(-(_mono(G, **{ai: -2, aj: -1}) * P))
             * xk_xj.module_pow(-(_mono(G, **{ai: -1, aj: -1}) * _mono(G, **{ak: -1}) * P)))
    return Endomorphism.fixing_except(G.n, {i: img_i, k: img_k})


def B_Q(ctx: Ctx, i: int, j: int, Q: Scalar, weight: int = None) -> Endomorphism:
    """The two-generator automorphism moving x_i and x_j, with scalar Q."""
    G = _ctx(ctx)
    _check_index(G, i, j)
    _distinct(i, j)
    Q = _scalar(G, Q, None if weight is None else weight - 3)
    ai, aj = G.a(i), G.a(j)
    base = -(_mono(G, **{f"a{i}": -2, f"a{j}": -2}) * Q)
    xi_xj = commutator(G.gen(i), G.gen(j))
    img_i = G.gen(i) * xi_xj.module_pow(base * (ai - 1))
    img_j = G.gen(j) * xi_xj.module_pow(base * (aj - 1))
    return Endomorphism.fixing_except(G.n, {i: img_i, j: img_j})


def inner(ctx: Ctx, u: MagnusElement) -> Endomorphism:
    """x_i -> x_i [x_i, u], which is conjugation x -> u^-1 x u."""
    G = _ctx(ctx)
    if u.n != G.n:
        raise ValueError("element rank differs from context")
    return Endomorphism([g * commutator(g, u) for g in G.gens()])


def pi(ctx: Ctx, i: int, j: int) -> Endomorphism:
    G = _ctx(ctx)
    _check_index(G, i, j)
    _distinct(i, j)
    return Endomorphism.fixing_except(G.n, {i: G.gen(i) * commutator(G.gen(i), G.gen(j))})


def sigma(ctx: Ctx, i: int, j: int) -> Endomorphism:
    G = _ctx(ctx)
    _check_index(G, i, j)
    _distinct(i, j)
    return Endomorphism.fixing_except(G.n, {i: G.gen(j), j: G.gen(i)})


def beta(ctx: Ctx) -> Endomorphism:
    """x_2 -> x_2 x_1."""
    G = _ctx(ctx)
    return Endomorphism.fixing_except(G.n, {2: G.gen(2) * G.gen(1)})


def mu(ctx: Ctx) -> Endomorphism:
    """x_1 -> x_1 [x_1^-1, [x_1, [x_2, x_3]]]; needs rank at least 3."""
    G = _ctx(ctx)
    if G.n < 3:
        raise ValueError("mu needs rank >= 3")
    x1, x2, x3 = G.gen(1), G.gen(2), G.gen(3)
    inner_part = commutator(x1, commutator(x2, x3))
    return Endomorphism.fixing_except(G.n, {1: x1 * commutator(x1.inverse(), inner_part)})


def eta(ctx: Ctx, c: int) -> Endomorphism:
    """x_j -> x_j [x_j, (c-1) x_1] for every j (an endomorphism, not invertible)."""
    G = _ctx(ctx)
    if c < 2:
        raise ValueError("eta needs c >= 2")
    x1 = G.gen(1)
    return Endomorphism([g * bracket_repeat(g, c - 1, x1) for g in G.gens()])


def delta(ctx: Ctx, r: Sequence[int], weight: int = None) -> Endomorphism:
    """Images x_1 -> x_1[x_1, x_3, r_1 x_1, ..., r_n x_n], x_2 -> x_2[x_3, x_2, r_1 x_1, ...]."""
    G = _ctx(ctx)
    if G.n < 3:
        raise ValueError("delta needs rank >= 3")
    r = _exponent_tuple(G, r, None if weight is None else weight - 2)
    x1, x2, x3 = G.gen(1), G.gen(2), G.gen(3)

    def tail(w):
        for k, m in enumerate(r):
            w = bracket_repeat(w, m, G.gen(k + 1))
        return w

    return Endomorphism.fixing_except(G.n, {
        1: x1 * tail(commutator(x1, x3)),
        2: x2 * tail(commutator(x3, x2)),
    })


DELTA_READINGS = ("early", "late")


def delta_product(ctx: Ctx, r: Sequence[int], reading: str = "early") -> Endomorphism:
    """delta from its defining product.

    ``early``: B_123(r) tau_213(r)^-1 tau_123(r); ``late``: B_123(r) tau_213(r) tau_123(r)^-1.
    """
    G = _ctx(ctx)
    r = _exponent_tuple(G, r, None)
    B = B_P(G, 1, 2, 3, r)
    t213, t123 = tau_P(G, 2, 1, 3, r), tau_P(G, 1, 2, 3, r)
    if reading == "early":
        return B * t213.inverse() * t123
    if reading == "late":
        return B * t213 * t123.inverse()
    raise ValueError(f"unknown reading {reading!r}")


def psi1(ctx: Ctx, s1: int) -> Endomorphism:
    """[tau_{1,(2,3)}^-1, s_1 (pi_{2n} pi_{3n})^-1]."""
    G = _ctx(ctx)
    if s1 < 0:
        raise ValueError("s_1 must be nonnegative")
    n = G.n
    if n < 4:
        raise ValueError("psi1 needs rank >= 4")
    step = (pi(G, 2, n) * pi(G, 3, n)).inverse()
    return auto_bracket_repeat(tau_seq(G, 1, (2, 3)).inverse(), s1, step)
