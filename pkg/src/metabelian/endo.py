"""Endomorphisms of M_n given by generator images.

Composition is ``(phi * psi)(x) = phi(psi(x))``.  The abelianized matrix g
has column i equal to the exponent vector of phi(x_i), and the Jacobian has
(i, j) entry ∂_j(phi(x_i)).  Applying phi to an element uses the Fox chain
rule ∂_j(phi(w)) = sum_k g(∂_k w) J_kj, where g(.) substitutes
a_k -> a^{g e_k}.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .graded import GrTuple, coordinates
from .laurent import INFINITY, LaurentPoly, adjugate, det
from .magnus import ContextMismatch, FreeMetabelian, MagnusElement

__all__ = [
    "Endomorphism",
    "Coset",
    "NotIA",
    "NotAutomorphism",
    "tame_lift",
    "tame_lift_inverse",
    "star_act",
    "automorphism_commutator",
]

IntMatrix = Tuple[Tuple[int, ...], ...]


class NotIA(ValueError):
    pass


class NotAutomorphism(ValueError):
    pass


class Endomorphism:
    __slots__ = ("n", "images", "abelianized", "_offdiag", "_det", "_hash", "_inv")

    def __init__(self, images: Sequence[MagnusElement]):
        images = tuple(images)
        if not images:
            raise ValueError("need generator images")
        n = images[0].n
        if len(images) != n or any(im.n != n for im in images):
            raise ContextMismatch(f"expected {n} images of rank {n}")
        self.n = n
        self.images = images
        self.abelianized: IntMatrix = tuple(tuple(images[i].e[r] for i in range(n)) for r in range(n))
        # Nonzero entries of J - I, used to apply phi without a dense row product.
        one = LaurentPoly.one(n)
        off = []
        for k, im in enumerate(images):
            for j, entry in enumerate(im.d):
                delta = entry - one if j == k else entry
                if delta:
                    off.append((k, j, delta))
        self._offdiag = off
        self._det = None
        self._hash = None
        self._inv = None

    @classmethod
    def from_images(cls, ctx: FreeMetabelian, images: Sequence[MagnusElement]) -> "Endomorphism":
        if len(images) != ctx.n:
            raise ContextMismatch(f"expected {ctx.n} images, got {len(images)}")
        return cls(images)

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls(FreeMetabelian(n).gens())

    @classmethod
    def fixing_except(cls, n: int, changes: dict) -> "Endomorphism":
        """Endomorphism moving only the generators listed (1-based) in ``changes``."""
        G = FreeMetabelian(n)
        return cls([changes.get(i, G.gen(i)) for i in range(1, n + 1)])

    # -- basic data ---------------------------------------------------
    @property
    def jacobian(self) -> Tuple[Tuple[LaurentPoly, ...], ...]:
        return tuple(im.d for im in self.images)

    def det_jacobian(self) -> LaurentPoly:
        if self._det is None:
            self._det = det(self.jacobian)
        return self._det

    def is_ia(self) -> bool:
        n = self.n
        return all(self.abelianized[r][i] == int(r == i) for r in range(n) for i in range(n))

    def is_identity(self) -> bool:
        return self.is_ia() and not self._offdiag

    def __eq__(self, other):
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __repr__(self):
        from .parser import format_element

        body = "; ".join(f"x{i + 1} -> {format_element(im)}" for i, im in enumerate(self.images))
        return f"Endomorphism({body})"

    # -- action and composition -------------------------------------------
    def __call__(self, w: MagnusElement) -> MagnusElement:
        if w.n != self.n:
            raise ContextMismatch(f"rank {w.n} vs {self.n}")
        n, g = self.n, self.abelianized
        e = tuple(sum(g[r][i] * w.e[i] for i in range(n)) for r in range(n))
        sub = [dk.substitute(g) for dk in w.d]
        d = list(sub)
        for k, j, delta in self._offdiag:
            if sub[k]:
                d[j] = d[j] + sub[k] * delta
        return MagnusElement(n, e, d)

    apply = __call__

    def __mul__(self, other: "Endomorphism") -> "Endomorphism":
        if not isinstance(other, Endomorphism):
            return NotImplemented
        if other.n != self.n:
            raise ContextMismatch(f"rank {self.n} vs {other.n}")
        return Endomorphism([self(im) for im in other.images])

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        return self * other

    def __pow__(self, m: int) -> "Endomorphism":
        base = self if m >= 0 else self.inverse()
        result = Endomorphism.identity(self.n)
        for _ in range(abs(m)):
            result = result * base
        return result

    # -- invertibility ------------------------------------------------------
    def is_automorphism(self) -> bool:
        """Determinant criterion: det J is a monomial a^k with coefficient +1.

        Non-IA endomorphisms are first split as tame_lift(g) * iota with iota IA.
        """
        if self.is_ia():
            unit = self.det_jacobian().unit_monomial()
            return unit is not None and unit[0] == 1
        try:
            inv = tame_lift_inverse(self.abelianized)
        except NotAutomorphism:
            return False
        return (inv * self).is_automorphism()

    def inverse(self) -> "Endomorphism":
        if self._inv is not None:
            return self._inv
        if self.is_ia():
            inv = self._ia_inverse()
        else:
            g = self.abelianized
            iota = tame_lift_inverse(g) * self
            inv = iota._ia_inverse() * tame_lift_inverse(g)
        inv._inv = self
        self._inv = inv
        return inv

    def _ia_inverse(self) -> "Endomorphism":
        if self.is_identity():
            return self
        unit = self.det_jacobian().unit_monomial()
        if unit is None or unit[0] != 1:
            raise NotAutomorphism(f"det J = {self.det_jacobian()} is not a unit monomial")
        neg = [-x for x in unit[1]]
        adj = adjugate(self.jacobian)
        n = self.n
        images = []
        for i in range(n):
            e = tuple(int(k == i) for k in range(n))
            images.append(MagnusElement(n, e, [entry.shift(neg) for entry in adj[i]]))
        return Endomorphism(images)

    # -- filtration ---------------------------------------------------------
    def _require_ia(self):
        if not self.is_ia():
            raise NotIA("endomorphism does not induce the identity on the abelianization")

    def deviations(self) -> List[MagnusElement]:
        """x_i^-1 phi(x_i) for each generator."""
        G = FreeMetabelian(self.n)
        return [G.gen(i + 1).inverse() * im for i, im in enumerate(self.images)]

    def ia_depth(self):
        """Largest c with phi in I_c A(M_n); INFINITY for the identity."""
        self._require_ia()
        return min((u.gamma_depth() for u in self.deviations()), key=_depth_key)

    def chi(self, c: int) -> GrTuple:
        """chi_c(phi): coordinates of each deviation in gr_c."""
        self._require_ia()
        return GrTuple([coordinates(u, c) for u in self.deviations()])


def _depth_key(d):
    return (1, 0) if d is INFINITY else (0, d)


def automorphism_commutator(a: Endomorphism, b: Endomorphism) -> Endomorphism:
    """[a, b] = a^-1 b^-1 a b."""
    return a.inverse() * b.inverse() * a * b


class Coset:
    """phi * I_{c+1}A(M_n) for phi in I_c A(M_n)."""

    __slots__ = ("representative", "level")

    def __init__(self, representative: Endomorphism, level: int):
        depth = representative.ia_depth()
        if depth < level:
            raise ValueError(f"representative has depth {depth} < {level}")
        self.representative = representative
        self.level = level

    def chi(self) -> GrTuple:
        return self.representative.chi(self.level)

    def __eq__(self, other):
        if not isinstance(other, Coset):
            return NotImplemented
        if other.level != self.level:
            return False
        diff = self.representative.inverse() * other.representative
        return diff.ia_depth() >= self.level + 1

    def __hash__(self):
        return hash((self.level, self.chi()))


# -- tame lifts of GL_n(Z) ---------------------------------------------------

def _reduction_moves(g: Sequence[Sequence[int]]) -> List[tuple]:
    """Column moves M_1..M_k with g M_1 ... M_k = I.

    Moves: ("T", i, j, c) adds c * column i to column j; ("S", i, j) swaps
    columns; ("F", i) negates column i.  Indices are 0-based.
    """
    n = len(g)
    m = [list(row) for row in g]
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    moves = []

    def add_col(i, j, c):
        for r in range(n):
            m[r][j] += c * m[r][i]
        moves.append(("T", i, j, c))

    for r in range(n):
        while True:
            nz = [j for j in range(r, n) if m[r][j]]
            if not nz:
                raise NotAutomorphism("matrix is not invertible over the integers")
            if len(nz) == 1:
                break
            k = min(nz, key=lambda j: (abs(m[r][j]), j))
            for j in nz:
                if j != k:
                    q = m[r][j] // m[r][k]
                    if q:
                        add_col(k, j, -q)
        k = nz[0]
        if k != r:
            for row in m:
                row[k], row[r] = row[r], row[k]
            moves.append(("S", r, k))
        if m[r][r] == -1:
            for row in m:
                row[r] = -row[r]
            moves.append(("F", r))
        elif m[r][r] != 1:
            raise NotAutomorphism("matrix is not invertible over the integers")
        for j in range(r):
            if m[r][j]:
                add_col(r, j, -m[r][j])
    return moves


def _lift_move(n: int, move: tuple, invert: bool) -> Endomorphism:
    G = FreeMetabelian(n)
    kind = move[0]
    if kind == "T":
        _, i, j, c = move
        if invert:
            c = -c
        return Endomorphism.fixing_except(n, {j + 1: G.gen(j + 1) * G.gen(i + 1) ** c})
    if kind == "S":
        _, i, j = move
        return Endomorphism.fixing_except(n, {i + 1: G.gen(j + 1), j + 1: G.gen(i + 1)})
    _, i = move
    return Endomorphism.fixing_except(n, {i + 1: G.gen(i + 1).inverse()})


@lru_cache(maxsize=256)
def _tame_pair(g: IntMatrix) -> Tuple[Endomorphism, Endomorphism]:
    n = len(g)
    moves = _reduction_moves(g)
    lift = Endomorphism.identity(n)
    inv = Endomorphism.identity(n)
    # g = M_k^-1 ... M_1^-1, so lift = L(M_k^-1) ... L(M_1^-1).
    for mv in moves:
        lift = _lift_move(n, mv, invert=True) * lift
        inv = inv * _lift_move(n, mv, invert=False)
    lift._inv, inv._inv = inv, lift
    return lift, inv


def _as_matrix(g) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in g)


def tame_lift(g: Sequence[Sequence[int]]) -> Endomorphism:
    """Deterministic tame automorphism with abelianized matrix g (det g = ±1)."""
    return _tame_pair(_as_matrix(g))[0]


def tame_lift_inverse(g: Sequence[Sequence[int]]) -> Endomorphism:
    return _tame_pair(_as_matrix(g))[1]


def star_act(g: Sequence[Sequence[int]], coset: Coset) -> Coset:
    """g * phi-bar = t_g phi t_g^-1 modulo I_{c+1}A."""
    t, t_inv = _tame_pair(_as_matrix(g))
    return Coset(t * coset.representative * t_inv, coset.level)
