"""Elements of the free metabelian group M_n via the Magnus embedding.

An element w is stored as the pair (e, d): e is the exponent vector of its
image in the abelianization A_n, and d = (∂_1 w, ..., ∂_n w) is its row of
Fox derivatives in Z A_n.  The pair determines w, so group equality is
equality of pairs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .laurent import INFINITY, LaurentPoly

__all__ = [
    "FreeMetabelian",
    "MagnusElement",
    "ContextMismatch",
    "NotDerived",
    "InvariantViolation",
    "commutator",
    "left_normed",
    "invariant_checks",
]


class ContextMismatch(ValueError):
    pass


class NotDerived(ValueError):
    """A module exponent was applied to an element outside the derived group."""


class InvariantViolation(AssertionError):
    pass


class _InvariantMonitor:
    """Counts fundamental-identity checks; toggled with METABELIAN_CHECK=0/1."""

    def __init__(self):
        self.enabled = os.environ.get("METABELIAN_CHECK", "1") != "0"
        self.checked = 0


invariant_checks = _InvariantMonitor()


@dataclass(frozen=True)
class FreeMetabelian:
    """The free metabelian group of rank n with free generators x_1..x_n."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"rank must be an integer >= 2, got {self.n!r}")

    def one(self) -> "MagnusElement":
        zero = LaurentPoly.zero(self.n)
        return MagnusElement(self.n, (0,) * self.n, (zero,) * self.n)

    def gen(self, i: int) -> "MagnusElement":
        """The generator x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"generator index {i} out of range 1..{self.n}")
        zero, one = LaurentPoly.zero(self.n), LaurentPoly.one(self.n)
        e = tuple(int(k == i - 1) for k in range(self.n))
        d = tuple(one if k == i - 1 else zero for k in range(self.n))
        return MagnusElement(self.n, e, d)

    def gens(self) -> Tuple["MagnusElement", ...]:
        return tuple(self.gen(i) for i in range(1, self.n + 1))

    def a(self, i: int) -> LaurentPoly:
        return LaurentPoly.var(self.n, i)


class MagnusElement:
    __slots__ = ("n", "e", "d", "_hash")

    def __init__(self, n: int, e: Sequence[int], d: Sequence[LaurentPoly], check: bool = True):
        if len(e) != n or len(d) != n:
            raise ContextMismatch("exponent vector / derivative row length differs from rank")
        self.n = n
        self.e = tuple(e)
        self.d = tuple(d)
        self._hash = None
        if check and invariant_checks.enabled:
            self.check_fundamental_identity()

    def check_fundamental_identity(self):
        """Assert sum_j d_j (a_j - 1) == a^e - 1."""
        n = self.n
        lhs = LaurentPoly.zero(n)
        for j, dj in enumerate(self.d):
            if dj:
                unit = [0] * n
                unit[j] = 1
                lhs = lhs + dj.shift(unit) - dj
        rhs = LaurentPoly.monomial(self.e) - 1
        invariant_checks.checked += 1
        if lhs != rhs:
            raise InvariantViolation(f"fundamental identity fails for e={self.e}, d={[str(x) for x in self.d]}")

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MagnusElement):
            return NotImplemented
        return self.n == other.n and self.e == other.e and self.d == other.d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.e, self.d))
        return self._hash

    def __repr__(self):
        from .parser import format_element

        return f"MagnusElement({format_element(self)})"

    def __str__(self):
        from .parser import format_element

        return format_element(self)

    def is_one(self) -> bool:
        return not any(self.e) and not any(self.d)

    def is_derived(self) -> bool:
        return not any(self.e)

    # -- group operations ---------------------------------------------
    def _same(self, other: "MagnusElement"):
        if not isinstance(other, MagnusElement):
            raise TypeError(f"expected MagnusElement, got {type(other).__name__}")
        if other.n != self.n:
            raise ContextMismatch(f"rank {self.n} vs {other.n}")

    def __mul__(self, other: "MagnusElement") -> "MagnusElement":
        self._same(other)
        e = tuple(x + y for x, y in zip(self.e, other.e))
        d = tuple(d1 + d2.shift(self.e) for d1, d2 in zip(self.d, other.d))
        return MagnusElement(self.n, e, d)

    def inverse(self) -> "MagnusElement":
        neg = tuple(-x for x in self.e)
        return MagnusElement(self.n, neg, tuple(-dj.shift(neg) for dj in self.d))

    def __pow__(self, m: int) -> "MagnusElement":
        if not isinstance(m, int):
            return NotImplemented
        base = self if m >= 0 else self.inverse()
        m = abs(m)
        result = MagnusElement(self.n, (0,) * self.n, (LaurentPoly.zero(self.n),) * self.n)
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def module_pow(self, s: LaurentPoly) -> "MagnusElement":
        """w^s for w in the derived group, where a^f acts as conjugation by x^f."""
        if not self.is_derived():
            raise NotDerived("module exponent applied to an element outside the derived group")
        if isinstance(s, int):
            s = LaurentPoly.const(self.n, s)
        if s.n != self.n:
            raise ContextMismatch("scalar rank differs from group rank")
        ss = s.star()
        return MagnusElement(self.n, self.e, tuple(ss * dj for dj in self.d))

    def conjugate(self, by: "MagnusElement") -> "MagnusElement":
        """by^-1 * self * by."""
        return by.inverse() * self * by

    def gamma_depth(self):
        """Largest c with self in gamma_c(M_n); INFINITY for the identity."""
        if any(self.e):
            return 1
        if self.is_one():
            return INFINITY
        return 1 + min(dj.valuation() for dj in self.d)


def commutator(u: MagnusElement, v: MagnusElement) -> MagnusElement:
    """[u, v] = u^-1 v^-1 u v."""
    return u.inverse() * v.inverse() * u * v


def left_normed(items: Iterable[MagnusElement]) -> MagnusElement:
    """[g_1, ..., g_c] = [[g_1, ..., g_{c-1}], g_c]."""
    items = list(items)
    if len(items) < 2:
        raise ValueError("left-normed commutator needs at least two entries")
    acc = items[0]
    for g in items[1:]:
        acc = commutator(acc, g)
    return acc
