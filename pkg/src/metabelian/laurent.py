"""Exact arithmetic in the integral group ring Z[a_1^±1, ..., a_n^±1].

A :class:`LaurentPoly` is a finite integer combination of monomials
``a_1^e_1 ... a_n^e_n``.  Exponent vectors are packed into a single Python
integer (balanced base ``_RADIX``) so that multiplying monomials is one
integer addition and the involution ``a -> a^-1`` is negation of the key.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

__all__ = [
    "INFINITY",
    "LaurentPoly",
    "LeadingForm",
    "omega",
    "det",
    "adjugate",
    "matmul",
    "identity_matrix",
    "RankMismatch",
]

_BITS = 16
_RADIX = 1 << _BITS
_HALF = _RADIX >> 1

ExpVec = Tuple[int, ...]


class RankMismatch(ValueError):
    pass


class _Infinity:
    """Sentinel for the valuation of zero and the depth of the identity."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITY")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        if isinstance(other, int) or other is self:
            return self
        return NotImplemented

    __radd__ = __add__


INFINITY = _Infinity()


def _encode(exps: Sequence[int]) -> int:
    key = 0
    for x in reversed(exps):
        if not -_HALF < x < _HALF:
            raise OverflowError(f"exponent {x} out of range")
        key = key * _RADIX + x
    return key


def _decode(key: int, n: int) -> ExpVec:
    out = []
    for _ in range(n):
        r = key % _RADIX
        if r >= _HALF:
            r -= _RADIX
        out.append(r)
        key = (key - r) >> _BITS
    return tuple(out)


def _max_abs_exp(terms: Mapping[int, int], n: int) -> int:
    m = 0
    for k in terms:
        for x in _decode(k, n):
            if x > m:
                m = x
            elif -x > m:
                m = -x
    return m


class LaurentPoly:
    """Immutable element of Z A_n.

    ``terms`` maps packed exponent keys to nonzero integer coefficients; use
    the classmethod constructors rather than building it by hand.
    """

    __slots__ = ("n", "_terms", "_emax", "_hash", "_val", "_lf")

    def __init__(self, n: int, terms: Optional[Dict[int, int]] = None, _emax: Optional[int] = None):
        self.n = n
        self._terms: Dict[int, int] = terms if terms is not None else {}
        self._emax = _emax if _emax is not None else _max_abs_exp(self._terms, n)
        self._hash = None
        self._val = None
        self._lf = None

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "LaurentPoly":
        return cls(n, {}, 0)

    @classmethod
    def const(cls, n: int, c: int) -> "LaurentPoly":
        return cls(n, {0: c} if c else {}, 0)

    @classmethod
    def one(cls, n: int) -> "LaurentPoly":
        return cls.const(n, 1)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        n = len(exps)
        if not coeff:
            return cls.zero(n)
        return cls(n, {_encode(exps): coeff}, max((abs(x) for x in exps), default=0))

    @classmethod
    def var(cls, n: int, i: int) -> "LaurentPoly":
        """The generator a_i (1-based)."""
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        e = [0] * n
        e[i - 1] = 1
        return cls.monomial(e)

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Sequence[int], int]) -> "LaurentPoly":
        out: Dict[int, int] = {}
        for e, c in terms.items():
            if len(e) != n:
                raise RankMismatch(f"exponent vector {tuple(e)} has length != {n}")
            k = _encode(e)
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return cls(n, out)

    # -- inspection ---------------------------------------------------
    def terms(self) -> List[Tuple[ExpVec, int]]:
        """Terms as ``(exponent vector, coefficient)``, lexicographically descending."""
        items = [(_decode(k, self.n), c) for k, c in self._terms.items()]
        items.sort(reverse=True)
        return items

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def unit_monomial(self) -> Optional[Tuple[int, ExpVec]]:
        """``(sign, exps)`` if this is ``±a^exps``, else None."""
        if len(self._terms) != 1:
            return None
        (k, c), = self._terms.items()
        if c not in (1, -1):
            return None
        return c, _decode(k, self.n)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return format_scalar(self)

    # -- ring operations ----------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.n != self.n:
                raise RankMismatch(f"rank {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.n, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return LaurentPoly(self.n, out, max(self._emax, other._emax))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.n, {k: -c for k, c in self._terms.items()}, self._emax)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.n)
            return LaurentPoly(self.n, {k: c * other for k, c in self._terms.items()}, self._emax)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return LaurentPoly.zero(self.n)
        emax = self._emax + other._emax
        if emax >= _HALF:
            emax = _max_abs_exp(a, self.n) + _max_abs_exp(b, self.n)
            if emax >= _HALF:
                raise OverflowError("exponent range exceeded")
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            return LaurentPoly(self.n, {k + kb: c * cb for k, c in a.items()}, emax)
        out: Dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly(self.n, {k: c for k, c in out.items() if c}, emax)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if not isinstance(m, int):
            return NotImplemented
        if m < 0:
            unit = self.unit_monomial()
            if unit is None:
                raise ValueError(f"{self} is not a unit; negative power undefined")
            sign, e = unit
            return LaurentPoly.monomial([-x * (-m) for x in e], sign ** (-m))
        result = LaurentPoly.one(self.n)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``a^exps``."""
        if len(exps) != self.n:
            raise RankMismatch("shift vector has wrong length")
        if not any(exps):
            return self
        s = _encode(exps)
        return LaurentPoly(self.n, {k + s: c for k, c in self._terms.items()},
                           self._emax + max(abs(x) for x in exps))

    # -- structure maps -----------------------------------------------
    def augmentation(self) -> int:
        return sum(self._terms.values())

    def star(self) -> "LaurentPoly":
        """The involution sending each group element to its inverse."""
        return LaurentPoly(self.n, {-k: c for k, c in self._terms.items()}, self._emax)

    def substitute(self, g: Sequence[Sequence[int]]) -> "LaurentPoly":
        """Ring map ``a_j -> prod_i a_i^{g[i][j]}`` (column j of ``g``)."""
        n = self.n
        if len(g) != n or any(len(row) != n for row in g):
            raise RankMismatch("substitution matrix has wrong shape")
        col_keys = [_encode([g[i][j] for i in range(n)]) for j in range(n)]
        if all(col_keys[j] == _encode([int(i == j) for i in range(n)]) for j in range(n)):
            return self
        out: Dict[int, int] = {}
        for k, c in self._terms.items():
            e = _decode(k, n)
            nk = 0
            for j, x in enumerate(e):
                if x:
                    nk += x * col_keys[j]
            v = out.get(nk, 0) + c
            if v:
                out[nk] = v
            else:
                del out[nk]
        return LaurentPoly(n, out)

    # -- augmentation-adic structure ------------------------------------
    def _normalized_exps(self) -> List[Tuple[ExpVec, int]]:
        items = [(_decode(k, self.n), c) for k, c in self._terms.items()]
        lows = [min(e[i] for e, _ in items) for i in range(self.n)]
        return [(tuple(x - lo for x, lo in zip(e, lows)), c) for e, c in items]

    def t_expansion(self, max_degree: int) -> Dict[ExpVec, int]:
        """Coefficients of total degree <= ``max_degree`` after a_i = 1 + t_i.

        The polynomial is first shifted by a monomial so all exponents are
        nonnegative; the shift is a unit of leading form 1, so low-degree
        components below the valuation and the leading component are
        independent of it.
        """
        if not self._terms:
            return {}
        n = self.n
        current: Dict[ExpVec, int] = {}
        for e, c in self._normalized_exps():
            current[e] = current.get(e, 0) + c
        for i in range(n):
            nxt: Dict[ExpVec, int] = {}
            for key, c in current.items():
                used = sum(key[:i])
                m = key[i]
                head, tail = key[:i], key[i + 1:]
                for j in range(min(m, max_degree - used) + 1):
                    nk = head + (j,) + tail
                    v = nxt.get(nk, 0) + c * comb(m, j)
                    if v:
                        nxt[nk] = v
                    else:
                        nxt.pop(nk, None)
            current = nxt
        return current

    def valuation(self):
        """Largest m with self in Sigma^m (powers of the augmentation ideal)."""
        if self._val is None:
            self._compute_leading()
        return self._val

    def leading_form(self) -> "LeadingForm":
        if not self._terms:
            raise ValueError("zero has no leading form")
        if self._lf is None:
            self._compute_leading()
        return self._lf

    def _compute_leading(self):
        if not self._terms:
            self._val = INFINITY
            return
        bound = max(sum(e) for e, _ in self._normalized_exps())
        d = min(3, bound)
        while True:
            exp = self.t_expansion(d)
            if exp:
                v = min(sum(k) for k in exp)
                self._val = v
                self._lf = LeadingForm(self.n, v, {k: c for k, c in exp.items() if sum(k) == v})
                return
            if d >= bound:
                raise AssertionError("nonzero Laurent polynomial with empty t-expansion")
            d = min(2 * d + 1, bound)

    def homogeneous_component(self, degree: int) -> Dict[ExpVec, int]:
        """Degree-``degree`` part of the t-expansion; raises if any lower part is nonzero."""
        exp = self.t_expansion(degree)
        low = [k for k in exp if sum(k) < degree]
        if low:
            raise ValueError(f"element has valuation below {degree}")
        return exp


class LeadingForm:
    """Homogeneous integer polynomial in t_1..t_n of a fixed degree."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: Mapping[ExpVec, int]):
        self.n = n
        self.degree = degree
        self.coeffs = {k: c for k, c in coeffs.items() if c}
        for k in self.coeffs:
            if sum(k) != degree or len(k) != n:
                raise ValueError(f"multi-index {k} not of degree {degree}")

    def __mul__(self, other: "LeadingForm") -> "LeadingForm":
        out: Dict[ExpVec, int] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return LeadingForm(self.n, self.degree + other.degree, out)

    def __eq__(self, other):
        if not isinstance(other, LeadingForm):
            return NotImplemented
        return self.n == other.n and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        parts = []
        for k, c in sorted(self.coeffs.items(), reverse=True):
            mono = "*".join(f"t{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(k) if x)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return f"LeadingForm(deg={self.degree}: {' + '.join(parts) or '0'})"


def omega(r: Sequence[int]) -> LaurentPoly:
    """``prod_i (a_i - 1)^{r_i}`` expanded exactly."""
    n = len(r)
    if any(x < 0 for x in r):
        raise ValueError("omega needs nonnegative exponents")
    result = LaurentPoly.one(n)
    for i, x in enumerate(r):
        if x:
            result = result * (LaurentPoly.var(n, i + 1) - 1) ** x
    return result


# -- small exact matrix algebra over Z A_n ----------------------------------

Matrix = Sequence[Sequence[LaurentPoly]]


def identity_matrix(n: int) -> Tuple[Tuple[LaurentPoly, ...], ...]:
    one, zero = LaurentPoly.one(n), LaurentPoly.zero(n)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Tuple[Tuple[LaurentPoly, ...], ...]:
    rows, inner, cols = len(a), len(b), len(b[0])
    n = a[0][0].n
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = LaurentPoly.zero(n)
            for k in range(inner):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _minor_det(m: Matrix, rows: Tuple[int, ...], cols: Tuple[int, ...], memo: dict) -> LaurentPoly:
    # Laplace expansion along the first remaining row; minors shared via memo.
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    n = m[0][0].n
    if len(rows) == 1:
        val = m[rows[0]][cols[0]]
    else:
        r, rest = rows[0], rows[1:]
        val = LaurentPoly.zero(n)
        for idx, c in enumerate(cols):
            entry = m[r][c]
            if not entry:
                continue
            sub = _minor_det(m, rest, cols[:idx] + cols[idx + 1:], memo)
            if sub:
                term = entry * sub
                val = val - term if idx % 2 else val + term
    memo[key] = val
    return val


def _check_square(m: Matrix) -> int:
    size = len(m)
    if size == 0 or any(len(row) != size for row in m):
        raise ValueError("matrix must be square and nonempty")
    return size


def det(m: Matrix) -> LaurentPoly:
    """Determinant by cofactor expansion."""
    size = _check_square(m)
    return _minor_det(m, tuple(range(size)), tuple(range(size)), {})


def adjugate(m: Matrix) -> Tuple[Tuple[LaurentPoly, ...], ...]:
    """Classical adjoint: ``adjugate(m) @ m == m @ adjugate(m) == det(m) * I``."""
    size = _check_square(m)
    n = m[0][0].n
    if size == 1:
        return ((LaurentPoly.one(n),),)
    memo: dict = {}
    out = [[None] * size for _ in range(size)]
    all_idx = tuple(range(size))
    for i in range(size):
        rows = all_idx[:i] + all_idx[i + 1:]
        for j in range(size):
            cols = all_idx[:j] + all_idx[j + 1:]
            minor = _minor_det(m, rows, cols, memo)
            out[j][i] = -minor if (i + j) % 2 else minor
    return tuple(tuple(row) for row in out)


# -- canonical text ---------------------------------------------------------

def _format_monomial(e: ExpVec) -> str:
    parts = []
    for i, x in enumerate(e):
        if x == 1:
            parts.append(f"a{i + 1}")
        elif x:
            parts.append(f"a{i + 1}^{x}")
    return "*".join(parts)


def format_scalar(p: LaurentPoly) -> str:
    """Canonical text, e.g. ``2*a1*a2^-1 - a3 + 1``; parsed back by ``metabelian.parser``."""
    if not p:
        return "0"
    pieces = []
    for idx, (e, c) in enumerate(p.terms()):
        mono = _format_monomial(e)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if idx == 0:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> Tuple[ExpVec, ...]:
    """All multi-indices of length n and total degree d, lexicographically descending."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n), d):
        k = [0] * n
        for i in combo:
            k[i] += 1
        out.append(tuple(k))
    return tuple(sorted(set(out), reverse=True))
