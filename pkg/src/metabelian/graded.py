"""The graded quotients gr_c(M_n) = gamma_c / gamma_{c+1}.

Degree-c elements are integer (or rational) combinations of basic
commutators [x_{i1}, ..., x_{ic}] with i1 > i2 <= i3 <= ... <= ic.  A group
element of depth >= c is coordinatized by matching the degree-(c-1) leading
forms of its Fox derivatives against those of the basis.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .laurent import ExpVec
from .magnus import FreeMetabelian, MagnusElement, left_normed

__all__ = [
    "basis",
    "rank_gr",
    "GradedVector",
    "GrTuple",
    "coordinates",
    "lie_normal_form",
    "gl_act",
    "bullet",
    "span_dim",
    "SingularMatrix",
    "DepthTooSmall",
    "matrix_inverse",
    "IntegerSolver",
    "RowSpace",
]

Number = Union[int, Fraction]
Indices = Tuple[int, ...]
IntMatrix = Sequence[Sequence[Number]]


class SingularMatrix(ValueError):
    pass


class DepthTooSmall(ValueError):
    pass


# -- bases and ranks --------------------------------------------------------

@lru_cache(maxsize=None)
def basis(n: int, c: int) -> Tuple[Indices, ...]:
    """Index sequences (i1, ..., ic) with i1 > i2 <= i3 <= ... <= ic, sorted."""
    if n < 2 or c < 2:
        raise ValueError("basis needs n >= 2 and c >= 2")
    out = []

    def tails(start: int, length: int):
        if length == 0:
            yield ()
            return
        for i in range(start, n + 1):
            for rest in tails(i, length - 1):
                yield (i,) + rest

    for i2 in range(1, n + 1):
        for i1 in range(i2 + 1, n + 1):
            for tail in tails(i2, c - 2):
                out.append((i1, i2) + tail)
    return tuple(sorted(out))


def rank_gr(n: int, c: int) -> int:
    """Rank of gr_c(M_n): (c - 1) * C(n + c - 2, n - 2)."""
    if n < 2 or c < 2:
        raise ValueError("rank_gr needs n >= 2 and c >= 2")
    return (c - 1) * comb(n + c - 2, n - 2)


@lru_cache(maxsize=None)
def _basis_index(n: int, c: int) -> Dict[Indices, int]:
    return {b: k for k, b in enumerate(basis(n, c))}


# -- vectors ----------------------------------------------------------------

class GradedVector:
    """Element of gr_c(M_n) (tensor Q) in the basic-commutator basis."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: Optional[Mapping[Indices, Number]] = None):
        self.n = n
        self.degree = degree
        self.coeffs: Dict[Indices, Number] = {}
        if coeffs:
            index = _basis_index(n, degree)
            for k, v in coeffs.items():
                k = tuple(k)
                if k not in index:
                    raise ValueError(f"{k} is not a basic commutator of degree {degree} in rank {n}")
                if v:
                    self.coeffs[k] = _norm(v)

    @classmethod
    def zero(cls, n: int, degree: int) -> "GradedVector":
        return cls(n, degree)

    @classmethod
    def unit(cls, n: int, indices: Indices) -> "GradedVector":
        return cls(n, len(indices), {tuple(indices): 1})

    def _same(self, other: "GradedVector"):
        if (self.n, self.degree) != (other.n, other.degree):
            raise ValueError("graded vectors of different rank or degree")

    def __add__(self, other: "GradedVector") -> "GradedVector":
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GradedVector(self.n, self.degree, out)

    def __neg__(self):
        return GradedVector(self.n, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: Number) -> "GradedVector":
        return GradedVector(self.n, self.degree, {k: v * s for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedVector):
            return NotImplemented
        return (self.n, self.degree, self.coeffs) == (other.n, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, key: Indices) -> Number:
        return self.coeffs.get(tuple(key), 0)

    def pairs(self) -> List[Tuple[Indices, Number]]:
        """Nonzero (indices, coefficient) pairs in basis order."""
        return sorted(self.coeffs.items())

    def __repr__(self):
        body = ", ".join(f"{list(k)}: {v}" for k, v in self.pairs())
        return f"GradedVector(c={self.degree}; {body})"


def _norm(v: Number) -> Number:
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    return v


class GrTuple:
    """An n-tuple of degree-c graded vectors (the target of chi_c)."""

    __slots__ = ("n", "degree", "slots")

    def __init__(self, slots: Sequence[GradedVector]):
        slots = tuple(slots)
        if not slots:
            raise ValueError("empty tuple")
        n, c = slots[0].n, slots[0].degree
        if len(slots) != n or any((s.n, s.degree) != (n, c) for s in slots):
            raise ValueError("GrTuple needs n vectors of common rank and degree")
        self.n = n
        self.degree = c
        self.slots = slots

    @classmethod
    def zero(cls, n: int, degree: int) -> "GrTuple":
        return cls([GradedVector.zero(n, degree)] * n)

    @classmethod
    def single(cls, slot: int, v: GradedVector) -> "GrTuple":
        """Tuple with ``v`` at 1-based position ``slot`` and zero elsewhere."""
        zero = GradedVector.zero(v.n, v.degree)
        return cls([v if k == slot - 1 else zero for k in range(v.n)])

    def __add__(self, other: "GrTuple") -> "GrTuple":
        return GrTuple([a + b for a, b in zip(self.slots, other.slots)])

    def __neg__(self):
        return GrTuple([-a for a in self.slots])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, GrTuple):
            return NotImplemented
        return self.slots == other.slots

    def __hash__(self):
        return hash(self.slots)

    def __getitem__(self, k: int) -> GradedVector:
        return self.slots[k]

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.slots)

    def flatten(self) -> Dict[int, Number]:
        """Sparse coordinates indexed by slot * rank_gr + basis position."""
        index = _basis_index(self.n, self.degree)
        size = len(index)
        out = {}
        for s, v in enumerate(self.slots):
            for k, x in v.coeffs.items():
                out[s * size + index[k]] = x
        return out

    @classmethod
    def unflatten(cls, n: int, degree: int, flat: Mapping[int, Number]) -> "GrTuple":
        b = basis(n, degree)
        size = len(b)
        slots = [dict() for _ in range(n)]
        for pos, x in flat.items():
            slots[pos // size][b[pos % size]] = x
        return cls([GradedVector(n, degree, s) for s in slots])

    def to_json(self):
        return [[[list(k), _json_number(v)] for k, v in s.pairs()] for s in self.slots]

    def __repr__(self):
        return "GrTuple(" + "; ".join(repr(s) for s in self.slots) + ")"


def _json_number(v: Number):
    if isinstance(v, Fraction):
        return str(v)
    return v


# -- exact linear algebra ---------------------------------------------------

class IntegerSolver:
    """Solve lambda @ rows == v exactly, for fixed rows (sparse dicts).

    Rows are reduced once by rational Gaussian elimination, keeping track of
    each echelon row as a combination of the original rows.  ``solve``
    reduces a target against the echelon form and asserts consistency and
    integrality of the result.
    """

    def __init__(self, rows: Sequence[Mapping]):
        self.size = len(rows)
        colcount: Dict = {}
        for r in rows:
            for col in r:
                colcount[col] = colcount.get(col, 0) + 1
        self.echelon: List[Tuple[object, Dict, Dict[int, Fraction]]] = []
        pivots: Dict = {}
        for idx, r in enumerate(rows):
            vec = {k: Fraction(v) for k, v in r.items() if v}
            combo = {idx: Fraction(1)}
            for piv, prow, pcombo in self.echelon:
                f = vec.get(piv)
                if f:
                    f = f / prow[piv]
                    _axpy(vec, prow, -f)
                    _axpy(combo, pcombo, -f)
            if not vec:
                raise ValueError(f"row {idx} is linearly dependent on earlier rows")
            piv = min(vec, key=lambda col: (colcount[col], col))
            pivots[piv] = len(self.echelon)
            self.echelon.append((piv, vec, combo))

    def solve(self, target: Mapping) -> List[int]:
        vec = {k: Fraction(v) for k, v in target.items() if v}
        lam: Dict[int, Fraction] = {}
        for piv, prow, pcombo in self.echelon:
            f = vec.get(piv)
            if f:
                f = f / prow[piv]
                _axpy(vec, prow, -f)
                _axpy(lam, pcombo, f)
        if vec:
            raise ArithmeticError("target outside the row space")
        out = []
        for i in range(self.size):
            x = lam.get(i, Fraction(0))
            if x.denominator != 1:
                raise ArithmeticError(f"non-integral coordinate {x}")
            out.append(int(x))
        return out


def _axpy(y: Dict, x: Mapping, a) -> None:
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


class RowSpace:
    """Incrementally maintained row-echelon basis over Q, stored fraction-free."""

    def __init__(self):
        self.rows: Dict[int, Dict[int, int]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping[int, Number]) -> Dict[int, int]:
        v = _integral(vec)
        for piv in sorted(self.rows):
            x = v.get(piv)
            if not x:
                continue
            row = self.rows[piv]
            p = row[piv]
            g = gcd(p, x)
            sv, sr = p // g, x // g
            out = {k: val * sv for k, val in v.items()}
            for k, val in row.items():
                nv = out.get(k, 0) - sr * val
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
            v = _primitive(out)
        return v

    def add(self, vec: Mapping[int, Number]) -> Optional[Dict[int, int]]:
        """Insert ``vec``; returns the new echelon row if the dimension grew."""
        v = self.reduce(vec)
        if not v:
            return None
        self.rows[min(v)] = v
        return v


def _integral(vec: Mapping[int, Number]) -> Dict[int, int]:
    den = 1
    for x in vec.values():
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    return _primitive({k: int(x * den) for k, x in vec.items() if x})


def _primitive(v: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return {k: x // g for k, x in v.items()}
    return v


def matrix_inverse(g: IntMatrix) -> Tuple[Tuple[Number, ...], ...]:
    """Exact rational inverse (integers where possible)."""
    size = len(g)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(size)]
         for i, row in enumerate(g)]
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(size):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(_norm(x) for x in row[size:]) for row in a)


# -- coordinates of group elements -----------------------------------------

@lru_cache(maxsize=None)
def _basis_rows(n: int, c: int) -> Tuple[Dict[Tuple[int, ExpVec], int], ...]:
    G = FreeMetabelian(n)
    rows = []
    for b in basis(n, c):
        w = left_normed(G.gen(i) for i in b)
        rows.append(_leading_row(w, c))
    return tuple(rows)


@lru_cache(maxsize=None)
def _solver(n: int, c: int) -> IntegerSolver:
    return IntegerSolver(_basis_rows(n, c))


def _leading_row(w: MagnusElement, c: int) -> Dict[Tuple[int, ExpVec], int]:
    row = {}
    for j, dj in enumerate(w.d):
        if not dj:
            continue
        try:
            comp = dj.homogeneous_component(c - 1)
        except ValueError:
            raise DepthTooSmall(f"element has depth < {c}") from None
        for k, v in comp.items():
            if sum(k) == c - 1:
                row[(j, k)] = v
    return row


def coordinates(w: MagnusElement, c: int) -> GradedVector:
    """Integer coordinates of w * gamma_{c+1} in the basic-commutator basis.

    Requires gamma_depth(w) >= c; the result is zero iff the depth exceeds c.
    """
    n = w.n
    if c < 2:
        raise ValueError("coordinates are defined for c >= 2")
    if any(w.e):
        raise DepthTooSmall("element is not in the derived group")
    row = _leading_row(w, c)
    lam = _solver(n, c).solve(row)
    return GradedVector(n, c, {b: x for b, x in zip(basis(n, c), lam) if x})


def basis_element(G: FreeMetabelian, indices: Indices) -> MagnusElement:
    return left_normed(G.gen(i) for i in indices)


def element_of(G: FreeMetabelian, v: GradedVector) -> MagnusElement:
    """The product prod b^lambda_b of basic commutators (integer coefficients)."""
    out = G.one()
    for b, x in v.pairs():
        if isinstance(x, Fraction):
            raise ValueError("element_of needs integer coordinates")
        out = out * basis_element(G, b) ** x
    return out


# -- the free metabelian Lie algebra -----------------------------------------

def lie_normal_form(indices: Sequence[int], n: Optional[int] = None,
                    rng: Optional[random.Random] = None) -> GradedVector:
    """Expand the left-normed Lie bracket [z_{j1}, ..., z_{jc}] in the basis.

    Uses antisymmetry in the first two slots, free permutation of the tail
    (valid in a metabelian Lie algebra), and the Jacobi rewrite
    [a, b, m] = [a, m, b] - [b, m, a] when a tail entry m is below b.
    ``rng`` randomizes which tail entry is used, for confluence testing.
    """
    seq = tuple(indices)
    if len(seq) < 2:
        raise ValueError("bracket needs at least two entries")
    if n is None:
        n = max(max(seq), 2)
    if rng is None:
        coeffs = _lnf(seq)
    else:
        coeffs = _lnf_random(seq, rng)
    return GradedVector(n, len(seq), coeffs)


@lru_cache(maxsize=None)
def _lnf_cached(seq: Indices) -> Tuple[Tuple[Indices, int], ...]:
    return tuple(sorted(_lnf_step(seq, None).items()))


def _lnf(seq: Indices) -> Dict[Indices, int]:
    return dict(_lnf_cached(seq))


def _lnf_random(seq: Indices, rng: random.Random) -> Dict[Indices, int]:
    return _lnf_step(seq, rng)


def _lnf_step(seq: Indices, rng: Optional[random.Random]) -> Dict[Indices, int]:
    recurse = _lnf if rng is None else (lambda s: _lnf_random(s, rng))
    a, b, tail = seq[0], seq[1], seq[2:]
    if a == b:
        return {}
    if a < b:
        return {k: -v for k, v in recurse((b, a) + tail).items()}
    small = [m for m in tail if m < b]
    if not small:
        return {(a, b) + tuple(sorted(tail)): 1}
    m = min(small) if rng is None else rng.choice(small)
    rest = list(tail)
    rest.remove(m)
    if rng is not None:
        rng.shuffle(rest)
    rest = tuple(rest)
    out = dict(recurse((a, m, b) + rest))
    for k, v in recurse((b, m, a) + rest).items():
        nv = out.get(k, 0) - v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


# -- GL_n actions ------------------------------------------------------------

def _check_invertible(g: IntMatrix) -> int:
    size = len(g)
    if any(len(row) != size for row in g):
        raise ValueError("matrix must be square")
    matrix_inverse(g)
    return size


def gl_act(g: IntMatrix, v: GradedVector) -> GradedVector:
    """Diagonal action: each slot x_j -> sum_i g[i][j] x_i, then normalize."""
    size = _check_invertible(g)
    if size != v.n:
        raise ValueError("matrix size differs from rank")
    return _gl_act_unchecked(g, v)


def _gl_act_unchecked(g: IntMatrix, v: GradedVector) -> GradedVector:
    n = v.n
    columns = [[(i + 1, g[i][j]) for i in range(n) if g[i][j]] for j in range(n)]
    out: Dict[Indices, Number] = {}
    for b, lam in v.coeffs.items():
        partial = [((), lam)]
        for j in b:
            partial = [(seq + (i,), coef * gij) for seq, coef in partial for i, gij in columns[j - 1]]
        for seq, coef in partial:
            for k, x in _lnf(seq).items():
                nv = out.get(k, 0) + coef * x
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
    return GradedVector(n, v.degree, out)


def bullet(g: IntMatrix, t: GrTuple) -> GrTuple:
    """g . (u_1, ..., u_n) = (g u_1, ..., g u_n) g^{-1}."""
    size = len(g)
    if size != t.n:
        raise ValueError("matrix size differs from rank")
    h = matrix_inverse(g)
    moved = [_gl_act_unchecked(g, u) for u in t.slots]
    out = []
    for j in range(t.n):
        acc = GradedVector.zero(t.n, t.degree)
        for k in range(t.n):
            if h[k][j]:
                acc = acc + moved[k].scale(h[k][j])
        out.append(acc)
    return GrTuple(out)


def _action_matrix(g: IntMatrix, n: int, c: int) -> List[Dict[int, Number]]:
    """Images of all flattened unit vectors under bullet(g, .)."""
    b = basis(n, c)
    size = len(b)
    cols = []
    for pos in range(n * size):
        unit = GrTuple.single(pos // size + 1, GradedVector.unit(n, b[pos % size]))
        cols.append(bullet(g, unit).flatten())
    return cols


def _apply_sparse(cols: List[Dict[int, Number]], vec: Mapping[int, Number]) -> Dict[int, Number]:
    out: Dict[int, Number] = {}
    for pos, x in vec.items():
        for k, y in cols[pos].items():
            nv = out.get(k, 0) + x * y
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def span_dim(seeds: Sequence[GrTuple], generators: Sequence[IntMatrix]) -> int:
    """Dimension over Q of the smallest bullet-invariant subspace containing ``seeds``.

    Each generator maps a finite-dimensional invariant subspace onto itself,
    so closing under the generators alone also gives closure under their
    inverses.
    """
    seeds = list(seeds)
    if not seeds:
        return 0
    n, c = seeds[0].n, seeds[0].degree
    if any((s.n, s.degree) != (n, c) for s in seeds):
        raise ValueError("seeds of mixed rank or degree")
    for g in generators:
        _check_invertible(g)
    ambient = n * rank_gr(n, c)
    actions = [_action_matrix(g, n, c) for g in generators]
    space = RowSpace()
    queue = []
    for s in seeds:
        row = space.add(s.flatten())
        if row is not None:
            queue.append(row)
    while queue and len(space) < ambient:
        vec = queue.pop()
        for cols in actions:
            row = space.add(_apply_sparse(cols, vec))
            if row is not None:
                queue.append(row)
                if len(space) == ambient:
                    break
    return len(space)


def gl_generators(n: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Transvections I + E_ij (i != j), the swap (1 2), and diag(-1, 1, ..., 1)."""
    def ident():
        return [[int(i == j) for j in range(n)] for i in range(n)]

    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = ident()
                m[i][j] = 1
                gens.append(m)
    m = ident()
    m[0][0] = m[1][1] = 0
    m[0][1] = m[1][0] = 1
    gens.append(m)
    m = ident()
    m[0][0] = -1
    gens.append(m)
    return [tuple(tuple(r) for r in m) for m in gens]
