"""Text grammar for scalars, group elements and automorphism definitions.

Scalars (elements of Z A_n)::

    scalar  := ['+'|'-'] sterm (('+'|'-') sterm)*
    sterm   := sfactor ('*' sfactor)*
    sfactor := satom ('^' ['-'] INT)*
    satom   := INT | 'a' INT | '(' scalar ')'

Group elements::

    element := factor ('*' factor)*
    factor  := primary ('^' power)*
    power   := ['-'] INT                 group power
             | '(' scalar ')'            module exponent (derived elements only)
    primary := 'x' INT | '1' | '(' element ')' | '[' item (',' item)* ']'
    item    := [INT] element             'm y' stands for m copies of y

Brackets are left-normed: ``[a, b, c] = [[a, b], c]`` and ``[x, 3 y]`` is
``[x, y, y, y]``; a bracket that expands to a single entry is that entry.
Automorphism files hold one image per line, optionally prefixed ``xi ->``;
blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .laurent import LaurentPoly, format_scalar
from .magnus import FreeMetabelian, MagnusElement, NotDerived, commutator

__all__ = [
    "ParseError",
    "parse_scalar",
    "parse_element",
    "parse_endomorphism",
    "parse_element_ast",
    "parse_scalar_ast",
    "format_scalar",
    "format_element",
    "format_endomorphism",
    "derived_decomposition",
    "ast_to_text",
    "evaluate_element",
    "evaluate_scalar",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


# -- AST ------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class AVar:
    index: int


@dataclass(frozen=True)
class SAdd:
    terms: Tuple[Tuple[int, "ScalarAst"], ...]  # (sign, term)


@dataclass(frozen=True)
class SMul:
    factors: Tuple["ScalarAst", ...]


@dataclass(frozen=True)
class SPow:
    base: "ScalarAst"
    exp: int


ScalarAst = Union[Num, AVar, SAdd, SMul, SPow]


@dataclass(frozen=True)
class Gen:
    index: int


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Prod:
    factors: Tuple["ElementAst", ...]


@dataclass(frozen=True)
class Power:
    base: "ElementAst"
    exp: int


@dataclass(frozen=True)
class ModPow:
    base: "ElementAst"
    scalar: ScalarAst


@dataclass(frozen=True)
class Bracket:
    items: Tuple[Tuple[int, "ElementAst"], ...]  # (multiplicity, entry)


ElementAst = Union[Gen, One, Prod, Power, ModPow, Bracket]


# -- tokens ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<gen>x\d+)|(?P<var>a\d+)|(?P<arrow>->)|(?P<op>[\[\](),*^+\-]))")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1) -> List[_Tok]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind if kind != "op" else m.group(kind), m.group(kind), line, start + 1))
        pos = m.end()
    toks.append(_Tok("end", "", line, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, n: Optional[int], line: int = 1):
        self.toks = _tokenize(text, line)
        self.pos = 0
        self.n = n

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def take(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            self.error(f"expected {kind!r}, found {found!r}")
        t = self.tok
        self.pos += 1
        return t

    def accept(self, kind: str) -> Optional[_Tok]:
        if self.tok.kind == kind:
            return self.take(kind)
        return None

    def finish(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    def _index(self, tok: _Tok) -> int:
        i = int(tok.text[1:])
        if i < 1 or (self.n is not None and i > self.n):
            self.error(f"index {i} outside rank {self.n}", tok)
        return i

    # scalars
    def scalar(self) -> ScalarAst:
        terms = []
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        terms.append((sign, self.sterm()))
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.take(self.tok.kind).kind == "+" else -1
            terms.append((sign, self.sterm()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return SAdd(tuple(terms))

    def sterm(self) -> ScalarAst:
        factors = [self.sfactor()]
        while self.accept("*"):
            factors.append(self.sfactor())
        return factors[0] if len(factors) == 1 else SMul(tuple(factors))

    def sfactor(self) -> ScalarAst:
        node = self.satom()
        while self.accept("^"):
            neg = bool(self.accept("-"))
            e = int(self.take("int").text)
            node = SPow(node, -e if neg else e)
        return node

    def satom(self) -> ScalarAst:
        t = self.tok
        if t.kind == "int":
            self.pos += 1
            return Num(int(t.text))
        if t.kind == "var":
            self.pos += 1
            return AVar(self._index(t))
        if t.kind == "(":
            self.pos += 1
            node = self.scalar()
            self.take(")")
            return node
        self.error(f"expected a scalar, found {t.text or 'end of input'!r}")

    # elements
    def element(self) -> ElementAst:
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def factor(self) -> ElementAst:
        node = self.primary()
        while self.accept("^"):
            if self.accept("("):
                s = self.scalar()
                self.take(")")
                node = ModPow(node, s)
            else:
                neg = bool(self.accept("-"))
                e = int(self.take("int").text)
                node = Power(node, -e if neg else e)
        return node

    def primary(self) -> ElementAst:
        t = self.tok
        if t.kind == "gen":
            self.pos += 1
            return Gen(self._index(t))
        if t.kind == "int":
            if t.text != "1":
                self.error(f"integer {t.text} is not an element (only 1 denotes the identity)")
            self.pos += 1
            return One()
        if t.kind == "(":
            self.pos += 1
            node = self.element()
            self.take(")")
            return node
        if t.kind == "[":
            self.pos += 1
            items = [self.item()]
            while self.accept(","):
                items.append(self.item())
            self.take("]")
            return Bracket(tuple(items))
        self.error(f"expected an element, found {t.text or 'end of input'!r}")

    def item(self) -> Tuple[int, ElementAst]:
        if self.tok.kind == "int" and self.peek().kind in ("gen", "[", "(", "int"):
            m = int(self.take("int").text)
            return m, self.element()
        return 1, self.element()


def parse_scalar_ast(text: str, n: Optional[int] = None) -> ScalarAst:
    p = _Parser(text, n)
    node = p.scalar()
    p.finish()
    return node


def parse_element_ast(text: str, n: Optional[int] = None, line: int = 1) -> ElementAst:
    p = _Parser(text, n, line)
    node = p.element()
    p.finish()
    return node


# -- evaluation -----------------------------------------------------------

def evaluate_scalar(node: ScalarAst, n: int) -> LaurentPoly:
    if isinstance(node, Num):
        return LaurentPoly.const(n, node.value)
    if isinstance(node, AVar):
        return LaurentPoly.var(n, node.index)
    if isinstance(node, SAdd):
        acc = LaurentPoly.zero(n)
        for sign, t in node.terms:
            v = evaluate_scalar(t, n)
            acc = acc + v if sign > 0 else acc - v
        return acc
    if isinstance(node, SMul):
        acc = LaurentPoly.one(n)
        for f in node.factors:
            acc = acc * evaluate_scalar(f, n)
        return acc
    if isinstance(node, SPow):
        return evaluate_scalar(node.base, n) ** node.exp
    raise TypeError(node)


def evaluate_element(node: ElementAst, G: FreeMetabelian) -> MagnusElement:
    if isinstance(node, Gen):
        return G.gen(node.index)
    if isinstance(node, One):
        return G.one()
    if isinstance(node, Prod):
        acc = G.one()
        for f in node.factors:
            acc = acc * evaluate_element(f, G)
        return acc
    if isinstance(node, Power):
        return evaluate_element(node.base, G) ** node.exp
    if isinstance(node, ModPow):
        base = evaluate_element(node.base, G)
        return base.module_pow(evaluate_scalar(node.scalar, G.n))
    if isinstance(node, Bracket):
        entries = []
        for mult, sub in node.items:
            if mult < 0:
                raise ValueError("negative bracket multiplicity")
            if mult:
                v = evaluate_element(sub, G)
                entries.extend([v] * mult)
        if not entries:
            raise ValueError("bracket expands to no entries")
        acc = entries[0]
        for v in entries[1:]:
            acc = commutator(acc, v)
        return acc
    raise TypeError(node)


def parse_scalar(text: str, n: int) -> LaurentPoly:
    return evaluate_scalar(parse_scalar_ast(text, n), n)


def parse_element(text: str, ctx: Union[FreeMetabelian, int]) -> MagnusElement:
    G = ctx if isinstance(ctx, FreeMetabelian) else FreeMetabelian(ctx)
    return _evaluate_reporting(parse_element_ast(text, G.n), G, 1)


def _evaluate_reporting(node: ElementAst, G: FreeMetabelian, line: int) -> MagnusElement:
    try:
        return evaluate_element(node, G)
    except NotDerived as exc:
        raise ParseError(str(exc), line, 1) from None


_ARROW = re.compile(r"^\s*x(\d+)\s*->\s*")


def parse_endomorphism(text: str, ctx: Union[FreeMetabelian, int]):
    """One image per line (``x1 -> expr`` or bare ``expr``) in generator order."""
    from .endo import Endomorphism

    G = ctx if isinstance(ctx, FreeMetabelian) else FreeMetabelian(ctx)
    images = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _ARROW.match(line)
        body = line
        if m:
            idx = int(m.group(1))
            if idx != len(images) + 1:
                raise ParseError(f"expected image of x{len(images) + 1}, found x{idx}", lineno, 1)
            body = " " * m.end() + line[m.end():]
        node = parse_element_ast(body, G.n, lineno)
        images.append(_evaluate_reporting(node, G, lineno))
    if len(images) != G.n:
        raise ParseError(f"expected {G.n} generator images, found {len(images)}", len(text.splitlines()) or 1, 1)
    return Endomorphism(images)


# -- printing -------------------------------------------------------------

def ast_to_text(node) -> str:
    """Render an AST in the grammar (fully parenthesized where needed)."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, AVar):
        return f"a{node.index}"
    if isinstance(node, SAdd):
        out = []
        for k, (sign, t) in enumerate(node.terms):
            body = ast_to_text(t)
            if isinstance(t, SAdd):
                body = f"({body})"
            if k == 0:
                out.append(("-" if sign < 0 else "") + body)
            else:
                out.append((" - " if sign < 0 else " + ") + body)
        return "".join(out)
    if isinstance(node, SMul):
        return "*".join(_scalar_operand(f) for f in node.factors)
    if isinstance(node, SPow):
        return f"{_scalar_operand(node.base)}^{node.exp}"
    if isinstance(node, Gen):
        return f"x{node.index}"
    if isinstance(node, One):
        return "1"
    if isinstance(node, Prod):
        return "*".join(_element_operand(f) for f in node.factors)
    if isinstance(node, Power):
        return f"{_element_operand(node.base)}^{node.exp}"
    if isinstance(node, ModPow):
        return f"{_element_operand(node.base)}^({ast_to_text(node.scalar)})"
    if isinstance(node, Bracket):
        parts = []
        for mult, sub in node.items:
            body = ast_to_text(sub)
            parts.append(body if mult == 1 else f"{mult} {body}")
        return "[" + ", ".join(parts) + "]"
    raise TypeError(node)


def _scalar_operand(node) -> str:
    if isinstance(node, (Num, AVar)):
        return ast_to_text(node)
    return f"({ast_to_text(node)})"


def _element_operand(node) -> str:
    if isinstance(node, (Gen, One, Bracket)):
        return ast_to_text(node)
    return f"({ast_to_text(node)})"


def _split_by_variable(p: LaurentPoly, m: int) -> Dict[int, LaurentPoly]:
    """p = sum_t a_m^t * c_t with c_t free of a_m (m is 0-based)."""
    n = p.n
    groups: Dict[int, dict] = {}
    for e, c in p.terms():
        rest = e[:m] + (0,) + e[m + 1:]
        groups.setdefault(e[m], {})[rest] = c
    return {t: LaurentPoly.from_terms(n, terms) for t, terms in groups.items()}


def _geometric(n: int, m: int, t: int) -> LaurentPoly:
    """(a_m^t - 1) / (a_m - 1) for integer t (m is 0-based)."""
    if t == 0:
        return LaurentPoly.zero(n)
    unit = [0] * n
    terms = {}
    rng = range(0, t) if t > 0 else range(t, 0)
    sign = 1 if t > 0 else -1
    for s in rng:
        unit[m] = s
        terms[tuple(unit)] = sign
    return LaurentPoly.from_terms(n, terms)


def derived_decomposition(w: MagnusElement) -> Dict[Tuple[int, int], LaurentPoly]:
    """Scalars P_kl (k < l, 1-based) with w = prod [x_k, x_l]^{P_kl}; w must be derived."""
    if not w.is_derived():
        raise NotDerived("decomposition needs a derived element")
    n = w.n
    f = list(w.d)
    out: Dict[Tuple[int, int], LaurentPoly] = {}
    for m in range(n - 1, 0, -1):
        am1 = LaurentPoly.var(n, m + 1) - 1
        correction = LaurentPoly.zero(n)
        for k in range(m):
            if not f[k]:
                continue
            parts = _split_by_variable(f[k], m)
            r = LaurentPoly.zero(n)
            h = LaurentPoly.zero(n)
            for t, ct in parts.items():
                r = r + ct
                h = h + ct * _geometric(n, m, t)
            f[k] = r
            if h:
                unit = [0] * n
                unit[k] = 1
                unit[m] = 1
                out[(k + 1, m + 1)] = (-h).shift(unit).star()
                correction = correction + h * (LaurentPoly.var(n, k + 1) - 1)
        f[m] = f[m] + correction
        if f[m]:
            raise ArithmeticError("derivative row violates the fundamental identity")
        del am1
    if f[0]:
        raise ArithmeticError("derivative row violates the fundamental identity")
    return out


def format_element(w: MagnusElement) -> str:
    """Canonical text ``x1^e1*...*xn^en*[xk,xl]^(P)*...`` that parses back to w."""
    G = FreeMetabelian(w.n)
    factors = []
    prefix = G.one()
    for i, x in enumerate(w.e):
        if x:
            prefix = prefix * G.gen(i + 1) ** x
            factors.append(f"x{i + 1}" if x == 1 else f"x{i + 1}^{x}")
    derived = prefix.inverse() * w
    for (k, l), p in sorted(derived_decomposition(derived).items()):
        br = f"[x{k},x{l}]"
        if p == 1:
            factors.append(br)
        elif p == -1:
            factors.append(br + "^-1")
        else:
            factors.append(f"{br}^({format_scalar(p)})")
    return "*".join(factors) if factors else "1"


def format_endomorphism(phi) -> str:
    return "\n".join(f"x{i + 1} -> {format_element(im)}" for i, im in enumerate(phi.images))
