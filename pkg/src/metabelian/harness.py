"""Checks of group identities, displayed equations, ranks and the chi embedding.

Every check returns a VerdictReport.  Runs are deterministic: samples come
from seeded ``random.Random`` instances, parameters are enumerated in
lexicographic order, and timings are left out of JSON unless requested.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import zoo
from .endo import Coset, Endomorphism, star_act, tame_lift
from .graded import GrTuple, basis, bullet, coordinates, gl_generators, rank_gr, span_dim
from .laurent import INFINITY, LaurentPoly, monomials_of_degree
from .magnus import FreeMetabelian, MagnusElement, commutator, left_normed
from .parser import format_element

__all__ = [
    "VerdictReport",
    "check_group_identity",
    "check_group_identities",
    "verify_equation",
    "verify_equation_readings",
    "EQUATION_IDS",
    "check_delta_definition",
    "rank_report",
    "expected_ranks",
    "generator_witness",
    "chi_kernel_and_equivariance",
    "run_suite",
    "reports_to_json",
    "Witness",
]

SCHEMA_VERSION = 1


@dataclass
class VerdictReport:
    check: str
    params: dict
    status: str  # "pass" | "fail" | "skipped"
    witness: Optional[dict] = None
    variant: Optional[str] = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def is_variant(self) -> bool:
        """Per-reading detail reports; they never decide the exit status."""
        return self.check == "equation-reading"

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "witness": self.witness,
            "variant": self.variant,
            "millis": round(self.elapsed * 1000) if timings else None,
        }


def reports_to_json(reports: Sequence[VerdictReport], timings: bool = False) -> str:
    return json.dumps([r.to_dict(timings) for r in reports], indent=2, sort_keys=False) + "\n"


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _depth_json(d):
    return None if d is INFINITY else d


def _element_witness(w: MagnusElement) -> dict:
    d = w.gamma_depth()
    out = {"depth": _depth_json(d), "element": format_element(w)}
    if d is not INFINITY and d >= 2:
        out["coordinates"] = [[list(k), v] for k, v in coordinates(w, d).pairs()]
    return out


def _auto_witness(phi: Endomorphism) -> dict:
    """Depth and leading chi coordinates of a discrepancy automorphism."""
    if not phi.is_ia():
        return {"ia_depth": 1, "abelianized": [list(r) for r in phi.abelianized]}
    d = phi.ia_depth()
    out = {"ia_depth": _depth_json(d)}
    if d is not INFINITY:
        out["chi"] = phi.chi(d).to_json()
    return out


# -- sampling ----------------------------------------------------------------

def random_element(G: FreeMetabelian, rng: random.Random, max_len: int = 5) -> MagnusElement:
    w = G.one()
    for _ in range(rng.randint(1, max_len)):
        w = w * G.gen(rng.randint(1, G.n)) ** rng.choice((1, -1, 2, -2))
    return w


# -- group identities --------------------------------------------------------

def _cyclic(u, v, w):
    return left_normed([u, v, w]) * left_normed([v, w, u]) * left_normed([w, u, v])


def _metabelian(u, v, w, z):
    return commutator(commutator(u, v), commutator(w, z))


def _expansion(a, b, c, d):
    lhs = commutator(a * b, c * d)
    rhs = (commutator(a, d) * left_normed([a, d, b]) * commutator(b, d) * commutator(a, c)
           * left_normed([a, c, b * d]) * commutator(b, c) * left_normed([b, c, d]))
    return lhs.inverse() * rhs


def _modified_pair(x, y, z):
    lhs = commutator(x * commutator(x, z), y * commutator(y, z))
    return lhs.inverse() * commutator(x, y) * left_normed([x, y, z])


_IDENTITIES: Dict[str, Tuple[int, Callable]] = {
    "metabelian-law": (4, _metabelian),
    "cyclic-identity": (3, _cyclic),
    "commutator-expansion": (4, _expansion),
    "modified-pair": (3, _modified_pair),
}


def _jacobi_discrepancy(G: FreeMetabelian, i: int, j: int, k: int) -> MagnusElement:
    x = G.gen
    return (commutator(x(i), x(j)).module_pow(G.a(k) - 1)
            * commutator(x(j), x(k)).module_pow(G.a(i) - 1)
            * commutator(x(k), x(i)).module_pow(G.a(j) - 1))


@_timed
def check_group_identity(name: str, n: int, samples: int = 50, seed: int = 0) -> VerdictReport:
    """One named identity; each sample's discrepancy must be the identity element."""
    G = FreeMetabelian(n)
    params = {"n": n, "identity": name}
    if name == "jacobi-relation":
        if n < 3:
            return VerdictReport("group-identity", params, "skipped", details={"reason": "needs n >= 3"})
        triples = list(itertools.permutations(range(1, n + 1), 3))
        params["triples"] = len(triples)
        for t in triples:
            disc = _jacobi_discrepancy(G, *t)
            if not disc.is_one():
                return VerdictReport("group-identity", params, "fail",
                                     witness={"triple": list(t), **_element_witness(disc)})
        return VerdictReport("group-identity", params, "pass")
    if name not in _IDENTITIES:
        raise ValueError(f"unknown identity {name!r}; expected one of {IDENTITY_NAMES}")
    arity, fn = _IDENTITIES[name]
    params.update({"samples": samples, "seed": seed})
    rng = random.Random(f"{name}:{n}:{seed}")
    for s in range(samples):
        args = [random_element(G, rng) for _ in range(arity)]
        disc = fn(*args)
        if not disc.is_one():
            return VerdictReport("group-identity", params, "fail", witness={
                "sample": s, "arguments": [format_element(a) for a in args], **_element_witness(disc)})
    return VerdictReport("group-identity", params, "pass")


IDENTITY_NAMES = ("metabelian-law", "cyclic-identity", "jacobi-relation",
                  "commutator-expansion", "modified-pair")


@_timed
def check_group_identities(n: int, samples: int = 50, seed: int = 0) -> VerdictReport:
    """All identities together; passes iff each one does."""
    parts = [check_group_identity(name, n, samples, seed) for name in IDENTITY_NAMES]
    params = {"n": n, "samples": samples, "seed": seed}
    failed = [p for p in parts if p.status == "fail"]
    if failed:
        return VerdictReport("group-identities", params, "fail",
                             witness={"identity": failed[0].params["identity"], **failed[0].witness})
    if n < 3:
        return VerdictReport("group-identities", params, "skipped",
                             details={"reason": "three-variable identities need n >= 3"})
    return VerdictReport("group-identities", params, "pass")


# -- displayed equations -----------------------------------------------------

class _Eq:
    """A displayed equation: parameter enumeration plus named readings."""

    def __init__(self, eq_id: str, level: str, min_n: int, params, readings):
        self.id = eq_id
        self.level = level  # "exact" or "coset"
        self.min_n = min_n
        self.params = params
        self.readings = readings


def _tuples(n: int, total: int, fixed: Dict[int, int] = None, lower: Dict[int, int] = None):
    """Nonnegative n-tuples with the given sum, fixed entries and lower bounds (1-based keys)."""
    fixed = fixed or {}
    lower = lower or {}
    out = []
    for r in monomials_of_degree(n, total) if total >= 0 else ():
        if all(r[k - 1] == v for k, v in fixed.items()) and all(r[k - 1] >= v for k, v in lower.items()):
            out.append(tuple(r))
    return sorted(out)


def _t123(G, r):
    return zoo.tau_P(G, 1, 2, 3, r)


def _t213(G, r):
    return zoo.tau_P(G, 2, 1, 3, r)


def _delta(G, r):
    # The reading of the product that agrees with the displayed images.
    return zoo.delta_product(G, r, "late")


def _star_beta(G, phi, inverse_matrix: bool):
    b = zoo.beta(G)
    t = b.inverse() if inverse_matrix else b
    return t * phi * t.inverse()


def _prod(G, items: Iterable[Endomorphism]) -> Endomorphism:
    acc = Endomorphism.identity(G.n)
    for x in items:
        acc = acc * x
    return acc


def _u12(G, s):
    w = commutator(G.gen(1), G.gen(2))
    for k, m in enumerate(s):
        w = zoo.bracket_repeat(w, m, G.gen(k + 1))
    return w


def _bump(s, k):
    t = list(s)
    t[k - 1] += 1
    return tuple(t)


def _bq_from_tau_product(tau_inverse: bool, swap: bool):
    def build(G, n, c, p):
        s = p["s"]
        taus = []
        for lam in range(3, n + 1):
            t = zoo.tau_P(G, lam, 2, 1, _bump(s, lam)) if swap else zoo.tau_P(G, lam, 1, 2, _bump(s, lam))
            taus.append(t.inverse() if tau_inverse else t)
        lhs = zoo.inner(G, _u12(G, s)) * _prod(G, taus)
        return lhs, zoo.B_Q(G, 1, 2, s)
    return build


def _delta_without_second(beta_inverse: bool, invert: bool):
    def build(G, n, c, p):
        r = p["r"]
        lhs = _t213(G, r) * _t123(G, r).inverse() * _star_beta(G, _t123(G, r), beta_inverse)
        return (lhs.inverse() if invert else lhs), _delta(G, r)
    return build


def _delta_second_one(beta_inverse: bool, invert: bool):
    def build(G, n, c, p):
        r = p["r"]
        r1, rest = r[0], r[2:]
        a = (r1,) + (1,) + rest
        b = (r1 + 1, 0) + rest
        phi11 = _t123(G, a).inverse() * _t123(G, b).inverse()
        phi21 = _t213(G, a) * _t213(G, b)
        lhs = _delta(G, b).inverse() * phi21 * phi11 * _star_beta(G, _t123(G, a), beta_inverse)
        return (lhs.inverse() if invert else lhs), _delta(G, a)
    return build


def _delta_general(beta_inverse: bool, invert: bool):
    def build(G, n, c, p):
        r = p["r"]
        r1, r2, r3, tail = r[0], r[1], r[2], r[3:]
        B = _prod(G, (zoo.B_Q(G, 1, 2, (r1 + k - 1, r2 - k - 1, r3 + 1) + tail) for k in range(1, r2)))
        psi11 = _prod(G, (_t123(G, (r1 + k + 1, r2 - k - 1, r3) + tail).inverse() for k in range(1, r2)))
        psi22 = _prod(G, (_t213(G, (r1 + k - 1, r2 - k + 1, r3) + tail) for k in range(1, r2)))
        psi13 = _prod(G, (_t123(G, (r1 + k, r2 - k, r3) + tail).inverse() for k in range(0, r2 + 1)))
        psi24 = _prod(G, (_t213(G, (r1 + k, r2 - k, r3) + tail) for k in range(0, r2 + 1)))
        d0 = _delta(G, (r1 + r2, 0, r3) + tail)
        lhs = (B * psi22 * psi11 * d0.inverse() * psi24 * psi13
               * _star_beta(G, _t123(G, r), beta_inverse))
        return (lhs.inverse() if invert else lhs), _delta(G, r)
    return build


def _conj(y: Endomorphism, x: Endomorphism) -> Endomorphism:
    """y^x = x^-1 y x."""
    return x.inverse() * y * x


def _step(G, j):
    return (zoo.pi(G, 2, j) * zoo.pi(G, 3, j)).inverse()


def tau_first_column(G, s1: int) -> Endomorphism:
    """The right-hand side of the s_1 + 1 recursion: [pi_1n, (psi_{1,s_1}^-1)^{sigma_1n}]."""
    n = G.n
    return zoo.auto_bracket(zoo.pi(G, 1, n), _conj(zoo.psi1(G, s1).inverse(), zoo.sigma(G, 1, n)))


def _first_column_tau(G, n, c, p):
    s1 = p["s1"]
    return _t123(G, (s1 + 1,) + (0,) * (n - 1)), tau_first_column(G, s1)


def _last_column_recursion(G, n, c, p):
    s1, sn = p["s1"], p["sn"]
    base = (s1 + 1,) + (0,) * (n - 1)
    lhs = _t123(G, base[:-1] + (sn,)).inverse()
    return lhs, zoo.auto_bracket_repeat(_t123(G, base).inverse(), sn, _step(G, n))


def _middle_column_recursion(G, n, c, p):
    j, r = p["j"], p["r"]
    lower = r[:j - 1] + (0,) + r[j:]
    lhs = _t123(G, r).inverse()
    return lhs, zoo.auto_bracket_repeat(_t123(G, lower).inverse(), r[j - 1], _step(G, j))


def _third_column_recursion(G, n, c, p):
    r = p["r"]
    lower = r[:2] + (0,) + r[3:]
    return _t123(G, r).inverse(), zoo.auto_bracket_repeat(_t123(G, lower).inverse(), r[2], zoo.pi(G, 2, 3).inverse())


def _second_column_recursion(G, n, c, p):
    r = p["r"]
    lower = r[:1] + (0,) + r[2:]
    return _t123(G, r).inverse(), zoo.auto_bracket_repeat(_t123(G, lower).inverse(), r[1], zoo.pi(G, 3, 2).inverse())


def tau_chain(G, r) -> Endomorphism:
    """[tau_123(r_1,0..0)^-1, r_n (pi_2n pi_3n)^-1, ..., r_4 (pi_24 pi_34)^-1, r_3 pi_23^-1, r_2 pi_32^-1]."""
    n = G.n
    acc = _t123(G, (r[0],) + (0,) * (n - 1)).inverse()
    for j in range(n, 3, -1):
        acc = zoo.auto_bracket_repeat(acc, r[j - 1], _step(G, j))
    acc = zoo.auto_bracket_repeat(acc, r[2], zoo.pi(G, 2, 3).inverse())
    return zoo.auto_bracket_repeat(acc, r[1], zoo.pi(G, 3, 2).inverse())


def _tau_chain_identity(G, n, c, p):
    r = p["r"]
    return _t123(G, r).inverse(), tau_chain(G, r)


def _tau_seq_split(G, n, c, p):
    k = p["seq"]
    rhs = zoo.auto_bracket(zoo.pi(G, k[0], k[1]).inverse(), zoo.tau_seq(G, 1, (k[0],) + k[2:]).inverse())
    return zoo.tau_seq(G, 1, k), rhs


def _tau_seq_swap(G, n, c, p):
    k = p["seq"]
    rhs = zoo.auto_bracket(zoo.tau_seq(G, 1, (k[1], k[0]) + k[3:]).inverse(), zoo.pi(G, k[1], k[0]).inverse())
    return zoo.tau_seq(G, 1, k), rhs


def _seqs(n, c, first_equals_third: bool):
    out = []
    for seq in itertools.product(range(2, n + 1), repeat=c):
        if seq[0] != seq[1] and (seq[0] == seq[2]) == first_equals_third:
            out.append({"seq": seq})
    return out


def _middle_column_params(n, c):
    out = []
    for j in range(4, n):
        for r in _tuples(n, c - 2, lower={1: 1}):
            if all(r[k] == 0 for k in range(1, j - 1)):
                out.append({"j": j, "r": r})
    return out


_COSET_READINGS = lambda builder: {  # noqa: E731
    "printed": builder(True, False),
    "star-by-beta": builder(False, False),
    "inverted-lhs": builder(True, True),
}

_EQUATIONS: Dict[str, _Eq] = {
    "3.4": _Eq("3.4", "coset", 3, lambda n, c: [{"s": s} for s in _tuples(n, c - 3)], {
        "printed": _bq_from_tau_product(True, False),
        "tau-not-inverted": _bq_from_tau_product(False, False),
        "tau-indices-swapped": _bq_from_tau_product(True, True),
    }),
    "3.5": _Eq("3.5", "coset", 3, lambda n, c: [{"r": r} for r in _tuples(n, c - 2, fixed={2: 0})],
               _COSET_READINGS(_delta_without_second)),
    "3.6": _Eq("3.6", "coset", 3, lambda n, c: [{"r": r} for r in _tuples(n, c - 2, fixed={2: 1})],
               _COSET_READINGS(_delta_second_one)),
    "3.7": _Eq("3.7", "coset", 3, lambda n, c: [{"r": r} for r in _tuples(n, c - 2, lower={2: 2})],
               _COSET_READINGS(_delta_general)),
    "3.8": _Eq("3.8", "exact", 4, lambda n, c: [{"s1": c - 3}] if c >= 3 else [], {"printed": _first_column_tau}),
    "3.9": _Eq("3.9", "exact", 4, lambda n, c: [{"s1": s1, "sn": c - 3 - s1} for s1 in range(0, c - 2)],
               {"printed": _last_column_recursion}),
    "3.10": _Eq("3.10", "exact", 5, _middle_column_params, {"printed": _middle_column_recursion}),
    "3.11": _Eq("3.11", "exact", 4, lambda n, c: [{"r": r} for r in _tuples(n, c - 2, fixed={2: 0}, lower={1: 1})],
                {"printed": _third_column_recursion}),
    "3.12": _Eq("3.12", "exact", 4, lambda n, c: [{"r": r} for r in _tuples(n, c - 2, lower={1: 1})],
                {"printed": _second_column_recursion}),
    "3.13": _Eq("3.13", "exact", 4, lambda n, c: [{"r": r} for r in _tuples(n, c - 2, lower={1: 1})],
                {"printed": _tau_chain_identity}),
    "L5a": _Eq("L5a", "exact", 4, lambda n, c: _seqs(n, c, False) if c >= 3 else [], {"printed": _tau_seq_split}),
    "L5b": _Eq("L5b", "exact", 4, lambda n, c: _seqs(n, c, True) if c >= 3 else [], {"printed": _tau_seq_swap}),
}

EQUATION_IDS = tuple(_EQUATIONS)


def _jsonable(p: dict) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in p.items()}


def _check_pair(lhs: Endomorphism, rhs: Endomorphism, level: str, c: int):
    """Returns (ok, discrepancy) with discrepancy = lhs^-1 rhs."""
    if level == "exact":
        if lhs == rhs:
            return True, None
        return False, lhs.inverse() * rhs
    disc = lhs * rhs.inverse()
    if not disc.is_ia():
        return False, disc
    return disc.ia_depth() >= c + 1, disc


def _run_reading(eq: _Eq, reading: str, n: int, c: int, params_list) -> Tuple[bool, Optional[dict], int]:
    G = FreeMetabelian(n)
    build = eq.readings[reading]
    failures = 0
    first = None
    for p in params_list:
        lhs, rhs = build(G, n, c, p)
        ok, disc = _check_pair(lhs, rhs, eq.level, c)
        if not ok:
            failures += 1
            if first is None:
                first = {"params": _jsonable(p), **_auto_witness(disc)}
                if eq.level == "exact":
                    first["coset_level_holds"] = disc.is_ia() and disc.ia_depth() >= c + 1
    if first is not None:
        first["failing_tuples"] = failures
    return failures == 0, first, len(params_list)


def _equation_params(eq_id: str, n: int, c: int, params: Optional[dict]):
    eq = _EQUATIONS[eq_id]
    if params is None:
        return eq.params(n, c)
    p = {k: (tuple(v) if isinstance(v, list) else v) for k, v in params.items()}
    allowed = [q for q in eq.params(n, c)]
    if p not in allowed:
        raise ValueError(f"parameters {params} are not admissible for {eq_id} at n={n}, c={c}")
    return [p]


def verify_equation_readings(eq_id: str, n: int, c: int, params: Optional[dict] = None) -> List[VerdictReport]:
    """One report per declared reading (the printed one first)."""
    if eq_id not in _EQUATIONS:
        raise ValueError(f"unknown equation id {eq_id!r}; expected one of {EQUATION_IDS}")
    eq = _EQUATIONS[eq_id]
    plist = _equation_params(eq_id, n, c, params) if n >= eq.min_n else []
    out = []
    for reading in eq.readings:
        start = time.perf_counter()
        base = {"equation": eq_id, "n": n, "c": c, "level": eq.level, "reading": reading}
        if n < eq.min_n or not plist:
            why = f"needs n >= {eq.min_n}" if n < eq.min_n else "no admissible parameters"
            rep = VerdictReport("equation-reading", {**base, "tuples": 0}, "skipped", variant=reading,
                                details={"reason": why})
        else:
            ok, wit, count = _run_reading(eq, reading, n, c, plist)
            rep = VerdictReport("equation-reading", {**base, "tuples": count}, "pass" if ok else "fail",
                                witness=wit, variant=reading)
        rep.elapsed = time.perf_counter() - start
        out.append(rep)
    return out


def verify_equation(eq_id: str, n: int, c: int, params: Optional[dict] = None) -> VerdictReport:
    """Verdict on a displayed equation under the typo protocol.

    Passes when the printed reading holds.  If it fails but a declared
    alternative reading holds, the verdict is still a pass, with ``variant``
    naming the reading and ``witness`` recording the printed counterexample.
    """
    start = time.perf_counter()
    readings = verify_equation_readings(eq_id, n, c, params)
    printed = readings[0]
    params_out = {k: v for k, v in printed.params.items() if k != "reading"}
    if printed.status != "fail":
        rep = VerdictReport("equation", params_out, printed.status, details=printed.details)
    else:
        holding = [r.params["reading"] for r in readings[1:] if r.passed]
        if holding:
            rep = VerdictReport("equation", params_out, "pass", variant=holding[0],
                                witness={"printed": printed.witness, "holding_readings": holding})
        else:
            rep = VerdictReport("equation", params_out, "fail", witness={"printed": printed.witness})
    rep.elapsed = time.perf_counter() - start
    rep.details["readings"] = readings
    return rep


@_timed
def check_delta_definition(n: int, c: int) -> VerdictReport:
    """Which product formula reproduces the displayed delta images modulo gamma_{c+1}."""
    G = FreeMetabelian(n)
    params = {"n": n, "c": c}
    if n < 3 or c < 2:
        return VerdictReport("delta-definition", params, "skipped", details={"reason": "needs n >= 3, c >= 2"})
    tuples = _tuples(n, c - 2)
    matching = []
    first_fail = {}
    for reading in zoo.DELTA_READINGS:
        ok = True
        for r in tuples:
            shown = zoo.delta(G, r)
            prod = zoo.delta_product(G, r, reading)
            depths = [(a.inverse() * b).gamma_depth() for a, b in zip(shown.images, prod.images)]
            if any(d < c + 1 for d in depths):
                ok = False
                first_fail[reading] = {"r": list(r), "image_depths": [_depth_json(d) for d in depths]}
                break
        if ok:
            matching.append(reading)
    params["tuples"] = len(tuples)
    if matching:
        return VerdictReport("delta-definition", params, "pass", variant=matching[0],
                             witness={"matching": matching, "mismatch": first_fail} if first_fail else None)
    return VerdictReport("delta-definition", params, "fail", witness={"mismatch": first_fail})


# -- ranks and span closures --------------------------------------------------

def expected_ranks(n: int, c: int) -> dict:
    gr = (c - 1) * comb(n + c - 2, n - 2)
    out = {"gr": gr, "total": n * gr}
    if c >= 3:
        out["PQ"] = n * gr - comb(n + c - 2, n - 1)
        out["R"] = comb(n + c - 2, n - 1)
    else:
        out["astar"] = n * comb(n, 2)
    return out


def _p_seeds(n: int, c: int) -> List[GrTuple]:
    G = FreeMetabelian(n)
    seeds = []
    for i in range(1, n + 1):
        others = [k for k in range(1, n + 1) if k != i]
        for seq in itertools.product(others, repeat=c):
            if seq[0] != seq[1]:
                seeds.append(zoo.tau_seq(G, i, seq).chi(c))
    return seeds


def _q_seeds(n: int, c: int) -> List[GrTuple]:
    G = FreeMetabelian(n)
    gens = G.gens()
    out = []
    if c - 1 == 1:
        us = list(gens)
    else:
        us = [left_normed(gens[i - 1] for i in b) for b in basis(n, c - 1)]
    for u in us:
        out.append(zoo.inner(G, u).chi(c))
    return out


def _r_seed(n: int, c: int) -> GrTuple:
    G = FreeMetabelian(n)
    x1 = G.gen(1)
    slots = [coordinates(zoo.bracket_repeat(G.gen(j), c - 1, x1), c) for j in range(1, n + 1)]
    return GrTuple(slots)


def _astar3_seeds(n: int) -> List[GrTuple]:
    G = FreeMetabelian(n)
    seeds = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                seeds.append(zoo.pi(G, i, j).chi(2))
            for k in range(j + 1, n + 1):
                if i not in (j, k):
                    seeds.append(zoo.tau_seq(G, i, (j, k)).chi(2))
    return seeds


SPAN_LIMIT = (4, 4)


@_timed
def rank_report(n: int, c: int, closure: Optional[bool] = None) -> VerdictReport:
    """Basis size against the rank formula, plus span closures at desk scale."""
    exp = expected_ranks(n, c)
    got = {"gr": len(basis(n, c))}
    got["total"] = n * got["gr"]
    params = {"n": n, "c": c}
    if closure is None:
        closure = n <= SPAN_LIMIT[0] and c <= SPAN_LIMIT[1]
    gens = gl_generators(n)
    if closure:
        if c >= 3:
            got["PQ"] = span_dim(_p_seeds(n, c) + _q_seeds(n, c), gens)
            got["R"] = span_dim([_r_seed(n, c)], gens)
        else:
            got["astar"] = span_dim(_astar3_seeds(n), gens)
    params["closure"] = closure
    mismatched = {k: {"expected": exp[k], "computed": v} for k, v in got.items() if exp.get(k) != v}
    details = {"expected": exp, "computed": got}
    if mismatched:
        return VerdictReport("rank-report", params, "fail", witness={"mismatch": mismatched}, details=details)
    return VerdictReport("rank-report", params, "pass", witness=None, details=details)


# -- witnesses in the lower central series of IA ------------------------------

@dataclass(frozen=True)
class Witness:
    """An automorphism with a formal lower bound on its commutator weight in IA."""

    value: Endomorphism
    weight: int
    text: str

    def inv(self) -> "Witness":
        return Witness(self.value.inverse(), self.weight, f"{self.text}^-1")

    def bracket(self, other: "Witness") -> "Witness":
        return Witness(zoo.auto_bracket(self.value, other.value), self.weight + other.weight,
                       f"[{self.text}, {other.text}]")

    def conj(self, by: Endomorphism, label: str) -> "Witness":
        # IA is normal, so conjugation keeps every term of its lower central series.
        return Witness(_conj(self.value, by), self.weight, f"({self.text})^{label}")

    def bracket_repeat(self, m: int, other: "Witness") -> "Witness":
        out = self
        for _ in range(m):
            out = out.bracket(other)
        return out


def _atom(phi: Endomorphism, text: str) -> Witness:
    if not phi.is_ia():
        raise ValueError(f"{text} is not IA")
    return Witness(phi, 1, text)


def _pi_w(G, i, j) -> Witness:
    return _atom(zoo.pi(G, i, j), f"pi{i}{j}")


def tau_seq_witness(G: FreeMetabelian, seq: Tuple[int, ...]) -> Witness:
    """tau_{1,seq} as an iterated commutator, entries of seq in [n] minus {1}."""
    if len(seq) == 2:
        return _atom(zoo.tau_seq(G, 1, seq), f"tau1{seq}")
    k1, k2 = seq[0], seq[1]
    if k1 != seq[2]:
        return _pi_w(G, k1, k2).inv().bracket(tau_seq_witness(G, (k1,) + seq[2:]).inv())
    return tau_seq_witness(G, (k2, k1) + seq[3:]).inv().bracket(_pi_w(G, k2, k1).inv())


def psi1_witness(G: FreeMetabelian, s1: int) -> Witness:
    n = G.n
    step = _atom(_step(G, n), f"(pi2{n}pi3{n})^-1")
    return _atom(zoo.tau_seq(G, 1, (2, 3)), "tau1(2,3)").inv().bracket_repeat(s1, step)


def tau_P_witness(G: FreeMetabelian, r: Tuple[int, ...]) -> Witness:
    """tau_123(r) as an element of gamma_{sum r + 1}(IA)."""
    n = G.n
    if r[0] == 0:
        seq = (2, 3) + tuple(itertools.chain.from_iterable([k + 1] * m for k, m in enumerate(r)))
        return tau_seq_witness(G, seq)
    s1 = r[0] - 1
    sigma = zoo.sigma(G, 1, n)
    head = _pi_w(G, 1, n).bracket(psi1_witness(G, s1).inv().conj(sigma, f"sigma1{n}"))
    acc = head.inv()
    for j in range(n, 3, -1):
        acc = acc.bracket_repeat(r[j - 1], _atom(_step(G, j), f"(pi2{j}pi3{j})^-1"))
    acc = acc.bracket_repeat(r[2], _pi_w(G, 2, 3).inv())
    acc = acc.bracket_repeat(r[1], _pi_w(G, 3, 2).inv())
    return acc.inv()


def inner_witness(G: FreeMetabelian, seq: Sequence[int]) -> Witness:
    """xi_v for v = [x_k1, ..., x_km] as [t_k1, ..., t_km]^-1 with t_k conjugation by x_k."""
    atoms = [_atom(zoo.inner(G, G.gen(k).inverse()), f"t{k}") for k in seq]
    acc = atoms[0]
    for a in atoms[1:]:
        acc = acc.bracket(a)
    return acc.inv()


@_timed
def generator_witness(n: int, c: int) -> VerdictReport:
    """Each generator coset at level c is hit by an element of gamma_{c-1}(IA)."""
    params = {"n": n, "c": c}
    if n < 4 or c < 3:
        return VerdictReport("generator-witness", params, "skipped", details={"reason": "needs n >= 4, c >= 3"})
    G = FreeMetabelian(n)
    jobs = []
    for r in _tuples(n, c - 2):
        jobs.append(({"tau": list(r)}, _t123(G, r), lambda r=r: tau_P_witness(G, r)))
    for b in basis(n, c - 1):
        v = left_normed(G.gen(i) for i in b)
        jobs.append(({"xi": list(b)}, zoo.inner(G, v), lambda b=b: inner_witness(G, b)))
    exact = 0
    for label, gen, make in jobs:
        w = make()
        if w.weight < c - 1:
            return VerdictReport("generator-witness", params, "fail",
                                 witness={"generator": label, "weight": w.weight, "construction": w.text})
        disc = gen.inverse() * w.value
        if disc.ia_depth() < c + 1:
            return VerdictReport("generator-witness", params, "fail",
                                 witness={"generator": label, "construction": w.text, **_auto_witness(disc)})
        exact += disc.is_identity()
    params["generators"] = len(jobs)
    return VerdictReport("generator-witness", params, "pass", details={"exact_matches": exact})


# -- chi: kernel and equivariance ----------------------------------------------

def _sample_pool(G: FreeMetabelian, c: int) -> List[Endomorphism]:
    """Automorphisms of depth c or c + 1 from the zoo."""
    n = G.n
    pool = []
    for depth in (c, c + 1):
        for i in range(1, n + 1):
            others = [k for k in range(1, n + 1) if k != i]
            for seq in itertools.product(others, repeat=depth):
                if seq[0] != seq[1] and len(pool) < 10_000:
                    pool.append(("tau_seq", depth, (i, seq)))
        if n >= 3:
            for r in _tuples(n, depth - 2):
                pool.append(("tau_P", depth, r))
                pool.append(("B_P", depth, r))
        if depth >= 3:
            for s in _tuples(n, depth - 3):
                pool.append(("B_Q", depth, s))
        for b in (basis(n, depth - 1) if depth - 1 >= 2 else [(k,) for k in range(1, n + 1)]):
            pool.append(("inner", depth, b))
    return pool


def _build(G: FreeMetabelian, item) -> Endomorphism:
    kind, _, arg = item
    if kind == "tau_seq":
        return zoo.tau_seq(G, arg[0], arg[1])
    if kind == "tau_P":
        return zoo.tau_P(G, 1, 2, 3, arg)
    if kind == "B_P":
        return zoo.B_P(G, 1, 2, 3, arg)
    if kind == "B_Q":
        return zoo.B_Q(G, 1, 2, arg)
    v = left_normed(G.gen(i) for i in arg) if len(arg) > 1 else G.gen(arg[0])
    return zoo.inner(G, v)


def _random_gl(n: int, rng: random.Random, length: int = 3):
    gens = gl_generators(n)
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(length):
        g = rng.choice(gens)
        m = [[sum(m[i][k] * g[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return tuple(tuple(r) for r in m)


@_timed
def chi_kernel_and_equivariance(n: int, c: int, samples: int = 20, seed: int = 0) -> VerdictReport:
    params = {"n": n, "c": c, "samples": samples, "seed": seed}
    G = FreeMetabelian(n)
    rng = random.Random(f"chi:{n}:{c}:{seed}")
    pool = _sample_pool(G, c)
    pool = [p for p in pool if n >= 3 or p[0] in ("tau_seq", "inner")]
    deep = [p for p in pool if p[1] == c + 1]
    shallow = [p for p in pool if p[1] == c]
    seen_kernel = seen_nonkernel = 0
    for s in range(samples):
        # Cycle through products at depth c, products of deeper factors, and
        # commutators [pi_ij, f] that land in the kernel without being built deep.
        kind = s % 3 if deep else 0
        pool_k = shallow if kind != 1 else deep
        items = [rng.choice(pool_k) for _ in range(rng.randint(1, 3 if kind == 0 else 2))]
        phi = Endomorphism.identity(n)
        for it in items:
            f = _build(G, it)
            phi = phi * (f if rng.random() < 0.5 else f.inverse())
        if kind == 2:
            i, j = rng.sample(range(1, n + 1), 2)
            phi = zoo.auto_bracket(zoo.pi(G, i, j), phi)
            items = [("pi", 2, (i, j))] + items
        depth = phi.ia_depth()
        label = [f"{it[0]}{it[2]}" for it in items]
        chi = phi.chi(c)
        in_kernel = chi.is_zero()
        if in_kernel != (depth >= c + 1):
            return VerdictReport("chi-kernel-equivariance", params, "fail", witness={
                "sample": s, "factors": label, "ia_depth": _depth_json(depth), "chi": chi.to_json()})
        seen_kernel += in_kernel
        seen_nonkernel += not in_kernel
        g = _random_gl(n, rng)
        lhs = star_act(g, Coset(phi, c)).chi()
        rhs = bullet(g, chi)
        if lhs != rhs:
            return VerdictReport("chi-kernel-equivariance", params, "fail", witness={
                "sample": s, "factors": label, "g": [list(r) for r in g],
                "star_chi": lhs.to_json(), "bullet_chi": rhs.to_json()})
    return VerdictReport("chi-kernel-equivariance", params, "pass",
                         details={"kernel_samples": seen_kernel, "nonkernel_samples": seen_nonkernel})


# -- suite ---------------------------------------------------------------------

def run_suite(n: int, c: int, seed: int = 0, samples: int = 50, include_readings: bool = True) -> List[VerdictReport]:
    """All checks at rank n and weight c, sorted by check name (stable)."""
    out: List[VerdictReport] = []
    for name in IDENTITY_NAMES:
        out.append(check_group_identity(name, n, samples, seed))
    for eq_id in EQUATION_IDS:
        rep = verify_equation(eq_id, n, c)
        out.append(rep)
        if include_readings and len(rep.details["readings"]) > 1:
            out.extend(rep.details["readings"])
    out.append(check_delta_definition(n, c))
    out.append(rank_report(n, c))
    out.append(generator_witness(n, c))
    if c >= 2:
        out.append(chi_kernel_and_equivariance(n, c, min(samples, 20), seed))
    out.sort(key=lambda r: r.check)
    return out


def suite_exit_code(reports: Sequence[VerdictReport]) -> int:
    return 1 if any(r.status == "fail" and not r.is_variant for r in reports) else 0
