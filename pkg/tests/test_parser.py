import random

import pytest

from metabelian import zoo
from metabelian.laurent import LaurentPoly, omega
from metabelian.magnus import FreeMetabelian, commutator, left_normed
from metabelian.parser import (
    AVar,
    Bracket,
    Gen,
    ModPow,
    Num,
    ParseError,
    Power,
    Prod,
    SAdd,
    SMul,
    SPow,
    ast_to_text,
    derived_decomposition,
    evaluate_element,
    evaluate_scalar,
    format_element,
    format_endomorphism,
    format_scalar,
    parse_element,
    parse_element_ast,
    parse_endomorphism,
    parse_scalar,
)

N = 3
G = FreeMetabelian(N)


def test_spec_examples():
    x1, x2, x3 = G.gens()
    assert parse_element("x1*[x1,x2]", G) == zoo.pi(G, 1, 2).images[0]
    assert parse_element("[x1,x2]^((a3-1))", G) == commutator(x1, x2).module_pow(G.a(3) - 1)
    assert parse_element("[x2, 3 x1]", G) == left_normed([x2, x1, x1, x1])


def test_powers_brackets_and_identity():
    x1, x2, x3 = G.gens()
    assert parse_element("x1^-2*x3", G) == x1 ** -2 * x3
    assert parse_element("(x1*x2)^2", G) == (x1 * x2) ** 2
    assert parse_element("[x1*x2, x3^-1, x2]", G) == left_normed([x1 * x2, x3.inverse(), x2])
    assert parse_element("1", G).is_one()
    assert parse_element("[x1, 0 x2]", G) == x1


def test_scalar_parsing():
    a1, a2 = LaurentPoly.var(2, 1), LaurentPoly.var(2, 2)
    assert parse_scalar("(a1-1)^2*(a2-1)", 2) == omega((2, 1))
    assert parse_scalar("-a1^-1 + 3", 2) == 3 - a1 ** -1
    assert parse_scalar("2*a1*a2^-3", 2) == 2 * a1 * a2 ** -3


@pytest.mark.parametrize("text,col", [
    ("x1*", 4),
    ("x1 ** x2", 5),
    ("[x1,x2", 7),
    ("x1 $ x2", 4),
])
def test_syntax_errors_report_position(text, col):
    with pytest.raises(ParseError) as info:
        parse_element(text, G)
    assert info.value.line == 1
    assert info.value.col == col


def test_rank_and_module_exponent_errors():
    with pytest.raises(ParseError):
        parse_element("x4", G)
    with pytest.raises(ParseError):
        parse_element("x1^((a1-1))", G)


def test_endomorphism_files():
    text = "# pi_12 written out\nx1 -> x1*[x1,x2]\n\nx2 -> x2\nx3  # fixed\n"
    assert parse_endomorphism(text, G) == zoo.pi(G, 1, 2)
    with pytest.raises(ParseError) as info:
        parse_endomorphism("x1\nx3 -> x3\nx2", G)
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_endomorphism("x1\nx2", G)


def test_format_endomorphism_round_trip():
    phi = zoo.B_P(G, 1, 2, 3, (1, 0, 1))
    assert parse_endomorphism(format_endomorphism(phi), G) == phi


def test_derived_decomposition_rebuilds_element():
    w = left_normed([G.gen(3), G.gen(1), G.gen(2)]) * commutator(G.gen(2), G.gen(1)) ** 3
    parts = derived_decomposition(w)
    rebuilt = G.one()
    for (k, l), p in sorted(parts.items()):
        rebuilt = rebuilt * commutator(G.gen(k), G.gen(l)).module_pow(p)
    assert rebuilt == w


# -- random corpus ---------------------------------------------------------

def random_scalar(rng, depth=0):
    roll = rng.random()
    if depth > 2 or roll < 0.3:
        return Num(rng.randint(0, 4)) if rng.random() < 0.4 else AVar(rng.randint(1, N))
    if roll < 0.55:
        return SAdd(tuple((rng.choice((1, -1)), random_scalar(rng, depth + 1)) for _ in range(rng.randint(1, 3))))
    if roll < 0.8:
        return SMul(tuple(random_scalar(rng, depth + 1) for _ in range(rng.randint(2, 3))))
    if rng.random() < 0.5:
        return SPow(AVar(rng.randint(1, N)), rng.randint(-3, 3))
    return SPow(random_scalar(rng, depth + 1), rng.randint(0, 3))


def random_derived(rng, depth):
    items = [(1, random_element(rng, depth + 1)), (1, random_element(rng, depth + 1))]
    if rng.random() < 0.3:
        items.append((rng.randint(0, 2), random_element(rng, depth + 1)))
    return Bracket(tuple(items))


def random_element(rng, depth=0):
    roll = rng.random()
    if depth > 2 or roll < 0.35:
        return Gen(rng.randint(1, N))
    if roll < 0.55:
        return Prod(tuple(random_element(rng, depth + 1) for _ in range(rng.randint(2, 3))))
    if roll < 0.7:
        return Power(random_element(rng, depth + 1), rng.choice((-2, -1, 2, 3)))
    if roll < 0.85:
        return random_derived(rng, depth)
    return ModPow(random_derived(rng, depth), random_scalar(rng))


def test_random_corpus_round_trips():
    rng = random.Random(2024)
    for _ in range(1000):
        node = random_element(rng)
        text = ast_to_text(node)
        value = evaluate_element(node, G)
        assert parse_element_ast(text, N) == node or parse_element(text, G) == value
        assert parse_element(text, G) == value
        canonical = format_element(value)
        assert parse_element(canonical, G) == value


def test_random_scalars_round_trip():
    rng = random.Random(7)
    for _ in range(300):
        node = random_scalar(rng)
        value = evaluate_scalar(node, N)
        assert parse_scalar(ast_to_text(node), N) == value
        assert parse_scalar(format_scalar(value), N) == value
