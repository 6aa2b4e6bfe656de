from fractions import Fraction

import pytest

from lgmut.laurent import (
    LaurentPoly,
    LocalizedPoly,
    NonLaurent,
    ParseError,
    div_exact,
    evaluate,
    format_poly,
    localized_mutate,
    log_derivative,
    monomial_substitute,
    parse_poly,
    try_div_exact,
    vanishing_order,
)
from lgmut.lattice import UnimodularMap


def P(text, n=2):
    return parse_poly(text, n)


def random_poly(rng, n, terms=4, lo=-2, hi=2, coef=3):
    out = {}
    for _ in range(rng.randint(1, terms)):
        e = tuple(rng.randint(lo, hi) for _ in range(n))
        c = rng.randint(-coef, coef) or 1
        out[e] = out.get(e, 0) + c
    return LaurentPoly(n, out)


def random_unimodular(rng, n, steps=6):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        t = rng.choice([-2, -1, 1, 2])
        m[i] = [a + t * b for a, b in zip(m[i], m[j])]
    if rng.random() < 0.5:
        m[0] = [-a for a in m[0]]
    return UnimodularMap(tuple(map(tuple, m)))


# -- ring operations -------------------------------------------------------------


def test_difference_of_squares():
    assert P("(x + y) * (x - y)") == P("x^2 - y^2")


def test_zeroth_power_is_one():
    assert P("1 + x + y") ** 0 == 1


def test_binomial_expansion_coefficients():
    w = P("(1+x)^2*(1+y)^2*x^-1*y^-1")
    assert len(w) == 9
    assert sorted(w.terms.values()) == [1, 1, 1, 1, 2, 2, 2, 2, 4]


def test_zero_polynomial_has_no_terms():
    z = P("x - x")
    assert z.is_zero() and z.terms == {}


def test_mismatched_variable_counts():
    with pytest.raises(ValueError):
        P("x") + P("x", 3)


def test_zero_coefficients_are_dropped():
    w = LaurentPoly(2, {(1, 0): 0, (0, 1): 2})
    assert w.terms == {(0, 1): 2}


def test_negative_power_of_monomial():
    assert P("x*y^-1") ** -2 == P("x^-2*y^2")
    with pytest.raises(ValueError):
        P("1 + x") ** -1


def test_ring_axioms_on_random_inputs(rng):
    for _ in range(100):
        n = rng.randint(1, 3)
        a, b, c = (random_poly(rng, n) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert all(v != 0 for v in (a * b).terms.values())


# -- exact division --------------------------------------------------------------------


def test_division_from_worked_example():
    assert try_div_exact(P("y + x"), P("1 + x*y^-1")) == P("y")


def test_division_fails_with_remainder():
    assert try_div_exact(P("1 + x + y"), P("1 + x")) is None


def test_division_in_three_variables():
    assert try_div_exact(P("x^-1 + z", 3), P("1 + x*z", 3)) == P("x^-1", 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        try_div_exact(P("x"), P("0"))


def test_div_exact_raises_when_not_divisible():
    with pytest.raises(ArithmeticError):
        div_exact(P("1 + x + y"), P("1 + x"))


def test_division_by_monomial_is_a_shift():
    assert try_div_exact(P("x^3 + x*y"), P("2*x^-1")) is None
    assert try_div_exact(P("2*x^3 + 2*x*y"), P("2*x^-1")) == P("x^4 + x^2*y")


def test_products_divide_back(rng):
    for _ in range(200):
        n = rng.randint(1, 3)
        p, q = random_poly(rng, n, 5), random_poly(rng, n, 5)
        if q.is_zero():
            continue
        assert try_div_exact(p * q, q) == p


# -- localized mutation ---------------------------------------------------------------


def test_localized_mutate_worked_example():
    w = P("x + y + x^-1*y^-1")
    assert localized_mutate(w, P("1 + x*y^-1"), (1, 1)) == P("y + (x+y)^2*x^-1*y^-3")


def test_zero_weight_is_identity(rng):
    for _ in range(20):
        w = random_poly(rng, 2)
        assert localized_mutate(w, P("1 + x*y^-1"), (0, 0)) == w


def test_prism_witness():
    w = P("x^-1 + y^-1 + z + x*y + z^-1", 3)
    out = localized_mutate(w, P("1 + x*z", 3), (-1, -1, 1))
    assert isinstance(out, NonLaurent)
    assert out.witness.numerator == P("x^-1 + y^-1 + z", 3)
    assert out.witness.factor == P("1 + x*z", 3)
    assert out.witness.power == 1


def test_factor_needs_constant_one():
    with pytest.raises(ValueError):
        localized_mutate(P("x"), P("2 + x"), (1, 0))
    with pytest.raises(ValueError):
        LocalizedPoly(P("x"), P("x + y"), 1)


def test_nonpositive_weights_expand_directly(rng):
    for _ in range(50):
        f = LaurentPoly(2, {(0, 0): 1, (rng.randint(-2, 2), rng.randint(1, 2)): 1})
        weight = (rng.randint(-2, 2), rng.randint(-2, 2))
        w = random_poly(rng, 2, 5)
        nonpos = LaurentPoly(2, {u: c for u, c in w.terms.items() if u[0] * weight[0] + u[1] * weight[1] <= 0})
        direct = LaurentPoly(2)
        for u, c in nonpos.terms.items():
            direct = direct + LaurentPoly.monomial(u, c) * f ** -(u[0] * weight[0] + u[1] * weight[1])
        assert localized_mutate(nonpos, f, weight) == direct


# -- substitution and evaluation -------------------------------------------------------------


def test_swap_fixes_symmetric_polynomial():
    assert monomial_substitute(P("x + y"), UnimodularMap(((0, 1), (1, 0)))) == P("x + y")


def test_shear_sends_x_to_xy():
    assert monomial_substitute(P("x"), UnimodularMap(((1, 1), (0, 1)))) == P("x*y")


def test_non_unimodular_matrix_rejected():
    with pytest.raises(ValueError):
        monomial_substitute(P("x"), [[2, 0], [0, 1]])


def test_substitution_is_a_group_action(rng):
    for _ in range(50):
        n = rng.randint(1, 3)
        w = random_poly(rng, n, 5)
        a, b = random_unimodular(rng, n), random_unimodular(rng, n)
        assert monomial_substitute(monomial_substitute(w, a), a.inverse()) == w
        assert monomial_substitute(w, UnimodularMap.identity(n)) == w
        # exponents move by a^T then b^T, i.e. by (b a)^T
        assert monomial_substitute(monomial_substitute(w, a), b) == monomial_substitute(w, a @ b)


@pytest.mark.parametrize("text,value", [
    ("(1+x+y)^3*x^-1*y^-1 - 6", 21),
    ("(1+x+y)^4*x^-1*y^-1 - 12", 69),
    ("(1+x+y)^6*x^-1*y^-2 - 60", 669),
])
def test_evaluate_del_pezzo_values(text, value):
    assert evaluate(P(text), (1, 1)) == value


def test_evaluate_negative_exponents_exactly():
    assert evaluate(P("x^-2 + 3*y^-1"), (Fraction(1, 2), Fraction(-3))) == 3


def test_evaluate_rejects_zero_coordinate():
    with pytest.raises(ValueError):
        evaluate(P("x"), (0, 1))


def test_evaluation_is_a_homomorphism(rng):
    for _ in range(100):
        n = rng.randint(1, 3)
        a, b = random_poly(rng, n), random_poly(rng, n)
        pt = tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 5)) for _ in range(n))
        assert evaluate(a * b, pt) == evaluate(a, pt) * evaluate(b, pt)
        assert evaluate(a + b, pt) == evaluate(a, pt) + evaluate(b, pt)


# -- derivatives and vanishing ------------------------------------------------------------


def test_log_derivatives():
    assert log_derivative(P("x + y"), 0) == P("x")
    assert log_derivative(P("x^-1*y^-1"), 0) == P("-x^-1*y^-1")
    with pytest.raises(IndexError):
        log_derivative(P("x"), 2)


def test_log_derivatives_of_cube_divisible():
    w = P("(1+x+y)^3*x^-1*y^-1")
    g = P("1 + x + y")
    for i in range(2):
        assert try_div_exact(log_derivative(w, i), g) is not None


@pytest.mark.parametrize("text,order", [
    ("(1+x+y)^3*x^-1*y^-1", 3),
    ("(1+x+y)^6*x^-1*y^-2", 6),
    ("x + y", 0),
])
def test_vanishing_order(text, order):
    assert vanishing_order(P(text), P("1 + x + y")) == (order, False)


def test_vanishing_order_of_zero_is_capped():
    m, capped = vanishing_order(P("0"), P("1 + x"))
    assert capped and m >= 1


def test_vanishing_order_needs_nonconstant_divisor():
    with pytest.raises(ValueError):
        vanishing_order(P("x"), P("3"))


# -- text and JSON ---------------------------------------------------------------------


def test_parse_grammar_examples():
    assert P("x + y + x^-1*y^-1") == LaurentPoly(2, {(1, 0): 1, (0, 1): 1, (-1, -1): 1})
    assert P("x1 + 2 x2^3 - x3^-1", 3) == LaurentPoly(3, {(1, 0, 0): 1, (0, 3, 0): 2, (0, 0, -1): -1})
    assert P("x**2/y") == P("x^2*y^-1")
    assert P("x1*x5", 5) == LaurentPoly.monomial((1, 0, 0, 0, 1))


@pytest.mark.parametrize("bad", ["x +", "x^", "w", "(x", "x/(1+y)", "x4"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        P(bad)


def test_format_round_trips(rng):
    for _ in range(50):
        n = rng.randint(1, 5)
        w = random_poly(rng, n, 5)
        assert parse_poly(format_poly(w), n) == w


def test_json_round_trip(rng):
    for _ in range(20):
        w = random_poly(rng, 3, 6, coef=10 ** 30)
        assert LaurentPoly.from_json(3, w.to_json()) == w
