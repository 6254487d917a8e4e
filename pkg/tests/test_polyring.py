import random
from fractions import Fraction

import pytest

from logdmod.polyring import (CommMatrix, CommPoly, ParseError, determinant,
                              determinant_bareiss, determinant_cofactor,
                              exact_divide, gradient, parse_poly)

XYZ = ("x", "y", "z")


def rand_poly(rng, vars, max_deg=3, max_terms=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        m = tuple(rng.randint(0, max_deg) for _ in vars)
        terms[m] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return CommPoly(vars, terms)


def test_parse_simple():
    p = parse_poly("x^2*y - 3/4*z", XYZ)
    assert p.coefficient((2, 1, 0)) == 1
    assert p.coefficient((0, 0, 1)) == Fraction(-3, 4)
    assert len(p.terms) == 2


def test_parse_example_product_expansion():
    p = parse_poly("x*(x^2-y^3)*(x^2-z*y^3)", XYZ)
    q = parse_poly("x^5 - x^3*y^3 - x^3*y^3*z + x*y^6*z", XYZ)
    assert p == q


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_poly("x + * y", ("x", "y"))
    assert err.value.position == 4


def test_parse_unknown_variable():
    with pytest.raises(ParseError, match="unknown variable"):
        parse_poly("x + w", ("x", "y"))


def test_parse_negative_exponent():
    with pytest.raises(ParseError, match="negative exponent"):
        parse_poly("x^-2", ("x",))


def test_parse_rejects_implicit_multiplication():
    with pytest.raises(ParseError):
        parse_poly("2 x", ("x",))


def test_print_parse_fixed_point():
    rng = random.Random(7)
    for _ in range(200):
        p = rand_poly(rng, XYZ)
        assert parse_poly(str(p), XYZ) == p


def test_gradient_basic():
    x = parse_poly("x", ("x",))
    assert gradient(x) == [CommPoly.const(("x",), 1)]
    c = CommPoly.const(XYZ, 5)
    assert gradient(c) == [CommPoly.zero(XYZ)] * 3


def test_gradient_example():
    f = parse_poly("x*(x^2-y^3)*(x^2-z*y^3)", XYZ)
    fx = parse_poly("5*x^4 - 3*x^2*y^3 - 3*x^2*y^3*z + y^6*z", XYZ)
    fy = parse_poly("-3*x^3*y^2 - 3*x^3*y^2*z + 6*x*y^5*z", XYZ)
    fz = parse_poly("-x^3*y^3 + x*y^6", XYZ)
    assert gradient(f) == [fx, fy, fz]


def test_ring_axioms_random():
    rng = random.Random(21)
    for _ in range(300):
        p, q, r = (rand_poly(rng, ("x", "y")) for _ in range(3))
        assert (p + q) * r == p * r + q * r
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)


def test_mixed_partials_commute():
    rng = random.Random(3)
    for _ in range(200):
        f = rand_poly(rng, XYZ)
        assert f.derivative("x").derivative("y") == f.derivative("y").derivative("x")


def test_determinant_trivial():
    x = parse_poly("x", ("x", "y"))
    y = parse_poly("y", ("x", "y"))
    zero = CommPoly.zero(("x", "y"))
    one = CommPoly.const(("x", "y"), 1)
    assert determinant(CommMatrix([[x, zero], [zero, y]])) == x * y
    assert determinant(CommMatrix([[zero, one], [one, zero]])) == CommPoly.const(("x", "y"), -1)


def test_determinant_example_matrix():
    # coefficient matrix of the three basis fields of the quintic example
    f = parse_poly("x*(x^2-y^3)*(x^2-z*y^3)", XYZ)
    rows = [
        ["3/2*x", "y", "0"],
        ["0", "0", "y^3*z - x^2"],
        ["-1/2*x*y^2", "-1/3*x^2", "y^2*z^2 - y^2*z"],
    ]
    m = CommMatrix([[parse_poly(e, XYZ) for e in row] for row in rows])
    assert determinant(m) == f * Fraction(-1, 2)
    q = exact_divide(f * Fraction(-1, 2), f)
    assert q == CommPoly.const(XYZ, Fraction(-1, 2))


def test_determinant_algorithms_agree():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = CommMatrix([[rand_poly(rng, ("x", "y"), 2, 2) for _ in range(n)]
                        for _ in range(n)])
        assert determinant_cofactor(m) == determinant_bareiss(m)


def test_determinant_non_square():
    x = parse_poly("x", ("x",))
    with pytest.raises(ValueError):
        determinant(CommMatrix([[x, x]]))


def test_exact_divide():
    x = parse_poly("x", ("x", "y"))
    y = parse_poly("y", ("x", "y"))
    assert exact_divide(x * y, x) == y
    assert exact_divide(x + 1, y) is None
    with pytest.raises(ZeroDivisionError):
        exact_divide(x, CommPoly.zero(("x", "y")))


def test_exact_divide_random_products():
    rng = random.Random(5)
    done = 0
    while done < 200:
        p = rand_poly(rng, ("x", "y"))
        q = rand_poly(rng, ("x", "y"))
        if q.is_zero():
            continue
        assert exact_divide(p * q, q) == p
        done += 1
