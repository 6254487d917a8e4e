import random
from fractions import Fraction

import pytest

from logdmod.polyring import CommPoly, parse_poly
from logdmod.weyl import (OpVector, WeylContext, WeylOp, commutator, parse_op,
                          smc_predicates, weyl_apply, weyl_mul)

CTX2 = WeylContext(("x", "y"))
CTX3 = WeylContext(("x", "y", "z"))


def rand_op(rng, ctx, max_deg=2, max_terms=3):
    terms = {}
    np = len(ctx.params)
    for _ in range(rng.randint(0, max_terms)):
        a = tuple(rng.randint(0, max_deg) for _ in range(ctx.ncoords))
        b = tuple(rng.randint(0, max_deg) for _ in range(ctx.ncoords))
        g = tuple(rng.randint(0, 1) for _ in range(np))
        terms[(a, b, g)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return WeylOp(ctx, terms)


def rand_poly(rng, vars, max_deg=3, max_terms=3):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        m = tuple(rng.randint(0, max_deg) for _ in vars)
        terms[m] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return CommPoly(vars, terms)


def test_commutation_relation():
    dx = WeylOp.partial(CTX2, "x")
    x = WeylOp.coord(CTX2, "x")
    assert dx * x == x * dx + 1
    assert dx * (x * x) == x * x * dx + 2 * x


def test_two_step_product():
    x = WeylOp.coord(CTX2, "x")
    dx = WeylOp.partial(CTX2, "x")
    xdx = x * dx
    assert xdx * xdx == x * x * dx * dx + x * dx


def test_apply_basics():
    dx = WeylOp.partial(CTX2, "x")
    x2 = parse_poly("x^2", CTX2.coords)
    assert weyl_apply(dx, x2) == parse_poly("2*x", CTX2.coords)
    op = parse_op("x*dx + 7", CTX2)
    one = CommPoly.const(CTX2.coords, 1)
    assert weyl_apply(op, one) == CommPoly.const(CTX2.coords, 7)


def test_apply_weighted_degree():
    f = parse_poly("x*(x^2-y^3)*(x^2-z*y^3)", CTX3.coords)
    op = parse_op("3/2*x*dx + y*dy", CTX3)
    assert weyl_apply(op, f) == f * Fraction(15, 2)


def test_apply_rejects_parameters():
    ctx = WeylContext(("x",), params=("s",))
    s = WeylOp.param(ctx, "s")
    with pytest.raises(ValueError):
        weyl_apply(s, CommPoly.const(ctx.coords, 1))


def test_commutator_basics():
    dx = WeylOp.partial(CTX2, "x")
    x = WeylOp.coord(CTX2, "x")
    y = WeylOp.coord(CTX2, "y")
    dy = WeylOp.partial(CTX2, "y")
    assert commutator(dx, x) == WeylOp.const(CTX2, 1)
    assert commutator(x * dx, y * dy).is_zero()


def test_commutator_quintic_fields():
    d1 = parse_op("3/2*x*dx + y*dy", CTX3)
    d2 = parse_op("(y^3*z - x^2)*dz", CTX3)
    assert commutator(d1, d2) == d2.scale(3)


def test_smc_predicates():
    p = parse_op("x*dx + 1", CTX3)
    assert smc_predicates(p) == (False, False)
    q = parse_op("(y^3*z - x^2)*dz", CTX3)
    assert smc_predicates(q) == (True, True)
    r = parse_op("16/25*dz + x*dz", CTX3)
    assert smc_predicates(r) == (True, False)


def test_context_mismatch():
    a = WeylOp.coord(CTX2, "x")
    b = WeylOp.coord(CTX3, "x")
    with pytest.raises(ValueError):
        weyl_mul(a, b)


def test_normal_ordering_consistency():
    rng = random.Random(13)
    one = CommPoly.const(CTX2.coords, 1)
    for _ in range(300):
        p = rand_op(rng, CTX2)
        assert weyl_apply(p, one) == p.order_zero_poly()


def test_associativity_random():
    rng = random.Random(17)
    for _ in range(200):
        p, q, r = (rand_op(rng, CTX2, 2, 2) for _ in range(3))
        assert weyl_mul(weyl_mul(p, q), r) == weyl_mul(p, weyl_mul(q, r))
        assert weyl_mul(p + q, r) == weyl_mul(p, r) + weyl_mul(q, r)


def test_module_action_random():
    rng = random.Random(19)
    for _ in range(200):
        p, q = (rand_op(rng, CTX2, 2, 2) for _ in range(2))
        g = rand_poly(rng, CTX2.coords)
        assert weyl_apply(weyl_mul(p, q), g) == weyl_apply(p, weyl_apply(q, g))


def test_jacobi_random():
    rng = random.Random(23)
    for _ in range(150):
        p, q, r = (rand_op(rng, CTX2, 1, 2) for _ in range(3))
        assert commutator(p, q) == -commutator(q, p)
        jac = commutator(p, commutator(q, r)) + commutator(q, commutator(r, p)) \
            + commutator(r, commutator(p, q))
        assert jac.is_zero()


def test_parameters_commute():
    ctx = WeylContext(("x",), params=("s",))
    s = WeylOp.param(ctx, "s")
    x = WeylOp.coord(ctx, "x")
    dx = WeylOp.partial(ctx, "x")
    assert s * x == x * s
    assert s * dx == dx * s


def test_operator_print_parse_roundtrip():
    rng = random.Random(29)
    ctx = WeylContext(("x", "y"), params=("s",))
    for _ in range(200):
        p = rand_op(rng, ctx)
        assert parse_op(str(p), ctx) == p


def test_op_vector():
    dx = WeylOp.partial(CTX2, "x")
    dy = WeylOp.partial(CTX2, "y")
    v = OpVector([dx, dy])
    assert len(v) == 2 and v[0] == dx
    with pytest.raises(ValueError):
        OpVector([])
