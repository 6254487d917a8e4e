"""Textbook Buchberger oracle for the commutative case, used only by tests.

No pair-selection criteria, no integer normalization tricks: plain rational
arithmetic with degrevlex, straight out of the definition.  Deliberately
independent of the package's engine so that agreement is meaningful.
"""

from fractions import Fraction
from itertools import combinations

from logdmod.polyring import CommPoly


def _key(m):
    return (sum(m),) + tuple(-e for e in reversed(m))


def _lt(p: CommPoly):
    m = max(p.terms, key=_key)
    return m, p.terms[m]


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _reduce(p: CommPoly, basis):
    changed = True
    while changed and not p.is_zero():
        changed = False
        for g in basis:
            if g.is_zero():
                continue
            gm, gc = _lt(g)
            for m in sorted(p.terms, key=_key, reverse=True):
                if _divides(gm, m):
                    q = tuple(a - b for a, b in zip(m, gm))
                    coeff = p.terms[m] / gc
                    p = p - CommPoly(p.vars, {q: coeff}) * g
                    changed = True
                    break
            if changed:
                break
    return p


def naive_groebner(gens):
    basis = [g for g in gens if not g.is_zero()]
    if not basis:
        return []
    vars = basis[0].vars
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop(0)
        mi, ci = _lt(basis[i])
        mj, cj = _lt(basis[j])
        lcm = tuple(max(a, b) for a, b in zip(mi, mj))
        s = CommPoly(vars, {tuple(a - b for a, b in zip(lcm, mi)): Fraction(1) / ci}) * basis[i] \
            - CommPoly(vars, {tuple(a - b for a, b in zip(lcm, mj)): Fraction(1) / cj}) * basis[j]
        r = _reduce(s, basis)
        if not r.is_zero():
            basis.append(r)
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return basis


def naive_member(p: CommPoly, gens) -> bool:
    return _reduce(p, naive_groebner(gens)).is_zero()
