"""Annihilator of the symbolic power f^s, the b-function, and Ann(1/f^k).

The construction runs in the extended Weyl algebra with one extra
coordinate pair (t, dt): the left ideal generated by t - f and the
operators d_i + f_i dt is graded-intersected with its weight-zero
subalgebra under the weight t:1, dt:-1, and each weight-zero element is
rewritten into a polynomial in s through the substitution s = -dt t,
i.e. t^m dt^m = theta (theta-1) ... (theta-m+1) with theta = t dt = -s-1.

The b-function is then the monic generator of (Ann(f^s) + (f)) meeting the
parameter ring, obtained by eliminating all coordinates and derivations
with a weight order.  Substituting s = -k for k at least as large as the
negated least integer root produces generators of Ann(1/f^k).

Every generator produced here is verified against the formal calculus
d_i . f^s = s f_i f^(s-1): applying an alleged annihilator to f^s and
clearing denominators must yield the zero polynomial identically in s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from ._engine import Budget, BudgetExceeded
from .groebner import eliminate_weight
from .polyring import CommPoly, gradient
from .weyl import EXTRA_NAME, WeylContext, WeylOp


@dataclass
class AnnFsIdeal:
    """Generators of the annihilator of f^s in the parameterized algebra."""

    generators: List[WeylOp]
    f: CommPoly

    @property
    def ctx(self) -> WeylContext:
        return self.generators[0].ctx


@dataclass
class BFunction:
    """The Bernstein polynomial b(s): monic, with its integer roots."""

    coeffs: Tuple[Fraction, ...]  # ascending, normalized monic
    integer_roots: Tuple[int, ...]
    min_integer_root: Optional[int]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, value: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def as_string(self, var: str = "s") -> str:
        """Factored over the integer roots where possible."""
        rem = list(self.coeffs)
        parts = []
        for r in self.integer_roots:
            while True:
                quot, ok = _uni_divide(rem, [Fraction(-r), Fraction(1)])
                if not ok:
                    break
                parts.append(f"({var} + {-r})" if r < 0 else
                             (f"({var} - {r})" if r > 0 else var))
                rem = quot
        tail = _uni_to_string(rem, var)
        if parts and tail == "1":
            return "*".join(parts)
        if parts:
            return "*".join(parts) + " * (" + tail + ")"
        return tail

    def to_json_dict(self) -> dict:
        return {
            "b": self.as_string(),
            "coefficients": [str(c) for c in self.coeffs],
            "integer_roots": list(self.integer_roots),
            "min_integer_root": self.min_integer_root,
        }


def _uni_divide(num: List[Fraction], den: List[Fraction]):
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(num) >= len(den):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        c = num[-1] / den[-1]
        shift = len(num) - len(den)
        q[shift] = c
        for i, dc in enumerate(den):
            num[shift + i] -= c * dc
        while num and num[-1] == 0:
            num.pop()
    return q, not num


def _uni_to_string(coeffs: List[Fraction], var: str) -> str:
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        return "0"
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        if e == 0:
            body = str(abs(c))
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# formal action on f^s
# ---------------------------------------------------------------------------


def apply_to_fs(op: WeylOp, f: CommPoly, s_value: Optional[int] = None
                ) -> Tuple[CommPoly, int]:
    """Formal application of op to f^s (or to f^s_value).

    Returns (numerator, drop) meaning  op . f^s = numerator * f^(s - drop)
    with numerator a polynomial in the coordinates and s.  With s_value
    given, s is specialized to that integer (for checking 1/f^k action).
    """
    ctx = op.ctx
    svars = f.vars + ("s",)
    sidx = len(f.vars)
    grads = gradient(f)
    f_s = f.extend_vars(svars)
    grads_s = [g.extend_vars(svars) for g in grads]
    s_poly = CommPoly.variable(svars, "s") if s_value is None \
        else CommPoly.const(svars, s_value)

    cache: Dict[Tuple[int, ...], Tuple[CommPoly, int]] = {}
    zero_b = (0,) * ctx.ncoords
    cache[zero_b] = (CommPoly.const(svars, 1), 0)

    def derive(b: Tuple[int, ...]) -> Tuple[CommPoly, int]:
        got = cache.get(b)
        if got is not None:
            return got
        i = next(j for j, e in enumerate(b) if e)
        nprev, dprev = derive(b[:i] + (b[i] - 1,) + b[i + 1:])
        # d_i (N f^(s-m)) = (d_i N) f^(s-m) + (s-m) N f_i f^(s-m-1)
        n2 = nprev.derivative(f.vars[i]) * f_s + (s_poly - dprev) * nprev * grads_s[i]
        val = (n2, dprev + 1)
        cache[b] = val
        return val

    total: Optional[CommPoly] = None
    maxdrop = 0
    pieces = []
    for (a, b, g), c in op.terms.items():
        nb, drop = derive(b)
        mono = CommPoly(f.vars, {a: Fraction(1)}).extend_vars(svars)
        spow = CommPoly.const(svars, 1)
        if any(g):
            if len(g) != 1 or op.ctx.params != ("s",):
                raise ValueError("apply_to_fs supports the single parameter s")
            spow = s_poly ** g[0]
        piece = mono * spow * nb * c
        pieces.append((piece, drop))
        maxdrop = max(maxdrop, drop)
    for piece, drop in pieces:
        lifted = piece * (f_s ** (maxdrop - drop))
        total = lifted if total is None else total + lifted
    if total is None:
        total = CommPoly.zero(svars)
    return total, maxdrop


def annihilates_fs(op: WeylOp, f: CommPoly) -> bool:
    num, _ = apply_to_fs(op, f)
    return num.is_zero()


def annihilates_inverse_power(op: WeylOp, f: CommPoly, k: int) -> bool:
    """Check op . (1/f^k) = 0 by the same formal calculus at s = -k."""
    num, _ = apply_to_fs(op, f, s_value=-k)
    return num.is_zero()


# ---------------------------------------------------------------------------
# the three operations
# ---------------------------------------------------------------------------


def ann_fs(f: CommPoly, budget: Optional[Budget] = None, verify: bool = True) -> AnnFsIdeal:
    """Generators of the annihilator of f^s.

    Builds the ideal (t - f, d_i + f_i dt) in the algebra with the extra
    pair, extracts its weight-zero part under t:1, dt:-1, and rewrites the
    matched t/dt blocks into s."""
    if f.is_constant():
        raise ValueError("ann_fs needs a nonconstant polynomial")
    vars = f.vars
    n = len(vars)
    ctx_t = WeylContext(vars, extra_pair=True)
    t = WeylOp.coord(ctx_t, EXTRA_NAME)
    dt = WeylOp.partial(ctx_t, EXTRA_NAME)
    gens = [t - WeylOp.from_poly(ctx_t, f)]
    for v, fi in zip(vars, gradient(f)):
        gens.append(WeylOp.partial(ctx_t, v) + WeylOp.from_poly(ctx_t, fi) * dt)
    weight = [0] * n + [1] + [0] * n + [-1]  # coords..., t, dvars..., dt
    zero_part = eliminate_weight(gens, weight, "weight_zero_part", budget)
    ctx_s = WeylContext(vars, params=("s",))
    out = [_rewrite_theta(op, ctx_s) for op in zero_part]
    out = [op for op in out if not op.is_zero()]
    if verify:
        for op in out:
            if not annihilates_fs(op, f):
                raise AssertionError("produced operator does not annihilate f^s")
    return AnnFsIdeal(out, f)


def _rewrite_theta(op: WeylOp, ctx_s: WeylContext) -> WeylOp:
    """Rewrite a weight-zero operator of the extra-pair algebra into D[s].

    Every term has equal t and dt exponents m; the commuting block
    t^m dt^m equals theta(theta-1)...(theta-m+1) with theta = t dt, and
    theta acts as -s-1."""
    ctx_t = op.ctx
    ti = ctx_t.ncoords - 1
    n = ti
    out = WeylOp.zero(ctx_s)
    s = WeylOp.param(ctx_s, "s")
    theta = (-1) - s  # theta = -s - 1 as an operator polynomial in s
    falling: List[WeylOp] = [WeylOp.const(ctx_s, 1)]

    def falling_power(m: int) -> WeylOp:
        while len(falling) <= m:
            k = len(falling) - 1
            falling.append(falling[-1] * (theta - k))
        return falling[m]

    for (a, b, _), c in op.terms.items():
        m = a[ti]
        if b[ti] != m:
            raise AssertionError("operator is not weight homogeneous of weight zero")
        key = (a[:ti], b[:ti], (0,))
        base = WeylOp(ctx_s, {key: c})
        out = out + base * falling_power(m)
    return out


def bfunction(f: CommPoly, budget: Optional[Budget] = None,
              fs: Optional[AnnFsIdeal] = None) -> BFunction:
    """The Bernstein polynomial of f, normalized monic, with integer roots.

    Eliminates all coordinates and derivations from Ann(f^s) + (f) and
    reads off the principal generator of the intersection with Q[s]."""
    if fs is None:
        fs = ann_fs(f, budget)
    ctx_s = fs.ctx
    gens = list(fs.generators) + [WeylOp.from_poly(ctx_s, f)]
    n = ctx_s.ncoords
    weight = [1] * n + [1] * n + [0]  # eliminate x and d, keep s
    only_s = eliminate_weight(gens, weight, "param_ring_intersection", budget)
    if not only_s:
        raise AssertionError("b-function elimination returned nothing")
    polys = [_op_to_spoly(op) for op in only_s]
    b = polys[0]
    for p in polys[1:]:
        b = _uni_gcd(b, p)
    lead = b[-1]
    b = [c / lead for c in b]
    roots = _integer_roots(b)
    return BFunction(tuple(b), tuple(roots), min(roots) if roots else None)


def _op_to_spoly(op: WeylOp) -> List[Fraction]:
    coeffs: List[Fraction] = []
    for (a, b, g), c in op.terms.items():
        if any(a) or any(b):
            raise ValueError("operator is not a pure s-polynomial")
        e = g[0]
        if len(coeffs) <= e:
            coeffs.extend([Fraction(0)] * (e + 1 - len(coeffs)))
        coeffs[e] += c
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    return coeffs


def _uni_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    r = list(a)
    while r and r[-1] == 0:
        r.pop()
    while len(r) >= len(b):
        c = r[-1] / b[-1]
        shift = len(r) - len(b)
        for i, dc in enumerate(b):
            r[shift + i] -= c * dc
        while r and r[-1] == 0:
            r.pop()
    return r


def _uni_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a, b = list(a), list(b)
    while b and any(c != 0 for c in b):
        a, b = b, _uni_rem(a, b)
    while a and a[-1] == 0:
        a.pop()
    return a


def _integer_roots(coeffs: Sequence[Fraction]) -> List[int]:
    """All integer roots (with multiplicity collapsed) of a rational
    univariate polynomial, found exactly."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]  # a factor of s: 0 is a root
    lowest = ints[0] if ints else 0
    roots = set()
    if len(ints) < len(coeffs):
        roots.add(0)
    if lowest:
        divisors = set()
        a = abs(lowest)
        d = 1
        while d * d <= a:
            if a % d == 0:
                divisors.add(d)
                divisors.add(a // d)
            d += 1
        for d in sorted(divisors):
            for cand in (d, -d):
                acc = 0
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    roots.add(cand)
    return sorted(roots)


def ann_power(f: CommPoly, k: int, b: BFunction,
              fs: Optional[AnnFsIdeal] = None,
              budget: Optional[Budget] = None) -> List[WeylOp]:
    """Generators of Ann(1/f^k) by substituting s = -k into Ann(f^s).

    Requires every integer root of b to be >= -k; otherwise the
    substitution can generate a proper subideal and the call refuses.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if b.min_integer_root is None or b.min_integer_root < -k:
        raise ValueError(
            f"substitution s = {-k} is not justified: the b-function has an "
            f"integer root below {-k}")
    if fs is None:
        fs = ann_fs(f, budget)
    ctx = WeylContext(f.vars)
    out = []
    for op in fs.generators:
        terms: Dict[tuple, Fraction] = {}
        for (a, bb, g), c in op.terms.items():
            val = c * Fraction(-k) ** g[0]
            key = (a, bb, ())
            terms[key] = terms.get(key, Fraction(0)) + val
        sub = WeylOp(ctx, terms)
        if not sub.is_zero():
            out.append(sub)
    return out
