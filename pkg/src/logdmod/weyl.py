"""The Weyl algebra over Q: normally ordered differential operators.

An operator lives in a context describing n coordinate variables x_i with
their derivations d<x_i>, an optional list of central parameters (e.g. s),
and optionally one extra coordinate pair (t, dt) used by annihilator
constructions.  Every operator is stored normally ordered: a term with key
(alpha, beta, gamma) means  coeff * x^alpha * d^beta * params^gamma  with
all coordinate factors to the left of all derivation factors.  The product
maintains normal order eagerly through the commutation rule d_i x_i =
x_i d_i + 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .polyring import CommPoly, ParseError, _Parser, _degrevlex_key

TermKey = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]

EXTRA_NAME = "t"


@dataclass(frozen=True)
class WeylContext:
    """Ambient algebra description.

    names       spatial coordinate variables
    params      central parameters commuting with everything (e.g. ("s",))
    extra_pair  add the coordinate pair (t, dt) after the spatial ones
    """

    names: Tuple[str, ...]
    params: Tuple[str, ...] = ()
    extra_pair: bool = False

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "params", tuple(self.params))
        all_names = list(self.coords) + list(self.dnames) + list(self.params)
        if len(set(all_names)) != len(all_names):
            raise ValueError(f"colliding variable names in context: {all_names}")

    @property
    def coords(self) -> Tuple[str, ...]:
        if self.extra_pair:
            return self.names + (EXTRA_NAME,)
        return self.names

    @property
    def dnames(self) -> Tuple[str, ...]:
        return tuple("d" + v for v in self.coords)

    @property
    def ncoords(self) -> int:
        return len(self.names) + (1 if self.extra_pair else 0)

    @property
    def n(self) -> int:
        return len(self.names)


def _zip_add(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class WeylOp:
    """A normally ordered element of the Weyl algebra of a context."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: WeylContext, terms: Optional[Dict[TermKey, Fraction]] = None):
        self.ctx = ctx
        clean: Dict[TermKey, Fraction] = {}
        if terms:
            nc, np = ctx.ncoords, len(ctx.params)
            for (a, b, g), c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(a) != nc or len(b) != nc or len(g) != np:
                    raise ValueError("term key does not match context shape")
                key = (tuple(a), tuple(b), tuple(g))
                prev = clean.get(key)
                if prev is None:
                    clean[key] = c
                else:
                    s = prev + c
                    if s:
                        clean[key] = s
                    else:
                        del clean[key]
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ctx: WeylContext) -> "WeylOp":
        return cls(ctx)

    @classmethod
    def const(cls, ctx: WeylContext, value) -> "WeylOp":
        value = Fraction(value)
        if value == 0:
            return cls(ctx)
        z = (0,) * ctx.ncoords
        zp = (0,) * len(ctx.params)
        return cls(ctx, {(z, z, zp): value})

    @classmethod
    def coord(cls, ctx: WeylContext, name: str) -> "WeylOp":
        i = ctx.coords.index(name)
        a = tuple(1 if j == i else 0 for j in range(ctx.ncoords))
        z = (0,) * ctx.ncoords
        zp = (0,) * len(ctx.params)
        return cls(ctx, {(a, z, zp): Fraction(1)})

    @classmethod
    def partial(cls, ctx: WeylContext, name: str) -> "WeylOp":
        """The derivation with respect to coordinate `name`."""
        i = ctx.coords.index(name)
        b = tuple(1 if j == i else 0 for j in range(ctx.ncoords))
        z = (0,) * ctx.ncoords
        zp = (0,) * len(ctx.params)
        return cls(ctx, {(z, b, zp): Fraction(1)})

    @classmethod
    def param(cls, ctx: WeylContext, name: str) -> "WeylOp":
        i = ctx.params.index(name)
        g = tuple(1 if j == i else 0 for j in range(len(ctx.params)))
        z = (0,) * ctx.ncoords
        return cls(ctx, {(z, z, g): Fraction(1)})

    @classmethod
    def from_poly(cls, ctx: WeylContext, p: CommPoly) -> "WeylOp":
        """Embed a polynomial in the coordinates (or a prefix) as an operator."""
        pos = [ctx.coords.index(v) for v in p.vars]
        z = (0,) * ctx.ncoords
        zp = (0,) * len(ctx.params)
        terms: Dict[TermKey, Fraction] = {}
        for m, c in p.terms.items():
            a = [0] * ctx.ncoords
            for i, e in enumerate(m):
                a[pos[i]] = e
            terms[(tuple(a), z, zp)] = c
        return cls(ctx, terms)

    # -- views ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def has_params(self) -> bool:
        return any(any(g) for (_, _, g) in self.terms)

    def max_dorder(self) -> int:
        if not self.terms:
            return -1
        return max(sum(b) for (_, b, _) in self.terms)

    def order_zero_poly(self) -> CommPoly:
        """The derivation-free part, as a polynomial in the coordinates.

        For a normally ordered operator this equals the operator applied
        to the constant function 1.
        """
        if self.has_params():
            raise ValueError("operator has parameters")
        out: Dict[Tuple[int, ...], Fraction] = {}
        for (a, b, _), c in self.terms.items():
            if any(b):
                continue
            out[a] = c
        return CommPoly(self.ctx.coords, out)

    def coefficient_polys(self) -> Dict[Tuple[int, ...], CommPoly]:
        """Map d-exponent -> coefficient polynomial a_beta(x)."""
        if self.has_params():
            raise ValueError("operator has parameters")
        groups: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Fraction]] = {}
        for (a, b, _), c in self.terms.items():
            groups.setdefault(b, {})[a] = c
        return {b: CommPoly(self.ctx.coords, t) for b, t in groups.items()}

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "WeylOp") -> None:
        if self.ctx != other.ctx:
            raise ValueError("context mismatch between operators")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylOp.const(self.ctx, other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        r = WeylOp.__new__(WeylOp)
        r.ctx = self.ctx
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = WeylOp.__new__(WeylOp)
        r.ctx = self.ctx
        r.terms = {k: -c for k, c in self.terms.items()}
        return r

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylOp.const(self.ctx, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylOp":
        c = Fraction(c)
        if c == 0:
            return WeylOp(self.ctx)
        r = WeylOp.__new__(WeylOp)
        r.ctx = self.ctx
        r.terms = {k: v * c for k, v in self.terms.items()}
        return r

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of an operator")
        result = WeylOp.const(self.ctx, 1)
        for _ in range(k):
            result = weyl_mul(result, self)
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylOp.const(self.ctx, other)
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def apply(self, g: CommPoly) -> CommPoly:
        return weyl_apply(self, g)

    # -- printing -----------------------------------------------------------------

    def __str__(self) -> str:
        """Coefficients left, coordinate monomials, then derivation
        monomials; a multi-term coefficient is parenthesized, as in
        "(y^3*z - x^2)*dz"."""
        if not self.terms:
            return "0"
        ctx = self.ctx
        cvars = ctx.coords + ctx.params
        groups: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Fraction]] = {}
        for (a, b, g), c in self.terms.items():
            groups.setdefault(b, {})[a + g] = c
        parts: List[Tuple[int, str]] = []  # (sign, body) with sign -1 or +1

        def dsuffix(b: Tuple[int, ...]) -> str:
            out = []
            for name, e in zip(ctx.dnames, b):
                if e == 1:
                    out.append(name)
                elif e > 1:
                    out.append(f"{name}^{e}")
            return "*".join(out)

        for b in sorted(groups, key=_degrevlex_key, reverse=True):
            cpoly = CommPoly(cvars, groups[b])
            dstr = dsuffix(b)
            if not dstr:
                # constant-derivation part: splice its terms in directly
                for m in sorted(cpoly.terms, key=_degrevlex_key, reverse=True):
                    c = cpoly.terms[m]
                    one = CommPoly(cvars, {m: abs(c)})
                    parts.append((-1 if c < 0 else 1, str(one)))
                continue
            if len(cpoly.terms) > 1:
                parts.append((1, f"({cpoly})*{dstr}"))
                continue
            ((m, c),) = cpoly.terms.items()
            mono = CommPoly(cvars, {m: abs(c)})
            body = str(mono)
            if body == "1":
                body = dstr
            else:
                body = f"{body}*{dstr}"
            parts.append((-1 if c < 0 else 1, body))
        pieces = []
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                pieces.append(("-" if sign < 0 else "") + body)
            else:
                pieces.append(("- " if sign < 0 else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"WeylOp({self})"


def weyl_mul(p: WeylOp, q: WeylOp) -> WeylOp:
    """Normally ordered product in the Weyl algebra.

    Uses the closed form  d^b x^c = sum_k k! C(b,k) C(c,k) x^(c-k) d^(b-k)
    independently in every coordinate; parameters multiply freely.
    """
    p._check(q)
    ctx = p.ctx
    nc = ctx.ncoords
    out: Dict[TermKey, Fraction] = {}
    for (a1, b1, g1), c1 in p.terms.items():
        for (a2, b2, g2), c2 in q.terms.items():
            base_c = c1 * c2
            gsum = _zip_add(g1, g2)
            # coordinates where a derivation of p meets a coordinate of q
            hot = [i for i in range(nc) if b1[i] and a2[i]]
            if not hot:
                key = (_zip_add(a1, a2), _zip_add(b1, b2), gsum)
                s = out.get(key, Fraction(0)) + base_c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
                continue
            ranges = [range(min(b1[i], a2[i]) + 1) for i in hot]
            for ks in itertools.product(*ranges):
                coeff = base_c
                a = list(_zip_add(a1, a2))
                b = list(_zip_add(b1, b2))
                for i, k in zip(hot, ks):
                    if k:
                        f = 1
                        for r in range(2, k + 1):
                            f *= r
                        coeff *= comb(b1[i], k) * comb(a2[i], k) * f
                        a[i] -= k
                        b[i] -= k
                key = (tuple(a), tuple(b), gsum)
                s = out.get(key, Fraction(0)) + coeff
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    r = WeylOp.__new__(WeylOp)
    r.ctx = ctx
    r.terms = out
    return r


def weyl_apply(p: WeylOp, g: CommPoly) -> CommPoly:
    """Natural action of a parameter-free operator on a polynomial."""
    if p.has_params():
        raise ValueError("cannot apply a parameterized operator to a polynomial")
    ctx = p.ctx
    if g.vars != ctx.coords:
        if set(g.vars).issubset(set(ctx.coords)):
            g = g.extend_vars(ctx.coords)
        else:
            raise ValueError("polynomial variables do not match the context")
    out = CommPoly.zero(ctx.coords)
    cache: Dict[Tuple[int, ...], CommPoly] = {(0,) * ctx.ncoords: g}

    def derived(b: Tuple[int, ...]) -> CommPoly:
        got = cache.get(b)
        if got is not None:
            return got
        i = next(j for j, e in enumerate(b) if e)
        prev = derived(b[:i] + (b[i] - 1,) + b[i + 1:])
        val = prev.derivative(ctx.coords[i])
        cache[b] = val
        return val

    for (a, b, _), c in p.terms.items():
        h = derived(b)
        if h.is_zero():
            continue
        mono = CommPoly(ctx.coords, {a: c})
        out = out + mono * h
    return out


def commutator(p: WeylOp, q: WeylOp) -> WeylOp:
    """pq - qp, normally ordered."""
    return weyl_mul(p, q) - weyl_mul(q, p)


def smc_predicates(p: WeylOp) -> Tuple[bool, bool]:
    """Syntactic predicates on a parameter-free normally ordered operator.

    Returns (derivative_only, origin_vanishing):

    * derivative_only: every stored term has a nonzero derivation exponent,
      equivalently p applied to 1 is zero (p lies in the left ideal
      generated by the derivations).
    * origin_vanishing: every stored term has a nonzero coordinate
      exponent, i.e. every coefficient polynomial vanishes at the origin.
    """
    if p.has_params():
        raise ValueError("operator has parameters")
    derivative_only = True
    origin_vanishing = True
    for (a, b, _), _c in p.terms.items():
        if not any(b):
            derivative_only = False
        if not any(a):
            origin_vanishing = False
    return derivative_only, origin_vanishing


class OpVector:
    """Fixed-length tuple of operators over a shared context."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[WeylOp]):
        entries = tuple(entries)
        if not entries:
            raise ValueError("empty operator vector")
        ctx = entries[0].ctx
        for e in entries:
            if e.ctx != ctx:
                raise ValueError("operator vector entries over different contexts")
        self.entries = entries

    @property
    def ctx(self) -> WeylContext:
        return self.entries[0].ctx

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, OpVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"

    def __repr__(self):
        return f"OpVector{self}"


def parse_op(text: str, ctx: WeylContext) -> WeylOp:
    """Parse an operator expression written in the printing convention.

    Coordinates, parameters and derivation symbols ("d" + coordinate name)
    are all valid factor names; products multiply left to right in the
    algebra, so "dx*x" parses to x*dx + 1.
    """
    coords = set(ctx.coords)
    dnames = {dn: v for dn, v in zip(ctx.dnames, ctx.coords)}
    params = set(ctx.params)

    class P(_Parser):
        def const_fn(self, q):
            return WeylOp.const(ctx, q)

    def atom_fn(name: str) -> WeylOp:
        if name in coords:
            return WeylOp.coord(ctx, name)
        if name in dnames:
            return WeylOp.partial(ctx, dnames[name])
        if name in params:
            return WeylOp.param(ctx, name)
        raise KeyError(name)

    return P(text, ctx.coords, atom_fn).parse()
