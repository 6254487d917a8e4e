"""Groebner bases for left ideals and submodules over Q[x] and the Weyl algebra.

The same Buchberger engine serves the commutative polynomial ring and the
Weyl algebra; elements may be scalars (CommPoly / WeylOp) or fixed-length
vectors of them (tuples, or OpVector).  All results are exact.  Every
potentially long call accepts a Budget and raises BudgetExceeded instead
of hanging, so callers can degrade to weaker methods.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import _engine
from ._engine import Budget, BudgetExceeded, EngineRing, GBElem, Order
from .polyring import CommPoly
from .weyl import OpVector, WeylContext, WeylOp

Element = Union[CommPoly, WeylOp, OpVector, tuple, list]


# ---------------------------------------------------------------------------
# order descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermOrder:
    """Admissible monomial order description.

    kind is one of "degrevlex", "lex", "weighted".  For "weighted", u holds
    integer weights on the coordinate variables and v on the derivation
    variables (parameters weigh pweights, default 0); comparison is by
    weight first, then by the tiebreak order.  Admissibility requires
    u_i + v_i >= 0 for every conjugate pair.
    """

    kind: str = "degrevlex"
    u: Optional[Tuple[int, ...]] = None
    v: Optional[Tuple[int, ...]] = None
    pweights: Optional[Tuple[int, ...]] = None
    tiebreak: Optional["TermOrder"] = None

    @staticmethod
    def degrevlex() -> "TermOrder":
        return TermOrder("degrevlex")

    @staticmethod
    def lex() -> "TermOrder":
        return TermOrder("lex")

    @staticmethod
    def weighted(u: Sequence[int], v: Sequence[int] = (),
                 pweights: Sequence[int] = (),
                 tiebreak: Optional["TermOrder"] = None) -> "TermOrder":
        return TermOrder("weighted", tuple(u), tuple(v), tuple(pweights),
                         tiebreak or TermOrder("degrevlex"))

    def check_admissible(self, ring: EngineRing) -> None:
        if self.kind != "weighted":
            return
        u = self.u or (0,) * ring.ncoords
        v = self.v or (0,) * ring.ncoords
        if ring.weyl:
            for i in range(ring.ncoords):
                ui = u[i] if i < len(u) else 0
                vi = v[i] if i < len(v) else 0
                if ui + vi < 0:
                    raise ValueError(f"inadmissible weight: u[{i}]+v[{i}] = {ui + vi} < 0")

    def engine_spec(self, ring: EngineRing):
        if self.kind == "degrevlex":
            return ("degrevlex",)
        if self.kind == "lex":
            return ("lex",)
        if self.kind == "weighted":
            self.check_admissible(ring)
            w = list(self.u or ())
            w += [0] * (ring.ncoords - len(w))
            if ring.weyl:
                vv = list(self.v or ())
                vv += [0] * (ring.ncoords - len(vv))
                w += vv
            pw = list(self.pweights or ())
            pw += [0] * (ring.nparams - len(pw))
            w += pw
            if any(x < 0 for x in w):
                raise ValueError("direct Groebner runs require non-negative weights; "
                                 "mixed-sign weights go through eliminate_weight")
            sub = (self.tiebreak or TermOrder("degrevlex")).engine_spec(ring)
            return ("weight", tuple(w), sub)
        raise ValueError(f"unknown order kind {self.kind!r}")


@dataclass(frozen=True)
class ModuleOrder:
    """Order on free-module monomials: a base order plus a position policy."""

    base: TermOrder = field(default_factory=TermOrder.degrevlex)
    position: str = "TOP"  # term-over-position; "POT" for position-over-term
    priority: Optional[Tuple[int, ...]] = None

    def engine_order(self, ring: EngineRing) -> Order:
        return Order(ring, self.base.engine_spec(ring), module=self.position,
                     priority=self.priority)


# ---------------------------------------------------------------------------
# conversions between public values and engine elements
# ---------------------------------------------------------------------------


def _ring_for(sample: Element) -> Tuple[EngineRing, object]:
    if isinstance(sample, (tuple, list, OpVector)):
        return _ring_for(sample[0])
    if isinstance(sample, WeylOp):
        ctx = sample.ctx
        return EngineRing(True, ctx.ncoords, len(ctx.params)), ctx
    if isinstance(sample, CommPoly):
        return EngineRing(False, len(sample.vars), 0), sample.vars
    raise TypeError(f"unsupported element type {type(sample).__name__}")


def _scalar_int_terms(x: Union[CommPoly, WeylOp], ring: EngineRing,
                      lam: int) -> Dict[int, int]:
    pack = ring.layout.pack
    out: Dict[int, int] = {}
    if isinstance(x, WeylOp):
        for (a, b, g), c in x.terms.items():
            v = c * lam
            out[pack(a + b + g)] = v.numerator
    else:
        for m, c in x.terms.items():
            v = c * lam
            out[pack(m)] = v.numerator
    return out


def _denlcm(x: Union[CommPoly, WeylOp]) -> int:
    d = 1
    for c in x.terms.values():
        d = d * c.denominator // gcd(d, c.denominator)
    return d


def to_elem(x: Element, ring: EngineRing) -> Tuple[_engine.Elem, Fraction]:
    """Convert to an integer engine element; returns (elem, lam) with
    elem == lam * x exactly."""
    if isinstance(x, (tuple, list, OpVector)):
        entries = list(x)
        lam = 1
        for e in entries:
            de = _denlcm(e)
            lam = lam * de // gcd(lam, de)
        elem: _engine.Elem = {}
        for comp, e in enumerate(entries):
            t = _scalar_int_terms(e, ring, lam)
            if t:
                elem[comp] = t
        return elem, Fraction(lam)
    lam = _denlcm(x)
    t = _scalar_int_terms(x, ring, lam)
    return ({0: t} if t else {}), Fraction(lam)


def _unpack_key(ring: EngineRing, ctxinfo, m: int):
    exps = ring.layout.unpack(m)
    if ring.weyl:
        nc = ring.ncoords
        return (exps[:nc], exps[nc:2 * nc], exps[2 * nc:])
    return exps


def from_elem(elem: _engine.Elem, ring: EngineRing, ctxinfo, scale: Fraction,
              rank: int = 1):
    """Convert an engine element back; true value is elem / scale."""
    def scalar(terms: Dict[int, int]):
        if ring.weyl:
            d: Dict[tuple, Fraction] = {}
            for m, c in terms.items():
                d[_unpack_key(ring, ctxinfo, m)] = Fraction(c) / scale
            return WeylOp(ctxinfo, d)
        d2: Dict[tuple, Fraction] = {}
        for m, c in terms.items():
            d2[ring.layout.unpack(m)] = Fraction(c) / scale
        return CommPoly(ctxinfo, d2)

    empty = WeylOp(ctxinfo) if ring.weyl else CommPoly(ctxinfo)
    if rank == 1 and set(elem.keys()) <= {0}:
        return scalar(elem.get(0, {}))
    entries = [scalar(elem.get(i, {})) if i in elem else empty for i in range(rank)]
    if ring.weyl:
        return OpVector(entries)
    return tuple(entries)


def _rank_of(x: Element) -> int:
    if isinstance(x, (tuple, list, OpVector)):
        return len(x)
    return 1


# ---------------------------------------------------------------------------
# public basis object and operations
# ---------------------------------------------------------------------------


class Basis:
    """A (reduced) left Groebner basis of an ideal or submodule."""

    def __init__(self, generators: List[Element], order: ModuleOrder,
                 ring: Optional[EngineRing], ctxinfo, engine_order: Optional[Order],
                 engine_elems: List[GBElem], reduced_flag: bool):
        self.generators = generators
        self.order = order
        self.reduced_flag = reduced_flag
        self._ring = ring
        self._ctxinfo = ctxinfo
        self._eorder = engine_order
        self._elems = engine_elems
        self.rank = max((_rank_of(g) for g in generators), default=1)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_trivial(self) -> bool:
        """True when the basis generates the unit ideal (contains a unit)."""
        return any(
            not g.comp and g.lm == 0 for g in self._elems
        ) if self._elems else False


def _as_module_order(order) -> ModuleOrder:
    if order is None:
        return ModuleOrder()
    if isinstance(order, TermOrder):
        return ModuleOrder(base=order)
    if isinstance(order, ModuleOrder):
        return order
    raise TypeError("order must be a TermOrder or ModuleOrder")


def groebner_basis(gens: Sequence[Element], order=None,
                   budget: Optional[Budget] = None) -> Basis:
    """Reduced left Groebner basis generating the same module as gens.

    Deterministic for a fixed input and order; permuting the input
    generators yields the same reduced basis.
    """
    order = _as_module_order(order)
    gens = [g for g in gens]
    if not gens:
        return Basis([], order, None, None, None, [], True)
    ring, ctxinfo = _ring_for(gens[0])
    eorder = order.engine_order(ring)
    elems = []
    for g in gens:
        e, _lam = to_elem(g, ring)
        elems.append(e)
    raw, _ = _engine.buchberger(ring, eorder, elems, budget)
    red = _engine.interreduce(ring, eorder, raw, budget)
    rank = max(_rank_of(g) for g in gens)
    pub = [from_elem(g.data, ring, ctxinfo, Fraction(1), rank) for g in red]
    return Basis(pub, order, ring, ctxinfo, eorder, red, True)


def normal_form(p: Element, basis: Basis, budget: Optional[Budget] = None) -> Element:
    """Remainder of p modulo the basis: no term of the result is divisible
    by a leading term of the basis, and p - NF(p) lies in the module."""
    if basis._ring is None:
        return p
    ring = basis._ring
    e, lam = to_elem(p, ring)
    rem, alpha, _, _ = _engine.normal_form(ring, basis._eorder, e, basis._elems, budget)
    return from_elem(rem, ring, basis._ctxinfo, alpha * lam, max(basis.rank, _rank_of(p)))


def is_member(p: Element, basis: Basis, budget: Optional[Budget] = None) -> bool:
    if basis._ring is None:
        e, _ = to_elem(p, _ring_for(p)[0])
        return _engine.elem_is_zero(e)
    ring = basis._ring
    e, _lam = to_elem(p, ring)
    rem, _alpha, _, _ = _engine.normal_form(ring, basis._eorder, e, basis._elems, budget)
    return _engine.elem_is_zero(rem)


def ideal_compare(a: Sequence[Element], b: Sequence[Element], order=None,
                  budget: Optional[Budget] = None) -> str:
    """Compare the modules generated by a and b.

    Returns "equal", "a_strictly_inside", "b_strictly_inside" or
    "incomparable", decided by two-sided normal-form membership.
    """
    ga = groebner_basis(a, order, budget)
    gb = groebner_basis(b, order, budget)
    a_in_b = all(is_member(x, gb, budget) for x in a)
    b_in_a = all(is_member(x, ga, budget) for x in b)
    if a_in_b and b_in_a:
        return "equal"
    if a_in_b:
        return "a_strictly_inside"
    if b_in_a:
        return "b_strictly_inside"
    return "incomparable"


# ---------------------------------------------------------------------------
# weight-based elimination
# ---------------------------------------------------------------------------


def _weight_vector_fields(ring: EngineRing, weight: Sequence[int]) -> Tuple[int, ...]:
    w = tuple(weight)
    if len(w) != ring.layout.nfields:
        raise ValueError(
            f"weight vector must list all {ring.layout.nfields} variables "
            f"(coordinates, then derivations, then parameters)")
    return w


def _term_weight(ring: EngineRing, w: Tuple[int, ...], m: int) -> int:
    tot = 0
    for wi, s in zip(w, ring.layout.shifts):
        if wi:
            tot += wi * ((m >> s) & _engine.FIELD_MASK)
    return tot


def eliminate_weight(gens: Sequence[Element], weight: Sequence[int], mode: str,
                     budget: Optional[Budget] = None) -> List[Element]:
    """Weight-order elimination in three modes.

    weight lists one integer per variable in context order (coordinates,
    derivations, parameters).  Admissibility requires w(x_i) + w(d_i) >= 0
    for every conjugate pair.

    * "weight_zero_part": the weights must be +-1 on exactly one conjugate
      pair, zero elsewhere.  Returns generators of the weight-0 part of the
      left ideal, i.e. of its intersection with the weight-0 subalgebra.
      Internally the grading is made effective with a pair of central
      bookkeeping parameters (u, v) with uv = 1, eliminated by a block
      order; this realizes a weight-graded basis extraction using only
      well-founded term orders.
    * "eliminate_positive": non-negative weights; returns the sub-basis of
      a weight-order Groebner basis free of positively weighted variables.
    * "param_ring_intersection": like eliminate_positive, then keeps only
      the elements lying in the parameter ring.
    """
    gens = list(gens)
    if not gens:
        return []
    ring, ctxinfo = _ring_for(gens[0])
    w = _weight_vector_fields(ring, weight)
    if ring.weyl:
        for i in range(ring.ncoords):
            if w[i] + w[ring.ncoords + i] < 0:
                raise ValueError(f"inadmissible weight on pair {i}: sum < 0")

    if mode == "weight_zero_part":
        return _weight_zero_part(gens, ring, ctxinfo, w, budget)
    if mode in ("eliminate_positive", "param_ring_intersection"):
        if any(x < 0 for x in w):
            raise ValueError(f"{mode} requires non-negative weights")
        spec = ("weight", w, ("degrevlex",)) if any(w) else ("degrevlex",)
        eorder = Order(ring, spec)
        elems = [to_elem(g, ring)[0] for g in gens]
        raw, _ = _engine.buchberger(ring, eorder, elems, budget)
        red = _engine.interreduce(ring, eorder, raw, budget)
        out = []
        for g in red:
            terms = g.data.get(0, {})
            if all(_term_weight(ring, w, m) == 0 for m in terms):
                if mode == "param_ring_intersection":
                    nonparam = ring.layout.shifts[:len(ring.layout.shifts) - ring.nparams]
                    if any((m >> s) & _engine.FIELD_MASK for m in terms for s in nonparam):
                        continue
                out.append(from_elem(g.data, ring, ctxinfo, Fraction(1)))
        return out
    raise ValueError(f"unknown eliminate_weight mode {mode!r}")


def _weight_zero_part(gens, ring: EngineRing, ctxinfo, w, budget) -> List[Element]:
    if not ring.weyl:
        raise ValueError("weight_zero_part is defined for Weyl contexts")
    nc = ring.ncoords
    pairs = [i for i in range(nc) if w[i] or w[nc + i]]
    for i in pairs:
        if (w[i], w[nc + i]) not in ((1, -1), (-1, 1)):
            raise ValueError("weight_zero_part supports +-1 weights on conjugate pairs")
    if len(pairs) != 1:
        raise ValueError("weight_zero_part expects exactly one weighted pair")
    if any(w[2 * nc + j] for j in range(ring.nparams)):
        raise ValueError("parameters cannot carry weight in weight_zero_part")
    pair = pairs[0]

    # extended ring with the bookkeeping parameters u, v appended
    ring2 = EngineRing(True, nc, ring.nparams + 2)
    ushift = ring2.pshifts[-2]
    vshift = ring2.pshifts[-1]
    uidx = ring2.layout.nfields - 2

    def lift(elem: _engine.Elem) -> _engine.Elem:
        out: Dict[int, Dict[int, int]] = {}
        for comp, terms in elem.items():
            d = out.setdefault(comp, {})
            for m, c in terms.items():
                dw = _term_weight(ring, w, m)
                m2 = m
                if dw > 0:
                    m2 |= dw << ushift
                elif dw < 0:
                    m2 |= (-dw) << vshift
                d[m2] = d.get(m2, 0) + c
        return out

    elems = [lift(to_elem(g, ring)[0]) for g in gens]
    one_uv = {0: {(1 << ushift) | (1 << vshift): 1, 0: -1}}
    elems.append(one_uv)

    eorder = Order(ring2, ("block", (uidx, uidx + 1), ("degrevlex",)))
    raw, _ = _engine.buchberger(ring2, eorder, elems, budget)
    red = _engine.interreduce(ring2, eorder, raw, budget)

    w2 = tuple(w) + (0, 0)
    out: List[Element] = []
    for g in red:
        terms = g.data.get(0, {})
        if any((m >> ushift) & _engine.FIELD_MASK or (m >> vshift) & _engine.FIELD_MASK
               for m in terms):
            continue
        weights = {_term_weight(ring2, w2, m) for m in terms}
        if len(weights) != 1:
            raise AssertionError("elimination lost weight homogeneity")
        d = weights.pop()
        data = g.data
        if d > 0:
            # bring to weight zero with the negatively weighted pair member
            shift_var = ring.dshifts[pair] if w[nc + pair] < 0 else ring.xshifts[pair]
            data = ring.term_mul(d << shift_var, 1, data)
        elif d < 0:
            shift_var = ring.xshifts[pair] if w[pair] > 0 else ring.dshifts[pair]
            data = ring.term_mul((-d) << shift_var, 1, data)
        ge = GBElem(ring, Order(ring, ("degrevlex",)), data)
        out.append(from_elem(ge.data, ring, ctxinfo, Fraction(1)))
    return out
