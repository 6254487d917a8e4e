"""Internal Groebner engine shared by the commutative and Weyl rings.

Not part of the public API.  Elements here are integer-coefficient and
content-normalized; the public modules convert to and from exact rational
form at the boundary.  Monomials are packed into single integers, 16 bits
per variable, so monomial multiplication is integer addition and
divisibility is two bit operations.

Element representation: {component: {packed_monomial: int_coeff}}.
Ring elements are the rank-1 case (component 0 only).
"""

from __future__ import annotations

import heapq
import time
from fractions import Fraction
from math import comb, gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
FIELD_MAX = (1 << (FIELD_BITS - 1)) - 1  # exponents must stay below this

Elem = Dict[int, Dict[int, int]]


class BudgetExceeded(Exception):
    """A computation hit its step or wall-clock budget."""

    def __init__(self, stage: str = ""):
        super().__init__(f"budget exceeded{': ' + stage if stage else ''}")
        self.stage = stage


class Budget:
    """Step and wall-clock budget threaded through long computations."""

    __slots__ = ("steps_left", "deadline", "stage", "_tick")

    def __init__(self, max_steps: Optional[int] = None, max_seconds: Optional[float] = None,
                 stage: str = ""):
        self.steps_left = max_steps
        self.deadline = None if max_seconds is None else time.monotonic() + max_seconds
        self.stage = stage
        self._tick = 0

    def spend(self, n: int = 1) -> None:
        if self.steps_left is not None:
            self.steps_left -= n
            if self.steps_left < 0:
                raise BudgetExceeded(self.stage)
        if self.deadline is not None:
            self._tick += 1
            if self._tick >= 32:
                self._tick = 0
                if time.monotonic() > self.deadline:
                    raise BudgetExceeded(self.stage)


class Layout:
    """Bit layout for packed exponent vectors."""

    __slots__ = ("nfields", "shifts", "guard")

    def __init__(self, nfields: int):
        self.nfields = nfields
        self.shifts = tuple(FIELD_BITS * i for i in range(nfields))
        g = 0
        for s in self.shifts:
            g |= 1 << (s + FIELD_BITS - 1)
        self.guard = g

    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for e, s in zip(exps, self.shifts):
            if e < 0 or e > FIELD_MAX:
                raise OverflowError(f"exponent {e} out of packable range")
            m |= e << s
        return m

    def unpack(self, m: int) -> Tuple[int, ...]:
        return tuple((m >> s) & FIELD_MASK for s in self.shifts)

    def divides(self, a: int, b: int) -> bool:
        """True when monomial a divides b fieldwise."""
        return ((b | self.guard) - a) & self.guard == self.guard

    def lcm(self, a: int, b: int) -> int:
        m = 0
        for s in self.shifts:
            m |= max((a >> s) & FIELD_MASK, (b >> s) & FIELD_MASK) << s
        return m


class EngineRing:
    """Commutative polynomial ring or Weyl algebra over packed monomials.

    Field layout for the Weyl case: coordinates x_0..x_{c-1}, then their
    derivations d_0..d_{c-1}, then central parameters.  The commutative
    case has ncoords = nvars and no derivation block.
    """

    __slots__ = ("weyl", "ncoords", "nparams", "layout", "pair_delta", "xshifts",
                 "dshifts", "pshifts")

    def __init__(self, weyl: bool, ncoords: int, nparams: int = 0):
        self.weyl = weyl
        self.ncoords = ncoords
        self.nparams = nparams
        nfields = (2 * ncoords if weyl else ncoords) + nparams
        self.layout = Layout(nfields)
        sh = self.layout.shifts
        self.xshifts = sh[:ncoords]
        self.dshifts = sh[ncoords:2 * ncoords] if weyl else ()
        self.pshifts = sh[(2 * ncoords if weyl else ncoords):]
        if weyl:
            self.pair_delta = tuple((1 << self.xshifts[i]) + (1 << self.dshifts[i])
                                    for i in range(ncoords))
        else:
            self.pair_delta = ()

    def term_mul(self, mono: int, coeff: int, elem: Elem) -> Elem:
        """Left multiplication of a module element by one ring term."""
        out: Elem = {}
        hot_all = ()
        if self.weyl:
            dshifts = self.dshifts
            hot_all = tuple(
                (self.xshifts[i], self.pair_delta[i], (mono >> dshifts[i]) & FIELD_MASK)
                for i in range(self.ncoords)
                if (mono >> dshifts[i]) & FIELD_MASK)
        if not hot_all:
            # no commutation corrections: m -> m + mono is injective, so the
            # result needs no merging at all
            for comp, terms in elem.items():
                out[comp] = {m + mono: coeff * c for m, c in terms.items()}
            return out
        FM = FIELD_MASK
        for comp, terms in elem.items():
            dst = out.setdefault(comp, {})
            dget = dst.get
            for m, c in terms.items():
                base = m + mono
                cc = coeff * c
                over = None
                for xs, delta, d in hot_all:
                    xv = (m >> xs) & FM
                    if xv:
                        if over is None:
                            over = [(delta, d, xv)]
                        else:
                            over.append((delta, d, xv))
                if over is None:
                    v = dget(base, 0) + cc
                    if v:
                        dst[base] = v
                    else:
                        del dst[base]
                    continue
                # expand corrections: iterate k-vectors over the hot pairs
                stack = [(base, cc)]
                for delta, d, x in over:
                    nxt = []
                    top = d if d < x else x
                    for mm, co in stack:
                        nxt.append((mm, co))
                        g = co
                        for k in range(1, top + 1):
                            g = g * (d - k + 1) * (x - k + 1) // k
                            nxt.append((mm - k * delta, g))
                    stack = nxt
                for mm, co in stack:
                    v = dget(mm, 0) + co
                    if v:
                        dst[mm] = v
                    else:
                        del dst[mm]
        for comp in [c for c, t in out.items() if not t]:
            del out[comp]
        return out


# factor in the correction loop: prod_k C(d,k) C(x,k) k!  built incrementally:
# f_k = f_{k-1} * (d-k+1)(x-k+1)/k, which is exactly binom/falling-factorial growth.


class Order:
    """Monomial (and module-monomial) order with cached sort keys.

    spec is one of
      ("degrevlex",)
      ("lex",)
      ("weight", weights_tuple, subspec)     weight compared first
      ("block", field_index_set, subspec)    total degree in the block first
    Module policy: "TOP" (term over position) or "POT".  Lower component
    index wins ties unless an explicit priority list is given.
    """

    __slots__ = ("ring", "spec", "module", "priority", "_cache", "_sig")

    def __init__(self, ring: EngineRing, spec, module: str = "TOP",
                 priority: Optional[Sequence[int]] = None):
        self.ring = ring
        self.spec = spec
        self.module = module
        self.priority = None if priority is None else tuple(priority)
        self._cache: Dict[int, tuple] = {}
        # variable significance for the base orders: derivations first,
        # then coordinates, then parameters last.
        sig = list(ring.dshifts) + list(ring.xshifts) + list(ring.pshifts)
        self._sig = tuple(reversed(sig))  # reversed: least significant first

    def _base_key(self, m: int, spec) -> tuple:
        kind = spec[0]
        if kind == "degrevlex":
            tot = 0
            for s in self.ring.layout.shifts:
                tot += (m >> s) & FIELD_MASK
            return (tot,) + tuple(-((m >> s) & FIELD_MASK) for s in self._sig)
        if kind == "lex":
            return tuple((m >> s) & FIELD_MASK for s in reversed(self._sig))
        if kind == "weight":
            w = spec[1]
            sh = self.ring.layout.shifts
            tot = 0
            for wi, s in zip(w, sh):
                if wi:
                    tot += wi * ((m >> s) & FIELD_MASK)
            return (tot,) + self._base_key(m, spec[2])
        if kind == "block":
            fields = spec[1]
            sh = self.ring.layout.shifts
            tot = 0
            for i in fields:
                tot += (m >> sh[i]) & FIELD_MASK
            return (tot,) + self._base_key(m, spec[2])
        raise ValueError(f"unknown order spec {spec!r}")

    def mkey(self, m: int) -> tuple:
        k = self._cache.get(m)
        if k is None:
            k = self._base_key(m, self.spec)
            self._cache[m] = k
        return k

    def compkey(self, comp: int) -> int:
        if self.priority is not None:
            return self.priority[comp]
        return -comp

    def pairkey(self, comp: int, m: int) -> tuple:
        if self.module == "TOP":
            return self.mkey(m) + (self.compkey(comp),)
        return (self.compkey(comp),) + self.mkey(m)


# ---------------------------------------------------------------------------
# element helpers
# ---------------------------------------------------------------------------


def elem_copy(e: Elem) -> Elem:
    return {c: dict(t) for c, t in e.items()}


def elem_is_zero(e: Elem) -> bool:
    return not any(e.values())


def elem_isub(dst: Elem, src: Elem) -> None:
    for comp, terms in src.items():
        d = dst.setdefault(comp, {})
        for m, c in terms.items():
            v = d.get(m, 0) - c
            if v:
                d[m] = v
            else:
                del d[m]
        if not d:
            del dst[comp]


def elem_iscale(dst: Elem, a: int) -> None:
    if a == 1:
        return
    for terms in dst.values():
        for m in terms:
            terms[m] *= a


def elem_content(*elems: Elem) -> int:
    g = 0
    for e in elems:
        for terms in e.values():
            for c in terms.values():
                g = gcd(g, c)
                if g == 1:
                    return 1
    return g


def elem_divide_content(e: Elem, g: int) -> None:
    if g <= 1:
        return
    for terms in e.values():
        for m in terms:
            terms[m] //= g


def elem_lt(e: Elem, order: Order) -> Tuple[int, int, int]:
    """Leading (component, monomial, coeff) under the order."""
    best = None
    best_key = None
    for comp, terms in e.items():
        if not terms:
            continue
        ck = order.compkey(comp)
        if order.module == "TOP":
            m = max(terms, key=order.mkey)
            key = order.mkey(m) + (ck,)
        else:
            m = max(terms, key=order.mkey)
            key = (ck,) + order.mkey(m)
        if best_key is None or key > best_key:
            best_key = key
            best = (comp, m, terms[m])
    if best is None:
        raise ValueError("leading term of zero element")
    return best


def normalize_pair(data: Elem, trace: Optional[Elem], order: Order) -> None:
    """Strip joint content and make the leading coefficient positive."""
    g = elem_content(data, trace) if trace is not None else elem_content(data)
    if g > 1:
        elem_divide_content(data, g)
        if trace is not None:
            elem_divide_content(trace, g)
    if not elem_is_zero(data):
        _, _, lc = elem_lt(data, order)
        if lc < 0:
            elem_iscale(data, -1)
            if trace is not None:
                elem_iscale(trace, -1)
    elif trace is not None and not elem_is_zero(trace):
        _, _, lc = elem_lt(trace, order)
        if lc < 0:
            elem_iscale(trace, -1)


class GBElem:
    __slots__ = ("comp", "lm", "lc", "data", "trace", "xmask", "dmask", "sugar")

    def __init__(self, ring: EngineRing, order: Order, data: Elem,
                 trace: Optional[Elem] = None, sugar: Optional[int] = None):
        normalize_pair(data, trace, order)
        self.data = data
        self.trace = trace
        self.comp, self.lm, self.lc = elem_lt(data, order)
        if sugar is None:
            sugar = max(_mono_deg(ring, m) for terms in data.values() for m in terms)
        self.sugar = sugar
        xmask = 0
        dmask = 0
        if ring.weyl:
            for terms in data.values():
                for m in terms:
                    for i, s in enumerate(ring.xshifts):
                        if (m >> s) & FIELD_MASK:
                            xmask |= 1 << i
                    for i, s in enumerate(ring.dshifts):
                        if (m >> s) & FIELD_MASK:
                            dmask |= 1 << i
        self.xmask = xmask
        self.dmask = dmask


def _mono_deg(ring: EngineRing, m: int) -> int:
    tot = 0
    for s in ring.layout.shifts:
        tot += (m >> s) & FIELD_MASK
    return tot


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------


def normal_form(ring: EngineRing, order: Order, elem: Elem,
                basis: Sequence[GBElem], budget: Optional[Budget] = None,
                trace: Optional[Elem] = None, tails: bool = True,
                sugar: Optional[int] = None,
                ) -> Tuple[Elem, Fraction, Optional[Elem]]:
    """Normal form with integer pseudo-reduction.

    Returns (remainder, alpha, trace) where remainder = alpha * true
    normal form of the input and, when trace tracking is active,
    remainder + sum_j trace_j * gens_j = alpha * input holds exactly
    (the trace convention is fixed by the caller's initialization).
    With tails=False only the leading term is reduced (top-reduction):
    the remainder's head is irreducible but its tail is left alone, which
    is all Buchberger's loop needs and is much cheaper under tracking.
    """
    layout = ring.layout
    work = elem_copy(elem)
    out: Elem = {}
    alpha = Fraction(1)
    buckets: Dict[int, List[GBElem]] = {}
    for g in basis:
        buckets.setdefault(g.comp, []).append(g)
    steps = 0
    while work:
        comp, m, c = elem_lt(work, order)
        hit = None
        for g in buckets.get(comp, ()):
            if layout.divides(g.lm, m):
                hit = g
                break
        if hit is None:
            if not tails:
                # head is irreducible: keep the whole remainder as is
                for c2, terms in work.items():
                    dst = out.setdefault(c2, {})
                    for mm, cc in terms.items():
                        dst[mm] = cc
                break
            out.setdefault(comp, {})[m] = c
            del work[comp][m]
            if not work[comp]:
                del work[comp]
            continue
        if budget is not None:
            budget.spend()
        d = gcd(c, hit.lc)
        a = hit.lc // d  # positive: basis leading coefficients are positive
        b = c // d
        if a != 1:
            elem_iscale(work, a)
            elem_iscale(out, a)
            if trace is not None:
                elem_iscale(trace, a)
            alpha *= a
        qm = m - hit.lm
        if sugar is not None:
            qs = _mono_deg(ring, qm) + hit.sugar
            if qs > sugar:
                sugar = qs
        elem_isub(work, ring.term_mul(qm, b, hit.data))
        if trace is not None and hit.trace is not None:
            elem_isub(trace, ring.term_mul(qm, b, hit.trace))
        steps += 1
        if steps % 16 == 0:
            g0 = elem_content(work, out, trace) if trace is not None else elem_content(work, out)
            if g0 > 1:
                elem_divide_content(work, g0)
                elem_divide_content(out, g0)
                if trace is not None:
                    elem_divide_content(trace, g0)
                alpha /= g0
    return out, alpha, trace, sugar


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


def _pair_lcm(layout: Layout, a: GBElem, b: GBElem) -> int:
    return layout.lcm(a.lm, b.lm)


def _weyl_commuting(a: GBElem, b: GBElem) -> bool:
    # all terms of a commute with all terms of b
    return (a.xmask & b.dmask) == 0 and (a.dmask & b.xmask) == 0


def _coprime(layout: Layout, a: GBElem, b: GBElem) -> bool:
    return a.lm + b.lm == layout.lcm(a.lm, b.lm)


def buchberger(ring: EngineRing, order: Order, gens: Sequence[Elem],
               budget: Optional[Budget] = None, track: bool = False,
               use_criteria: bool = True, tails: bool = True,
               ) -> Tuple[List[GBElem], List[Elem]]:
    """Left Groebner basis by Buchberger's algorithm.

    With track=True every element carries its expression over the input
    generators and the relations discovered when S-polynomials reduce to
    zero are collected; by Schreyer's construction these generate the full
    syzygy module of the inputs.  The product (coprimality) criterion is
    only applied in the untracked rank-1 case, where it is justified; in
    tracked runs skipping those pairs would lose the Koszul-type syzygies.
    """
    layout = ring.layout
    basis: List[GBElem] = []
    syzygies: List[Elem] = []
    ncomp_inputs = len(gens)
    rank1 = all(set(g.keys()) <= {0} for g in gens)

    for idx, g in enumerate(gens):
        data = elem_copy(g)
        trace: Optional[Elem] = None
        if track:
            trace = {idx: {0: 1}}
        if elem_is_zero(data):
            if track:
                # the zero generator contributes the trivial syzygy e_idx
                syzygies.append({idx: {0: 1}})
            continue
        basis.append(GBElem(ring, order, data, trace))

    alive: Dict[Tuple[int, int], int] = {}
    heap: List[tuple] = []

    def push_pair(i: int, j: int) -> None:
        a, b = basis[i], basis[j]
        if a.comp != b.comp:
            return
        lcm = _pair_lcm(layout, a, b)
        alive[(i, j)] = lcm
        # sugar strategy: pairs by simulated homogeneous degree, then lcm
        sug = max(_mono_deg(ring, lcm - a.lm) + a.sugar,
                  _mono_deg(ring, lcm - b.lm) + b.sugar)
        heapq.heappush(heap, (sug, order.mkey(lcm), a.comp, j, i))

    def product_ok(a: GBElem, b: GBElem) -> bool:
        if not rank1 or track:
            return False
        if not _coprime(layout, a, b):
            return False
        if ring.weyl and not _weyl_commuting(a, b):
            return False
        return True

    def update_pairs(t: int) -> None:
        # Gebauer-Moeller style update for the new element with index t.
        h = basis[t]
        cand = [i for i in range(t) if basis[i].comp == h.comp]
        lcms = {i: _pair_lcm(layout, basis[i], h) for i in cand}
        kept: List[int] = []
        if use_criteria:
            for i in cand:
                li = lcms[i]
                drop = False
                for j in cand:
                    if j == i:
                        continue
                    lj = lcms[j]
                    if lj == li:
                        # keep only the first pair with this lcm
                        if j < i:
                            drop = True
                            break
                    elif layout.divides(lj, li):
                        drop = True
                        break
                if not drop:
                    kept.append(i)
            # chain criterion against existing pairs
            for (i, j), lcm_ij in list(alive.items()):
                if basis[i].comp != h.comp:
                    continue
                if layout.divides(h.lm, lcm_ij) \
                        and lcms[i] != lcm_ij and lcms[j] != lcm_ij:
                    del alive[(i, j)]
        else:
            kept = cand
        for i in kept:
            if product_ok(basis[i], h):
                continue
            push_pair(i, t)

    for t in range(len(basis)):
        update_pairs(t)

    while heap:
        ssugar, key, comp, j, i = heapq.heappop(heap)
        lcm = alive.pop((i, j), None)
        if lcm is None:
            continue
        if budget is not None:
            budget.spend()
        a, b = basis[i], basis[j]
        d = gcd(a.lc, b.lc)
        ca = b.lc // d
        cb = a.lc // d
        s = ring.term_mul(lcm - a.lm, ca, a.data)
        elem_isub(s, ring.term_mul(lcm - b.lm, cb, b.data))
        st: Optional[Elem] = None
        if track:
            st = ring.term_mul(lcm - a.lm, ca, a.trace)
            elem_isub(st, ring.term_mul(lcm - b.lm, cb, b.trace))
        rem, _alpha, st, rsugar = normal_form(ring, order, s, basis, budget, st,
                                              tails=tails, sugar=ssugar)
        if elem_is_zero(rem):
            if track and st is not None and not elem_is_zero(st):
                normalize_pair(st, None, order)
                syzygies.append(st)
            continue
        basis.append(GBElem(ring, order, rem, st, sugar=rsugar))
        update_pairs(len(basis) - 1)

    return basis, syzygies


def interreduce(ring: EngineRing, order: Order, basis: Sequence[GBElem],
                budget: Optional[Budget] = None) -> List[GBElem]:
    """Minimal, fully tail-reduced, deterministically sorted basis."""
    layout = ring.layout
    items = sorted(basis, key=lambda g: (order.pairkey(g.comp, g.lm)))
    minimal: List[GBElem] = []
    for g in items:
        if any(h.comp == g.comp and layout.divides(h.lm, g.lm) for h in minimal):
            continue
        minimal.append(g)
    reduced: List[GBElem] = []
    for idx, g in enumerate(minimal):
        others = [h for k, h in enumerate(minimal) if k != idx]
        rem, _alpha, _, _ = normal_form(ring, order, g.data, others, budget)
        if elem_is_zero(rem):
            continue
        reduced.append(GBElem(ring, order, rem))
    reduced.sort(key=lambda g: order.pairkey(g.comp, g.lm))
    return reduced


def elem_combination(ring: EngineRing, coeffs: Elem, gens: Sequence[Elem]) -> Elem:
    """sum_j coeffs[j] * gens[j] where coeffs[j] is a ring element."""
    acc: Elem = {}
    for j, terms in coeffs.items():
        g = gens[j]
        for m, c in terms.items():
            piece = ring.term_mul(m, c, g)
            for comp, ts in piece.items():
                d = acc.setdefault(comp, {})
                for mm, cc in ts.items():
                    v = d.get(mm, 0) + cc
                    if v:
                        d[mm] = v
                    else:
                        del d[mm]
    return {c: t for c, t in acc.items() if t}
