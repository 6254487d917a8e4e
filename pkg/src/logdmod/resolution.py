"""Syzygies, free resolutions and the Ext-nonvanishing scan.

Syzygy generators come out of the Buchberger run itself: every element in
play carries its expression over the input generators, and the relations
exposed when S-polynomials reduce to zero generate the full (left) syzygy
module, Schreyer style.  Iterating syzygies yields free resolutions whose
matrix compositions are verified to be exactly zero.

The scan at the end looks for the witness pattern on two consecutive
matrices that certifies a nonzero Ext group against functions: a column of
the later matrix lying in the left ideal of the derivations, paired with a
row of the earlier matrix whose coefficients all vanish at the origin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import _engine
from ._engine import Budget, BudgetExceeded
from .groebner import (ModuleOrder, _ring_for, from_elem, groebner_basis,
                       is_member, to_elem)
from .polyring import CommPoly
from .weyl import OpVector, WeylContext, WeylOp, smc_predicates, weyl_apply

VectorLike = Union[OpVector, tuple, list, WeylOp, CommPoly]


def _as_vectors(gens: Sequence[VectorLike]):
    """Normalize generators to equal-rank vectors; scalars become rank 1."""
    vecs = []
    rank = None
    for g in gens:
        if isinstance(g, (WeylOp, CommPoly)):
            v = (g,)
        elif isinstance(g, OpVector):
            v = tuple(g.entries)
        else:
            v = tuple(g)
        if rank is None:
            rank = len(v)
        elif len(v) != rank:
            raise ValueError("generators of unequal rank")
        vecs.append(v)
    return vecs, rank


def _scalar_mul(q, g):
    # q, g: CommPoly or WeylOp over matching context
    return q * g


def _vector_is_zero(v) -> bool:
    return all(e.is_zero() for e in v)


def syzygies(gens: Sequence[VectorLike], order: Optional[ModuleOrder] = None,
             budget: Optional[Budget] = None, prune: bool = False,
             verify: bool = True) -> List[VectorLike]:
    """Generators of the left module of relations sum_j v_j * gens_j = 0.

    Every returned vector is re-expanded against the generators and checked
    to vanish exactly.  With prune=True, generators that lie in the module
    spanned by the others are discarded (deterministically).
    """
    vecs, rank = _as_vectors(gens)
    if not vecs:
        return []
    ring, ctxinfo = _ring_for(vecs[0][0])
    order = order or ModuleOrder()
    eorder = order.engine_order(ring)
    elems = []
    lams: List[Fraction] = []
    for v in vecs:
        e, lam = to_elem(v if rank > 1 else v[0], ring)
        elems.append(e)
        lams.append(lam)
    _basis, syz = _engine.buchberger(ring, eorder, elems, budget, track=True)

    m = len(vecs)
    out = []
    for s in syz:
        entries = []
        for j in range(m):
            scalar = from_elem({0: s[j]} if j in s else {}, ring, ctxinfo, Fraction(1))
            entries.append(scalar * lams[j])
        # clear denominators and content for a canonical integer-primitive form
        den = 1
        num_gcd = 0
        for e in entries:
            for c in e.terms.values():
                den = den * c.denominator // gcd(den, c.denominator)
        for e in entries:
            for c in e.terms.values():
                num_gcd = gcd(num_gcd, (c * den).numerator)
        scale = Fraction(den, num_gcd) if num_gcd else Fraction(1)
        entries = [e * scale for e in entries]
        vec = OpVector(entries) if ring.weyl else tuple(entries)
        out.append(vec)

    if verify:
        for vec in out:
            entries = list(vec)
            acc = None
            for q, gvec in zip(entries, vecs):
                for k, gk in enumerate(gvec):
                    term = _scalar_mul(q, gk)
                    if acc is None:
                        acc = [term * 0 for _ in range(rank)]
                    acc[k] = acc[k] + term
            if acc is not None and not all(a.is_zero() for a in acc):
                raise AssertionError("syzygy verification failed; engine bug")

    if prune and len(out) > 1:
        out = _prune_generators(out, order, budget)
    return out


def _prune_generators(vecs: List[VectorLike], order, budget) -> List[VectorLike]:
    def size(v):
        return sum(len(e.terms) for e in v)

    current = list(vecs)
    # largest first so the survivors are the small generators
    for cand in sorted(vecs, key=lambda v: (-size(v), str(v))):
        if cand not in current or len(current) == 1:
            continue
        rest = [v for v in current if v is not cand]
        try:
            gb = groebner_basis(rest, order, budget)
            if is_member(cand, gb, budget):
                current = rest
        except BudgetExceeded:
            break
    return current


# ---------------------------------------------------------------------------
# presentation matrices and resolutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PresMatrix:
    """Matrix of a map of free left modules, rows = images of source basis.

    The map sends source basis element e_t to sum_u entry(t, u) * e_u; the
    matrix has source_rank rows and target_rank columns.
    """

    source_rank: int
    target_rank: int
    entries: Tuple[Tuple[WeylOp, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.source_rank or \
                any(len(row) != self.target_rank for row in self.entries):
            raise ValueError("presentation matrix shape mismatch")

    def rows(self) -> List[OpVector]:
        return [OpVector(row) for row in self.entries]

    def compose_zero(self, earlier: "PresMatrix") -> bool:
        """True when self . earlier == 0 (self maps into earlier's source)."""
        if self.target_rank != earlier.source_rank:
            raise ValueError("rank mismatch in composition")
        for t in range(self.source_rank):
            for u in range(earlier.target_rank):
                acc = None
                for k in range(self.target_rank):
                    term = self.entries[t][k] * earlier.entries[k][u]
                    acc = term if acc is None else acc + term
                if acc is not None and not acc.is_zero():
                    return False
        return True


@dataclass
class FreeResolution:
    """Chain of presentation matrices phi_1 ... phi_s over the Weyl algebra.

    certified means every composition is zero and each image generates the
    kernel of the next map; with local = True the kernel statement is
    certified on a neighborhood of the origin (the germ this library
    reasons about) rather than on all of affine space."""

    matrices: List[PresMatrix]
    augmentation: List[WeylOp]
    certified: bool
    status: str = "complete"  # complete | max_length | budget
    local: bool = False

    @property
    def length(self) -> int:
        return len(self.matrices)

    @property
    def ranks(self) -> List[int]:
        """[r_0, r_1, ..., r_s] with r_0 = 1."""
        if not self.matrices:
            return [1]
        return [self.matrices[0].target_rank] + [m.source_rank for m in self.matrices]

    def to_json_dict(self) -> dict:
        return {
            "ranks": self.ranks,
            "matrices": [
                [[str(op) for op in row] for row in m.entries] for m in self.matrices
            ],
            "augmentation": [str(g) for g in self.augmentation],
            "certified": self.certified,
            "status": self.status,
            "local_origin": self.local,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def free_resolution(gens: Sequence[WeylOp], max_length: Optional[int] = None,
                    budget: Optional[Budget] = None, prune: bool = True,
                    order: Optional[ModuleOrder] = None) -> FreeResolution:
    """Iterated syzygy resolution of the cyclic module presented by gens.

    Stops when the syzygy module vanishes (certified) or at max_length
    (default ncoords + 2).  On budget exhaustion the partial resolution is
    returned with certified = False and status "budget".  Composition of
    consecutive matrices is verified to be exactly zero.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("free_resolution needs at least one nonzero generator")
    ctx = gens[0].ctx
    if max_length is None:
        max_length = ctx.ncoords + 2
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    matrices = [PresMatrix(len(gens), 1, tuple((g,) for g in gens))]
    current: List[VectorLike] = list(gens)
    certified = False
    status = "max_length"
    while True:
        if len(matrices) >= max_length:
            status = "max_length"
            break
        try:
            syz = syzygies(current, order=order, budget=budget, prune=prune)
        except BudgetExceeded:
            status = "budget"
            break
        if not syz:
            certified = True
            status = "complete"
            break
        prev_rank = len(current)
        rows = tuple(tuple(v) for v in syz)
        matrices.append(PresMatrix(len(syz), prev_rank, rows))
        current = syz
    res = FreeResolution(matrices, list(gens), certified, status)
    for later, earlier in zip(res.matrices[1:], res.matrices):
        if not later.compose_zero(earlier):
            raise AssertionError("resolution composition is not zero; engine bug")
    return res


# ---------------------------------------------------------------------------
# the successive-matrices scan
# ---------------------------------------------------------------------------


@dataclass
class SmcReport:
    """Outcome of scanning a resolution for the Ext-nonvanishing witness.

    holds is True only under the sound row check (all coefficients of the
    row vanish at the origin).  The weaker literal row check (each row
    entry applied to 1 vanishes at the origin) is reported alongside; when
    only the literal check passes somewhere, the location is reported with
    holds = False.
    """

    holds: bool
    level: Optional[int] = None
    column_index: Optional[int] = None
    paper_literal_row_check: bool = False
    sound_row_check: bool = False

    def to_json_dict(self) -> dict:
        return {
            "holds": self.holds,
            "level": self.level,
            "column_index": self.column_index,
            "paper_literal_row_check": self.paper_literal_row_check,
            "sound_row_check": self.sound_row_check,
        }


def _row_checks(row: Sequence[WeylOp]) -> Tuple[bool, bool]:
    """(sound, literal) checks for one row."""
    sound = True
    literal = True
    for p in row:
        _, origin_vanishing = smc_predicates(p)
        if not origin_vanishing:
            sound = False
        if p.order_zero_poly().constant_term() != 0:
            literal = False
    return sound, literal


def smc_scan(res: FreeResolution, accept_partial: bool = False) -> SmcReport:
    """Find the least (level, column) where the witness pattern holds.

    At level i < length both conditions are needed: every entry of column j
    of the next matrix is derivation-only, and every entry of row j of the
    level-i matrix has origin-vanishing coefficients.  At the top level of
    a complete resolution only the row condition remains.
    """
    if not res.certified and not accept_partial:
        raise ValueError("resolution is not certified; pass accept_partial=True to scan anyway")
    s = res.length
    literal_hit: Optional[Tuple[int, int]] = None
    for i in range(1, s + 1):
        mat_i = res.matrices[i - 1]
        r_i = mat_i.source_rank
        top = (i == s)
        if top and not res.certified:
            break  # an uncertified top level proves nothing
        nxt = None if top else res.matrices[i]
        for j in range(r_i):
            if nxt is not None:
                col_ok = all(smc_predicates(nxt.entries[t][j])[0]
                             for t in range(nxt.source_rank))
                if not col_ok:
                    continue
            sound, literal = _row_checks(mat_i.entries[j])
            if sound:
                return SmcReport(True, i, j, paper_literal_row_check=literal,
                                 sound_row_check=True)
            if literal and literal_hit is None:
                literal_hit = (i, j)
    if literal_hit is not None:
        return SmcReport(False, literal_hit[0], literal_hit[1],
                         paper_literal_row_check=True, sound_row_check=False)
    return SmcReport(False)


def transpose_complex(res: FreeResolution) -> List[Callable]:
    """The operator actions on function tuples induced by the transposed
    matrices: psi_k maps h in O^{r_{k-1}} to (sum_u entry_k(t,u) . h_u)_t.
    Consecutive compositions annihilate polynomial inputs."""
    maps: List[Callable] = []
    for mat in res.matrices:
        def psi(h: Sequence[CommPoly], mat=mat) -> Tuple[CommPoly, ...]:
            h = list(h)
            if len(h) != mat.target_rank:
                raise ValueError(f"expected a tuple of length {mat.target_rank}")
            out = []
            for t in range(mat.source_rank):
                acc: Optional[CommPoly] = None
                for u in range(mat.target_rank):
                    piece = weyl_apply(mat.entries[t][u], h[u])
                    acc = piece if acc is None else acc + piece
                out.append(acc)
            return tuple(out)
        maps.append(psi)
    return maps
