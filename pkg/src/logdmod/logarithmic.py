"""Logarithmic vector fields of a divisor and everything built on them.

For a polynomial f, a logarithmic derivation is a vector field
delta = sum a_i d_i with delta(f) = a * f; the pair (coefficients,
cofactor) is exactly a syzygy of (df/dx_1, ..., df/dx_n, f).  This module
computes generators, decides Saito freeness by the determinant criterion,
verifies the Spencer (logarithmic Koszul) complex is a resolution, checks
holonomicity through principal symbols, and implements the two cheap
shortcuts: detection of a smooth product factor and the divergence
criterion that certifies non-isomorphy without any b-function work.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ._engine import Budget, BudgetExceeded
from .groebner import (Basis, ModuleOrder, TermOrder, eliminate_weight,
                       groebner_basis, is_member)
from .polyring import (CommMatrix, CommPoly, determinant, exact_divide,
                       gradient)
from .resolution import FreeResolution, PresMatrix, syzygies
from .weyl import OpVector, WeylContext, WeylOp, commutator, weyl_apply


@dataclass(frozen=True)
class LogDerivation:
    """delta = sum coeffs[i] * d_i with delta(f) = cofactor * f."""

    coeffs: Tuple[CommPoly, ...]
    cofactor: CommPoly

    def verify(self, f: CommPoly) -> bool:
        acc = CommPoly.zero(f.vars)
        for a, fi in zip(self.coeffs, gradient(f)):
            acc = acc + a * fi
        return acc == self.cofactor * f

    def scale(self, c) -> "LogDerivation":
        return LogDerivation(tuple(a * c for a in self.coeffs), self.cofactor * c)

    def as_operator(self, ctx: WeylContext) -> WeylOp:
        acc = WeylOp.zero(ctx)
        for a, name in zip(self.coeffs, ctx.names):
            acc = acc + WeylOp.from_poly(ctx, a) * WeylOp.partial(ctx, name)
        return acc

    def __str__(self):
        names = self.coeffs[0].vars
        parts = [f"({a})*d{v}" for a, v in zip(self.coeffs, names) if not a.is_zero()]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class LogBasis:
    """n logarithmic derivations whose coefficient determinant is unit * f."""

    derivations: Tuple[LogDerivation, ...]
    det_unit: Fraction  # value of the unit at the origin; nonzero

    def coefficient_matrix(self) -> CommMatrix:
        return CommMatrix([list(d.coeffs) for d in self.derivations])


@dataclass
class SpencerData:
    structure_constants: Dict[Tuple[int, int], Tuple[CommPoly, ...]]
    spencer_matrices: List[PresMatrix]


def _strip_row_content(coeffs: Sequence[CommPoly], f: CommPoly,
                       grads: Sequence[CommPoly]) -> Optional[LogDerivation]:
    """Divide a derivation by the common monomial content of its
    coefficients when the result is still logarithmic."""
    vars = f.vars
    polys = [p for p in coeffs if not p.is_zero()]
    if not polys:
        return None
    mins = [min(min(m[i] for m in p.terms) for p in polys) for i in range(len(vars))]
    if any(mins):
        mono = CommPoly(vars, {tuple(mins): Fraction(1)})
        stripped = [exact_divide(p, mono) if not p.is_zero() else p for p in coeffs]
        acc = CommPoly.zero(vars)
        for a, fi in zip(stripped, grads):
            acc = acc + a * fi
        cof = exact_divide(acc, f)
        if cof is not None:
            return LogDerivation(tuple(stripped), cof)
    return None


def log_derivations(f: CommPoly, budget: Optional[Budget] = None,
                    prune: bool = True) -> List[LogDerivation]:
    """Generators of the logarithmic derivations of (f = 0).

    Computed as the syzygies of (f_1, ..., f_n, f); a syzygy
    (a_1, ..., a_n, c) yields delta = sum a_i d_i with cofactor -c.
    A common monomial factor of a generator's coefficients is divided out
    when the quotient is still logarithmic (the derivation module is
    saturated, so this only normalizes generators).  Emits no warning
    machinery here; reducedness of f is the caller's concern (see
    squarefree_warning).
    """
    if f.is_zero():
        raise ValueError("zero polynomial does not define a divisor")
    grads = gradient(f)
    gens = grads + [f]
    syz = syzygies(gens, budget=budget, prune=prune)
    out = []
    for vec in syz:
        entries = list(vec)
        d = LogDerivation(tuple(entries[:-1]), -entries[-1])
        stripped = _strip_row_content(d.coeffs, f, grads)
        if stripped is not None:
            d = stripped
        if not d.verify(f):
            raise AssertionError("logarithmic derivation identity failed; engine bug")
        out.append(d)
    return out


def tilde_ideal(f: CommPoly, k: int, gens: Optional[Sequence[LogDerivation]] = None,
                budget: Optional[Budget] = None) -> List[WeylOp]:
    """Generators delta + k * cofactor over the logarithmic generators.

    This is the contraction of each syzygy of (f_1, ..., f_n, f) with the
    column (d_1, ..., d_n, -k)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if gens is None:
        gens = log_derivations(f, budget=budget)
    ctx = WeylContext(f.vars)
    out = []
    for d in gens:
        op = d.as_operator(ctx) + WeylOp.from_poly(ctx, d.cofactor * k)
        out.append(op)
    return out


# ---------------------------------------------------------------------------
# Euler homogeneity and smooth-factor detection
# ---------------------------------------------------------------------------


@dataclass
class EulerRecord:
    status: str  # "euler" | "not_euler_globally"
    witness: Optional[LogDerivation] = None

    def to_json_dict(self) -> dict:
        return {"status": self.status,
                "witness": str(self.witness) if self.witness else None}


def euler_check(f: CommPoly, gens: Optional[Sequence[LogDerivation]] = None,
                budget: Optional[Budget] = None) -> EulerRecord:
    """Decide local Euler homogeneity at the origin.

    Some combination of logarithmic generators has a cofactor that is a
    unit at 0 exactly when one generator's cofactor has nonzero constant
    term; the rescaled generator is then a witness with delta(f) = f up to
    a unit.  A global certificate f in (f_1, ..., f_n) implies the local
    one, which is cross-checked.
    """
    if gens is None:
        gens = log_derivations(f, budget=budget)
    for d in gens:
        c0 = d.cofactor.constant_term()
        if c0 != 0:
            return EulerRecord("euler", d.scale(Fraction(1) / c0))
    # consistency: a global membership f in (grad f) would contradict the
    # failed local test, since the syzygy generators generate all relations
    try:
        gb = groebner_basis(gradient(f), budget=budget)
        if is_member(f, gb, budget):
            raise AssertionError("global Euler certificate exists but local test failed")
    except BudgetExceeded:
        pass
    return EulerRecord("not_euler_globally")


@dataclass
class ProductRecord:
    status: str  # "smooth_factor" | "none"
    generator_index: Optional[int] = None
    variable: Optional[str] = None
    constant: Optional[Fraction] = None

    def to_json_dict(self) -> dict:
        return {"status": self.status, "generator_index": self.generator_index,
                "variable": self.variable,
                "constant": str(self.constant) if self.constant is not None else None}


def product_detection(gens: Sequence[LogDerivation]) -> ProductRecord:
    """Report a logarithmic vector field that does not vanish at the origin.

    Such a field straightens to a coordinate direction, so the divisor is a
    product with a smooth factor along it."""
    for idx, d in enumerate(gens):
        for slot, a in enumerate(d.coeffs):
            c0 = a.constant_term()
            if c0 != 0:
                return ProductRecord("smooth_factor", idx, a.vars[slot], c0)
    return ProductRecord("none")


# ---------------------------------------------------------------------------
# Saito freeness
# ---------------------------------------------------------------------------


@dataclass
class FreenessRecord:
    status: str  # "free" | "not_free_detected" | "inconclusive"
    basis: Optional[LogBasis] = None
    unit: Optional[CommPoly] = None  # full unit polynomial u with det = u*f
    subset: Optional[Tuple[int, ...]] = None

    def to_json_dict(self) -> dict:
        return {"status": self.status,
                "det_unit": str(self.basis.det_unit) if self.basis else None,
                "unit": str(self.unit) if self.unit is not None else None,
                "subset": list(self.subset) if self.subset else None}


SAITO_SUBSET_CAP = 12


def saito_free_check(gens: Sequence[LogDerivation], f: CommPoly) -> FreenessRecord:
    """Determinant test for freeness of the logarithmic derivations.

    Searches n-subsets of the generators for a coefficient matrix with
    det = u * f and u(0) != 0.  Because the generators generate the module,
    freeness at the origin forces some subset to be a basis; exhausting all
    subsets without a hit therefore detects non-freeness.  A subset whose
    unit u is a nonzero constant is preferred: the transition matrix to any
    basis then has constant determinant, so such a subset is a basis of the
    full polynomial module and downstream structure constants stay
    polynomial.  Generator lists longer than SAITO_SUBSET_CAP return
    inconclusive.
    """
    gens = list(gens)
    n = len(f.vars)
    if len(gens) < n:
        return FreenessRecord("not_free_detected")
    if len(gens) > SAITO_SUBSET_CAP:
        return FreenessRecord("inconclusive")
    local_hit: Optional[FreenessRecord] = None
    for subset in itertools.combinations(range(len(gens)), n):
        mat = CommMatrix([list(gens[i].coeffs) for i in subset])
        det = determinant(mat)
        if det.is_zero():
            continue
        u = exact_divide(det, f)
        if u is None:
            continue
        u0 = u.constant_term()
        if u0 == 0:
            continue
        basis = LogBasis(tuple(gens[i] for i in subset), u0)
        rec = FreenessRecord("free", basis, u, subset)
        if u.is_constant():
            return rec
        if local_hit is None:
            local_hit = rec
    if local_hit is not None:
        return local_hit
    return FreenessRecord("not_free_detected")


# ---------------------------------------------------------------------------
# Spencer complex
# ---------------------------------------------------------------------------


class StructureConstantError(ValueError):
    """Exact division failed while expressing a commutator in the basis."""


def structure_constants(basis: LogBasis, f: CommPoly) -> Dict[Tuple[int, int], Tuple[CommPoly, ...]]:
    """c with [delta_i, delta_j] = sum_k c[(i,j)][k] * delta_k, exact.

    Solved in closed form through the adjugate: the coefficient vector of
    the commutator times adj(A) must be exactly divisible by det(A) = u*f.
    """
    ders = basis.derivations
    n = len(ders)
    vars = f.vars
    a = [[d.coeffs[j] for j in range(n)] for d in ders]
    amat = CommMatrix(a)
    det = determinant(amat)
    # adjugate via cofactors: adj[m][k] = (-1)^(m+k) * minor(k, m)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            if minor:
                md = determinant(CommMatrix(minor))
            else:
                md = CommPoly.const(vars, 1)
            adj[j][i] = md if (i + j) % 2 == 0 else -md
    out: Dict[Tuple[int, int], Tuple[CommPoly, ...]] = {}
    grads = {}
    for idx, d in enumerate(ders):
        grads[idx] = [[c.derivative(v) for v in vars] for c in d.coeffs]
    for i in range(n):
        for j in range(i + 1, n):
            # commutator coefficient vector w: [di, dj]_m = di(a_jm) - dj(a_im)
            w = []
            for m in range(n):
                acc = CommPoly.zero(vars)
                for l in range(n):
                    acc = acc + a[i][l] * grads[j][m][l] - a[j][l] * grads[i][m][l]
                w.append(acc)
            cs = []
            for k in range(n):
                num = CommPoly.zero(vars)
                for m in range(n):
                    num = num + w[m] * adj[m][k]
                q = exact_divide(num, det)
                if q is None:
                    raise StructureConstantError(
                        f"structure constant ({i},{j},{k}) is not polynomial")
                cs.append(q)
            # re-expansion check: sum_k c_k delta_k == [delta_i, delta_j]
            for m in range(n):
                acc = CommPoly.zero(vars)
                for k in range(n):
                    acc = acc + cs[k] * a[k][m]
                if acc != w[m]:
                    raise AssertionError("structure constant re-expansion failed")
            out[(i, j)] = tuple(cs)
    return out


def _insert_sign(m: int, rest: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
    """Position sign for inserting index m into the sorted tuple rest."""
    pos = sum(1 for r in rest if r < m)
    merged = tuple(sorted(rest + (m,)))
    return (-1) ** pos, merged


def spencer_matrices(basis: LogBasis, f: CommPoly, k: int,
                     consts: Optional[Dict] = None) -> List[PresMatrix]:
    """Matrices of the logarithmic Koszul complex for the twist k.

    Rank over level p is C(n, p); the level-p map sends the wedge of the
    basis fields to the alternating sum of (delta + k * cofactor) actions
    plus the bracket insertions expanded through structure constants.
    With k = 0 this presents the module cut out by the derivations alone.
    """
    ders = basis.derivations
    n = len(ders)
    vars = f.vars
    ctx = WeylContext(vars)
    if consts is None:
        consts = structure_constants(basis, f)
    twisted = [d.as_operator(ctx) + WeylOp.from_poly(ctx, d.cofactor * k) for d in ders]

    def wedge_basis(p: int) -> List[Tuple[int, ...]]:
        return list(itertools.combinations(range(n), p))

    matrices = []
    for p in range(1, n + 1):
        src = wedge_basis(p)
        dst = wedge_basis(p - 1)
        dst_index = {t: i for i, t in enumerate(dst)}
        entries = []
        for I in src:
            row = [WeylOp.zero(ctx) for _ in dst]
            for r, ir in enumerate(I):
                rest = tuple(x for x in I if x != ir)
                sign = (-1) ** r
                col = dst_index[rest]
                row[col] = row[col] + twisted[ir].scale(sign)
            for r in range(len(I)):
                for s in range(r + 1, len(I)):
                    ir, is_ = I[r], I[s]
                    rest = tuple(x for x in I if x != ir and x != is_)
                    cvec = consts[(ir, is_)]
                    for m in range(n):
                        if cvec[m].is_zero() or m in rest:
                            continue
                        ins_sign, merged = _insert_sign(m, rest)
                        col = dst_index[merged]
                        total = (-1) ** (r + s) * ins_sign
                        row[col] = row[col] + WeylOp.from_poly(ctx, cvec[m]).scale(total)
            entries.append(tuple(row))
        matrices.append(PresMatrix(len(src), len(dst), tuple(entries)))
    return matrices


@dataclass
class SpencerRecord:
    status: str  # "spencer" | "not_spencer" | "inconclusive"
    data: Optional[SpencerData] = None
    resolution: Optional[FreeResolution] = None
    holonomic: Optional["HolonomicRecord"] = None
    local_origin: bool = False  # exactness certified on a neighborhood of 0

    def to_json_dict(self) -> dict:
        return {"status": self.status, "local_origin": self.local_origin}


def _local_membership_certificate(v: OpVector, rows: Sequence,
                                  target_basis: Basis,
                                  budget: Optional[Budget]) -> bool:
    """Certify that v lies in the module of rows after inverting a
    polynomial nonzero at the origin.

    The transporter {P : P v in <rows>} is read off the first components
    of the syzygies of (v, rows...); eliminating the derivations from it
    leaves its polynomial part, and any member with nonzero constant term
    makes v a member of the localized module at 0.  This is exactly the
    stalk statement needed for germ-level exactness."""
    vecs = [v] + list(rows)
    syz = syzygies(vecs, budget=budget, prune=False)
    transporter = [s[0] for s in syz if not s[0].is_zero()]
    if not transporter:
        return False
    ctx = transporter[0].ctx
    n = ctx.ncoords
    weight = [0] * n + [1] * n
    try:
        polys = eliminate_weight(transporter, weight, "eliminate_positive", budget)
    except BudgetExceeded:
        return False
    for h in polys:
        hp = h.order_zero_poly()
        if hp.constant_term() != 0:
            hv = OpVector([h * e for e in v])
            if is_member(hv, target_basis, budget):
                return True
    return False


def spencer_resolution(basis: LogBasis, f: CommPoly, k: int,
                       budget: Optional[Budget] = None
                       ) -> Tuple[Optional[FreeResolution], Optional[SpencerData], str]:
    """Build the logarithmic Koszul complex and certify it is a resolution
    on a neighborhood of the origin.

    Exactness is verified level by level: the syzygies of each matrix's
    rows must lie in the module of the next matrix's rows, either globally
    or (since the target statement concerns germs at 0) after inverting a
    polynomial not vanishing at the origin, and the top matrix must be
    injective in the same sense.  Returns (resolution, data, status) with
    status "ok" (global exactness), "ok_local" (exactness certified at the
    origin), "not_exact", "bad_basis" (the supplied basis generates only
    the local stalk, so its structure constants are not polynomial) or
    "budget"."""
    try:
        consts = structure_constants(basis, f)
        mats = spencer_matrices(basis, f, k, consts)
    except StructureConstantError:
        return None, None, "bad_basis"
    n = len(basis.derivations)
    for later, earlier in zip(mats[1:], mats):
        if not later.compose_zero(earlier):
            raise AssertionError("Spencer complex does not compose to zero")
    local = False
    try:
        for p in range(n):
            rows = [OpVector(r) if len(r) > 1 else r[0] for r in
                    (tuple(row) for row in mats[p].entries)]
            syz = syzygies(rows, budget=budget, prune=False)
            if p + 1 < n:
                if mats[p + 1].target_rank > 1:
                    target = [OpVector(r) for r in mats[p + 1].entries]
                else:
                    target = [r[0] for r in mats[p + 1].entries]
                tb = groebner_basis(target, budget=budget)
                missing = [v for v in syz if not is_member(v, tb, budget)]
                for v in missing:
                    if not _local_membership_certificate(v, target, tb, budget):
                        return None, None, "not_exact"
                if missing:
                    local = True
                # the next rows are verified syzygies through compose_zero,
                # so the reverse inclusion Im subset Ker holds identically
            else:
                # the algebra is a domain, so the top map, a single row with
                # a nonzero entry, admits no nonzero syzygy at all
                if syz:
                    return None, None, "not_exact"
    except BudgetExceeded:
        return None, None, "budget"
    gens = [row[0] for row in mats[0].entries]
    res = FreeResolution(mats, gens, certified=True, status="complete", local=local)
    data = SpencerData(consts, mats)
    return res, data, ("ok_local" if local else "ok")


def spencer_check(basis: LogBasis, f: CommPoly,
                  budget: Optional[Budget] = None) -> SpencerRecord:
    """Certify the Spencer property: the logarithmic Koszul complex on the
    basis resolves the module presented by the derivations near the
    origin, and that module is holonomic."""
    res, data, status = spencer_resolution(basis, f, 0, budget)
    if status in ("budget", "bad_basis"):
        return SpencerRecord("inconclusive")
    if status not in ("ok", "ok_local"):
        return SpencerRecord("not_spencer")
    local = status == "ok_local"
    ctx = WeylContext(f.vars)
    gens = [d.as_operator(ctx) for d in basis.derivations]
    try:
        hol = holonomic_check(gens, budget)
    except BudgetExceeded:
        return SpencerRecord("inconclusive", data, res, local_origin=local)
    if hol.status != "holonomic":
        return SpencerRecord("not_spencer", data, res, hol, local_origin=local)
    return SpencerRecord("spencer", data, res, hol, local_origin=local)


# ---------------------------------------------------------------------------
# holonomicity
# ---------------------------------------------------------------------------


@dataclass
class HolonomicRecord:
    status: str  # "holonomic" | "not_holonomic"
    dimension: int

    def to_json_dict(self) -> dict:
        return {"status": self.status, "dimension": self.dimension}


def holonomic_check(gens: Sequence[WeylOp], budget: Optional[Budget] = None,
                    ctx: Optional[WeylContext] = None) -> HolonomicRecord:
    """Characteristic-variety dimension test.

    A Groebner basis under an order refining the derivation-degree
    filtration yields the principal symbols; the Krull dimension of their
    zero set is read off the leading-monomial ideal by maximal independent
    variable sets.  Holonomic means dimension equals the number of
    coordinates.  An empty generator list is the zero ideal: its
    characteristic variety is the whole cotangent space (dimension 2n).
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        if ctx is None:
            raise ValueError("holonomic_check on the zero ideal needs an explicit context")
        return HolonomicRecord("not_holonomic", 2 * ctx.ncoords)
    ctx = gens[0].ctx
    if any(g.has_params() for g in gens):
        raise ValueError("holonomic_check expects parameter-free operators")
    n = ctx.ncoords
    order = TermOrder.weighted(u=(0,) * n, v=(1,) * n)
    gb = groebner_basis(gens, order, budget)
    if gb.is_trivial():
        # the unit ideal presents the zero module, vacuously holonomic
        return HolonomicRecord("holonomic", -1)
    symvars = ctx.coords + ctx.dnames
    symbols = []
    for g in gb.generators:
        m = g.max_dorder()
        terms: Dict[tuple, Fraction] = {}
        for (a, b, _), c in g.terms.items():
            if sum(b) == m:
                terms[tuple(a) + tuple(b)] = c
        symbols.append(CommPoly(symvars, terms))
    dim = _krull_dimension(symbols, budget)
    status = "holonomic" if dim == n else "not_holonomic"
    return HolonomicRecord(status, dim)


def _krull_dimension(polys: Sequence[CommPoly], budget) -> int:
    vars = polys[0].vars
    gb = groebner_basis(polys, budget=budget)
    if gb.is_trivial():
        return -1
    lead_supports = []
    for g in gb.generators:
        m, _ = g.leading_term()
        lead_supports.append(frozenset(i for i, e in enumerate(m) if e))
    nv = len(vars)
    best = 0
    for size in range(nv, 0, -1):
        for subset in itertools.combinations(range(nv), size):
            s = set(subset)
            if all(not sup <= s for sup in lead_supports):
                return size
    return best


# ---------------------------------------------------------------------------
# divergence shortcut
# ---------------------------------------------------------------------------


@dataclass
class DivergenceRecord:
    status: str  # "not_isomorphic_certified" | "inapplicable"
    entries: Optional[List[str]] = None

    def to_json_dict(self) -> dict:
        return {"status": self.status}


def divergence_shortcut(basis: LogBasis) -> DivergenceRecord:
    """Inspect the top matrix of the dual Spencer shape directly.

    Its entries are delta_i + div(delta_i); when every entry has all
    coefficients vanishing at the origin, the constant tuple is a nonzero
    Ext class and the comparison verdict is certified negative without any
    further computation."""
    from .weyl import smc_predicates  # local import keeps module load light
    vars = basis.derivations[0].coeffs[0].vars
    ctx = WeylContext(vars)
    ops = []
    for d in basis.derivations:
        div = CommPoly.zero(vars)
        for a, v in zip(d.coeffs, vars):
            div = div + a.derivative(v)
        ops.append(d.as_operator(ctx) + WeylOp.from_poly(ctx, div))
    if all(smc_predicates(op)[1] for op in ops):
        return DivergenceRecord("not_isomorphic_certified", [str(o) for o in ops])
    return DivergenceRecord("inapplicable", [str(o) for o in ops])


# ---------------------------------------------------------------------------
# squarefreeness heuristic
# ---------------------------------------------------------------------------


def _univariate_on_line(f: CommPoly, direction: Sequence[int]) -> List[Fraction]:
    """Coefficients of t -> f(c_1 t, ..., c_n t)."""
    deg = f.total_degree()
    coeffs = [Fraction(0)] * (deg + 1)
    for m, c in f.terms.items():
        d = sum(m)
        scale = Fraction(1)
        for e, ci in zip(m, direction):
            scale *= Fraction(ci) ** e
        coeffs[d] += c * scale
    return coeffs


def _uni_gcd_degree(a: List[Fraction], b: List[Fraction]) -> int:
    def norm(p):
        while p and p[-1] == 0:
            p.pop()
        return p
    a, b = norm(list(a)), norm(list(b))
    while b:
        # a mod b
        while len(a) >= len(b) and a:
            q = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] -= q * bc
            a = norm(a)
        a, b = b, a
    return len(a) - 1 if a else -1


def squarefree_warning(f: CommPoly) -> Optional[str]:
    """Heuristic non-reducedness warning.

    Specializes f along a few fixed rational lines and checks the
    univariate gcd with the derivative; a nontrivial common factor on some
    line suggests f is not squarefree, in which case the logarithmic
    machinery assumes a wrong input.  Returns a warning string or None.
    """
    n = len(f.vars)
    if f.total_degree() <= 0:
        return None
    for direction in ([1] * n, list(range(1, n + 1)), [3, 5, 7, 11, 13][:n]):
        coeffs = _univariate_on_line(f, direction)
        if all(c == 0 for c in coeffs):
            continue
        deriv = [c * (i + 1) for i, c in enumerate(coeffs[1:])]
        if _uni_gcd_degree(coeffs, deriv) > 0:
            return ("input may not be reduced (squarefree test failed along "
                    f"the line with direction {tuple(direction)})")
    return None
