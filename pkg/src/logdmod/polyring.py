"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a finite map from exponent vectors to nonzero rational
coefficients.  Everything is exact: coefficients are `fractions.Fraction`,
no floating point appears anywhere.  Identity tests, divisibility tests and
determinants are therefore fully reliable, which the rest of the library
depends on.

  CommPoly   sparse polynomial, terms: Dict[Tuple[int, ...], Fraction]
  CommMatrix rectangular grid of CommPoly with exact determinants

The printing order is graded reverse lexicographic (first variable
strongest), and ``parse_poly(str(p), p.vars) == p`` for every polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

# Coefficients are arbitrary-precision rationals, always in lowest terms
# with positive denominator (Fraction guarantees both).
Rational = Fraction

Exponent = Tuple[int, ...]


class ParseError(ValueError):
    """Syntax or semantic error in a polynomial expression.

    Carries the 0-based ``position`` of the offending token in the input.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _degrevlex_key(exps: Exponent) -> tuple:
    # Graded reverse lex: total degree first, then negated exponents read
    # from the last variable backwards.  Native tuple comparison then
    # matches the order, larger key = larger monomial.
    return (sum(exps),) + tuple(-e for e in reversed(exps))


class CommPoly:
    """Sparse polynomial over Q in a fixed ordered tuple of variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Optional[Dict[Exponent, Fraction]] = None):
        self.vars: Tuple[str, ...] = tuple(vars)
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            n = len(self.vars)
            for exps, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps!r} for {n} variables")
                exps = tuple(exps)
                prev = clean.get(exps)
                if prev is None:
                    clean[exps] = c
                else:
                    s = prev + c
                    if s:
                        clean[exps] = s
                    else:
                        del clean[exps]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "CommPoly":
        return cls(vars)

    @classmethod
    def const(cls, vars: Sequence[str], value) -> "CommPoly":
        value = Fraction(value)
        if value == 0:
            return cls(vars)
        return cls(vars, {(0,) * len(tuple(vars)): value})

    @classmethod
    def variable(cls, vars: Sequence[str], name: str) -> "CommPoly":
        vars = tuple(vars)
        idx = vars.index(name)
        exps = [0] * len(vars)
        exps[idx] = 1
        return cls(vars, {tuple(exps): Fraction(1)})

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        """Value at the origin."""
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, exps: Exponent) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=_degrevlex_key)
        return m, self.terms[m]

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "CommPoly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CommPoly.const(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = CommPoly.__new__(CommPoly)
        p.vars = self.vars
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = CommPoly.__new__(CommPoly)
        p.vars = self.vars
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CommPoly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return CommPoly(self.vars)
            p = CommPoly.__new__(CommPoly)
            p.vars = self.vars
            p.terms = {m: v * c for m, v in self.terms.items()}
            return p
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        p = CommPoly.__new__(CommPoly)
        p.vars = self.vars
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = CommPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def derivative(self, var: str) -> "CommPoly":
        idx = self.vars.index(var)
        out: Dict[Exponent, Fraction] = {}
        for m, c in self.terms.items():
            e = m[idx]
            if e == 0:
                continue
            m2 = m[:idx] + (e - 1,) + m[idx + 1:]
            s = out.get(m2, Fraction(0)) + c * e
            if s:
                out[m2] = s
            else:
                out.pop(m2, None)
        p = CommPoly.__new__(CommPoly)
        p.vars = self.vars
        p.terms = out
        return p

    def extend_vars(self, vars: Sequence[str]) -> "CommPoly":
        """Reinterpret in a larger variable tuple containing self.vars."""
        vars = tuple(vars)
        pos = [vars.index(v) for v in self.vars]
        n = len(vars)
        out: Dict[Exponent, Fraction] = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, ei in enumerate(m):
                e[pos[i]] = ei
            out[tuple(e)] = c
        return CommPoly(vars, out)

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CommPoly.const(self.vars, other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- printing --------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: List[str] = []
        for m in sorted(self.terms, key=_degrevlex_key, reverse=True):
            c = self.terms[m]
            factors: List[str] = []
            for name, e in zip(self.vars, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            abs_c = -c if c < 0 else c
            if not factors:
                body = str(abs_c)
            elif abs_c == 1:
                body = "*".join(factors)
            else:
                body = str(abs_c) + "*" + "*".join(factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"CommPoly({self})"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_SYMBOLS = "+-*/^()"


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in _TOKEN_SYMBOLS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent for:  expr := [sign] term ((+|-) term)*
    term := factor (* factor)* ; factor := atom [^ int]
    atom := rational | variable | ( expr )

    Implicit multiplication is rejected on purpose: two adjacent atoms
    without ``*`` produce a syntax error at the second atom.
    """

    def __init__(self, text: str, vars: Sequence[str], atom_fn):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vars = tuple(vars)
        self.atom_fn = atom_fn  # maps a variable name to a value

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return value

    def expr(self):
        sign = 1
        kind, _, _ = self.peek()
        if kind in ("+", "-"):
            self.advance()
            sign = -1 if kind == "-" else 1
        value = self.term() * sign
        while True:
            kind, _, _ = self.peek()
            if kind == "+":
                self.advance()
                value = value + self.term()
            elif kind == "-":
                self.advance()
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            kind, text, pos = self.peek()
            if kind == "*":
                self.advance()
                value = value * self.factor()
            elif kind in ("int", "name", "("):
                raise ParseError("missing '*' between factors", pos)
            else:
                return value

    def factor(self):
        base = self.atom()
        kind, _, pos = self.peek()
        if kind == "^":
            self.advance()
            kind, text, pos = self.peek()
            if kind == "-":
                raise ParseError("negative exponent", pos)
            if kind != "int":
                raise ParseError("expected a non-negative integer exponent", pos)
            self.advance()
            return base ** int(text)
        return base

    def atom(self):
        kind, text, pos = self.advance()
        if kind == "int":
            num = int(text)
            k2, _, _ = self.peek()
            if k2 == "/":
                self.advance()
                k3, t3, p3 = self.advance()
                if k3 != "int":
                    raise ParseError("expected an integer denominator", p3)
                den = int(t3)
                if den == 0:
                    raise ParseError("zero denominator", p3)
                return self.const_fn(Fraction(num, den))
            return self.const_fn(Fraction(num))
        if kind == "name":
            try:
                return self.atom_fn(text)
            except KeyError:
                raise ParseError(f"unknown variable {text!r}", pos) from None
        if kind == "(":
            value = self.expr()
            kind, _, pos = self.advance()
            if kind != ")":
                raise ParseError("expected ')'", pos)
            return value
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)

    def const_fn(self, q: Fraction):
        raise NotImplementedError


def parse_poly(text: str, vars: Sequence[str]) -> CommPoly:
    """Parse an expression in the given variables into canonical form.

    The grammar joins terms with ``+``/``-``; a term is a ``*``-joined
    product of factors; a factor is a rational ("3", "3/4"), a variable,
    a parenthesized subexpression, or a power ``v^k`` with k >= 0.
    Whitespace is insignificant and implicit multiplication is an error.
    """
    vars = tuple(vars)
    if not vars or len(set(vars)) != len(vars):
        raise ValueError("variables must be nonempty and distinct")
    known = set(vars)

    class P(_Parser):
        def const_fn(self, q):
            return CommPoly.const(vars, q)

    def atom_fn(name: str) -> CommPoly:
        if name not in known:
            raise KeyError(name)
        return CommPoly.variable(vars, name)

    return P(text, vars, atom_fn).parse()


def gradient(f: CommPoly) -> List[CommPoly]:
    """Tuple of partial derivatives of f, one per ring variable."""
    return [f.derivative(v) for v in f.vars]


# ---------------------------------------------------------------------------
# matrices and determinants
# ---------------------------------------------------------------------------


class CommMatrix:
    """Rectangular matrix of polynomials sharing one variable tuple."""

    __slots__ = ("rows", "cols", "entries", "vars")

    def __init__(self, entries: Sequence[Sequence[CommPoly]]):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("matrix must have at least one row and column")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise ValueError("matrix rows have unequal lengths")
        vars = entries[0][0].vars
        for row in entries:
            for p in row:
                if p.vars != vars:
                    raise ValueError("matrix entries over different variables")
        self.rows = len(entries)
        self.cols = cols
        self.entries = entries
        self.vars = vars

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def _det_cofactor(rows: List[List[CommPoly]], vars) -> CommPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = CommPoly.zero(vars)
    for j in range(n):
        a = rows[0][j]
        if a.is_zero():
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        term = a * _det_cofactor(minor, vars)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def determinant_cofactor(m: CommMatrix) -> CommPoly:
    """Determinant by Laplace expansion along the first row."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    return _det_cofactor([list(row) for row in m.entries], m.vars)


def determinant_bareiss(m: CommMatrix) -> CommPoly:
    """Determinant by fraction-free (Bareiss) elimination.

    Every division performed is exact by the Sylvester identity, so the
    result is the exact polynomial determinant.
    """
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    a = [list(row) for row in m.entries]
    vars = m.vars
    sign = 1
    prev = CommPoly.const(vars, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            pivot_row = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if pivot_row is None:
                return CommPoly.zero(vars)
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                q = exact_divide(num, prev)
                if q is None:
                    raise AssertionError("Bareiss division failed; matrix state corrupt")
                a[i][j] = q
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def determinant(m: CommMatrix) -> CommPoly:
    """Exact determinant.

    Cofactor expansion for sizes up to 3, fraction-free elimination above;
    the two implementations agree (this is exercised by the test suite).
    """
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if m.rows <= 3:
        return determinant_cofactor(m)
    return determinant_bareiss(m)


def exact_divide(num: CommPoly, den: CommPoly) -> Optional[CommPoly]:
    """Exact quotient num/den, or None when den does not divide num.

    Never returns an approximate quotient.  Division by the zero
    polynomial raises ZeroDivisionError.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.vars != den.vars:
        raise ValueError("variable mismatch in exact_divide")
    vars = num.vars
    lt_m, lt_c = den.leading_term()
    quotient: Dict[Exponent, Fraction] = {}
    rem = num
    while not rem.is_zero():
        m, c = rem.leading_term()
        q = tuple(a - b for a, b in zip(m, lt_m))
        if any(e < 0 for e in q):
            return None
        qc = c / lt_c
        quotient[q] = quotient.get(q, Fraction(0)) + qc
        qpoly = CommPoly(vars, {q: qc})
        rem = rem - qpoly * den
    return CommPoly(vars, quotient)
