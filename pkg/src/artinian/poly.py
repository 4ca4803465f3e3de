"""Sparse multivariate polynomials over F_p and the expression parser.

The expression grammar (whitespace insignificant):

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' NAT)?
    base   := NAT | IDENT | '(' expr ')'

IDENT must be a declared variable name, NAT a decimal natural number.
Anything else is rejected with a position-annotated ParseError.
"""

from __future__ import annotations

import re


class ParseError(ValueError):
    """Syntax or name error in a polynomial expression, with 0-based position."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f"at position {position}: {message}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)


def grevlex_key(exps: tuple[int, ...]) -> tuple:
    """Sort key: ascending graded-reverse-lexicographic order on exponent vectors."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomials_below(n_vars: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors with total degree < max_degree, grevlex-ascending."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, budget: int):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], remaining - 1, budget - e)

    rec([], n_vars, max_degree - 1)
    out.sort(key=grevlex_key)
    return out


class Poly:
    """A polynomial as a map exponent-vector -> nonzero coefficient in F_p."""

    __slots__ = ("variables", "p", "terms")

    def __init__(self, variables: tuple[str, ...], p: int, terms: dict[tuple[int, ...], int] | None = None):
        self.variables = tuple(variables)
        self.p = p
        clean: dict[tuple[int, ...], int] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != len(self.variables):
                raise ValueError(f"exponent vector {exps} has wrong length")
            c = coeff % p
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables, p: int) -> "Poly":
        return cls(variables, p, {})

    @classmethod
    def constant(cls, variables, p: int, c: int) -> "Poly":
        return cls(variables, p, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables, p: int, name: str) -> "Poly":
        variables = tuple(variables)
        i = variables.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, p, {exps: 1})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> int:
        return self.terms.get((0,) * len(self.variables), 0)

    def truncate(self, max_degree: int) -> "Poly":
        """Drop every term of total degree >= max_degree."""
        return Poly(self.variables, self.p, {e: c for e, c in self.terms.items() if sum(e) < max_degree})

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.variables != other.variables or self.p != other.p:
            raise ValueError("polynomials over different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.variables, self.p, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) - c
        return Poly(self.variables, self.p, terms)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(self.variables, self.p, terms)

    def scale(self, c: int) -> "Poly":
        return Poly(self.variables, self.p, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly.constant(self.variables, self.p, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.variables == other.variables
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, self.p, tuple(sorted(self.terms.items()))))

    # -- formatting ----------------------------------------------------------

    def __str__(self):
        return format_terms(self.variables, sorted(self.terms.items(), key=lambda t: grevlex_key(t[0])))

    def __repr__(self):
        return f"Poly({self})"


def format_monomial(variables: tuple[str, ...], exps: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(variables, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_terms(variables: tuple[str, ...], items) -> str:
    """Render (exponents, coefficient) pairs in the parser's grammar."""
    parts = []
    for exps, coeff in items:
        mono = format_monomial(variables, exps)
        if mono == "1":
            parts.append(str(coeff))
        elif coeff == 1:
            parts.append(mono)
        else:
            parts.append(f"{coeff}*{mono}")
    return " + ".join(parts) if parts else "0"


_TOKEN_RE = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...], p: int):
        self.text = text
        self.variables = variables
        self.p = p
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                # skip trailing whitespace before declaring failure
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                at = len(text) - len(stripped)
                raise ParseError(f"unexpected character {text[at]!r}", at)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind == "op" and val == op:
            return self.next()
        raise ParseError(f"found {val!r}" if kind != "end" else "unexpected end of input", pos, (repr(op),))

    def parse(self) -> Poly:
        poly = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos, ("'+'", "'-'", "'*'", "end of input"))
        return poly

    def expr(self) -> Poly:
        poly = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                poly = poly + rhs if val == "+" else poly - rhs
            else:
                return poly

    def term(self) -> Poly:
        poly = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                poly = poly * self.factor()
            else:
                return poly

    def factor(self) -> Poly:
        poly = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            k, v, pos = self.next()
            if k != "nat":
                raise ParseError("exponent must be a natural number", pos, ("NAT",))
            poly = poly ** int(v)
        return poly

    def base(self) -> Poly:
        kind, val, pos = self.next()
        if kind == "nat":
            return Poly.constant(self.variables, self.p, int(val))
        if kind == "ident":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r}", pos, tuple(repr(v) for v in self.variables))
            return Poly.variable(self.variables, self.p, val)
        if kind == "op" and val == "(":
            poly = self.expr()
            self.expect_op(")")
            return poly
        msg = "unexpected end of input" if kind == "end" else f"found {val!r}"
        raise ParseError(msg, pos, ("NAT", "variable", "'('"))


def parse_polynomial(text: str, variables, p: int) -> Poly:
    """Parse an expression in the grammar above; total on the grammar, else ParseError."""
    return _Parser(text, tuple(variables), p).parse()
