"""Finite-dimensional local algebras A = k[x_1..x_n]/(I + m^T) over a prime field.

Construction is pure linear algebra: the image of the ideal inside the space
of polynomials of degree < T is the span of all truncated monomial multiples
of the generators, so one echelon reduction yields a canonical monomial basis
(the non-pivot "standard" monomials) and a normal-form reducer.  With the
monomial axis in ascending grevlex order, every rewrite replaces a monomial
by grevlex-larger ones, so the m-adic degree stays visible: the image of m^d
is exactly the span of standard monomials of degree >= d.

The algebra is local and Artinian by construction: m^T = 0, and an element is
a unit iff its coordinate on the basis element 1 is nonzero.
"""

from __future__ import annotations

import numpy as np

from .linalg import PrimeField, SubspaceFp, matmul_mod, rref, solve
from .poly import Poly, format_terms, grevlex_key, monomials_below, parse_polynomial


class AlgebraElement:
    """An element of a LocalAlgebra, stored as coordinates over the monomial basis."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: "LocalAlgebra", coords: np.ndarray):
        self.algebra = algebra
        self.coords = np.asarray(coords, dtype=np.int64) % algebra.p

    def _check(self, other: "AlgebraElement"):
        if self.algebra is not other.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coords)

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraElement(self.algebra, self.coords * (other % self.algebra.p))
        self._check(other)
        return AlgebraElement(self.algebra, self.algebra.mult_matrix(self) @ other.coords % self.algebra.p)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.algebra.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra is other.algebra
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((id(self.algebra), self.coords.tobytes()))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def is_unit(self) -> bool:
        """Locality: units are exactly the elements with nonzero constant coordinate."""
        return int(self.coords[0]) != 0

    def inverse(self) -> "AlgebraElement":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        A = self.algebra
        one = np.zeros(A.dim, dtype=np.int64)
        one[0] = 1
        inv = solve(A.mult_matrix(self), one, A.p)
        assert inv is not None
        return AlgebraElement(A, inv)

    def order(self) -> int:
        """m-adic order: largest d with self in m^d (= dim A for 0)."""
        nz = np.nonzero(self.coords)[0]
        if nz.size == 0:
            return self.algebra.dim
        return min(self.algebra.basis_degrees[i] for i in nz)

    def __str__(self):
        A = self.algebra
        items = [(A.monomial_basis[i], int(c)) for i, c in enumerate(self.coords) if c]
        return format_terms(A.variables, items)

    def __repr__(self):
        return f"<{self} in {self.algebra.short_name()}>"


class LocalAlgebra:
    """A = k[x_1..x_n]/(ideal_gens + m^truncation) as a concrete k-algebra."""

    def __init__(self, p: int, variables, truncation: int, ideal_gens: list[Poly] | None = None):
        self.field = PrimeField(p)
        self.p = p
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if truncation < 1:
            raise ValueError("truncation must be >= 1")
        self.truncation = truncation
        self.ideal_gens = list(ideal_gens or [])

        n = len(self.variables)
        mons = monomials_below(n, truncation)
        mon_index = {m: i for i, m in enumerate(mons)}
        n_mons = len(mons)

        # span of the ideal image inside the degree-<T monomial space
        rel_rows = []
        for g in self.ideal_gens:
            if g.variables != self.variables or g.p != p:
                raise ValueError("generator over a different polynomial ring")
            if g.constant_term():
                raise ValueError(f"ideal generator {g} has a nonzero constant term")
            for m in mons:
                prod = (Poly(self.variables, p, {m: 1}) * g).truncate(truncation)
                if prod.is_zero():
                    continue
                row = np.zeros(n_mons, dtype=np.int64)
                for e, c in prod.terms.items():
                    row[mon_index[e]] = c
                rel_rows.append(row)
        if rel_rows:
            self._relations = SubspaceFp.from_rows(np.array(rel_rows), p, n_mons)
        else:
            self._relations = SubspaceFp.zero(p, n_mons)

        pivot_set = set(self._relations.pivots)
        standard = [i for i in range(n_mons) if i not in pivot_set]
        self.monomial_basis: tuple[tuple[int, ...], ...] = tuple(mons[i] for i in standard)
        self._standard_positions = np.array(standard, dtype=np.int64)
        self.dim = len(standard)
        self.basis_degrees = tuple(sum(m) for m in self.monomial_basis)
        assert self.monomial_basis[0] == (0,) * n, "the basis element 1 must survive reduction"

        # variable action matrices on A, via the truncated monomial space
        self._all_monomials = mons
        self._mon_index = mon_index
        self.var_actions = [self._variable_action(i) for i in range(n)]
        self._act_mono: list[np.ndarray] | None = None
        self._mult_cache: dict[bytes, np.ndarray] = {}
        self._maximal_ideal: Ideal | None = None
        self._regular_module = None
        self._residue_module = None

    # -- construction internals ---------------------------------------------

    def _reduce_full_vector(self, vec: np.ndarray) -> np.ndarray:
        """Normal form of a degree-<T coefficient vector: coordinates over the basis."""
        reduced = self._relations.reduce(vec)
        return reduced[self._standard_positions]

    def _variable_action(self, var_index: int) -> np.ndarray:
        n_mons = len(self._all_monomials)
        cols = np.zeros((self.dim, self.dim), dtype=np.int64)
        for j, mono in enumerate(self.monomial_basis):
            shifted = list(mono)
            shifted[var_index] += 1
            shifted = tuple(shifted)
            if sum(shifted) >= self.truncation:
                continue
            vec = np.zeros(n_mons, dtype=np.int64)
            vec[self._mon_index[shifted]] = 1
            cols[:, j] = self._reduce_full_vector(vec)
        return cols

    # -- elements ------------------------------------------------------------

    def element(self, source) -> AlgebraElement:
        """Coerce a string, Poly, int, or coordinate vector to an element of A."""
        if isinstance(source, AlgebraElement):
            if source.algebra is not self:
                raise ValueError("element of a different algebra")
            return source
        if isinstance(source, str):
            source = parse_polynomial(source, self.variables, self.p)
        if isinstance(source, Poly):
            return self.reduce_poly(source)
        if isinstance(source, int):
            coords = np.zeros(self.dim, dtype=np.int64)
            coords[0] = source % self.p
            return AlgebraElement(self, coords)
        return AlgebraElement(self, np.asarray(source, dtype=np.int64))

    def reduce_poly(self, poly: Poly) -> AlgebraElement:
        if poly.variables != self.variables or poly.p != self.p:
            raise ValueError("polynomial over a different ring")
        vec = np.zeros(len(self._all_monomials), dtype=np.int64)
        for e, c in poly.truncate(self.truncation).terms.items():
            vec[self._mon_index[e]] = c
        return AlgebraElement(self, self._reduce_full_vector(vec))

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, np.zeros(self.dim, dtype=np.int64))

    def one(self) -> AlgebraElement:
        return self.element(1)

    def variable(self, name: str) -> AlgebraElement:
        return self.element(Poly.variable(self.variables, self.p, name))

    def variable_elements(self) -> list[AlgebraElement]:
        return [self.variable(v) for v in self.variables]

    def basis_element(self, i: int) -> AlgebraElement:
        coords = np.zeros(self.dim, dtype=np.int64)
        coords[i] = 1
        return AlgebraElement(self, coords)

    # -- multiplication --------------------------------------------------------

    def action_monomials(self) -> list[np.ndarray]:
        """Multiplication matrix of each basis monomial, in basis order."""
        if self._act_mono is None:
            self._act_mono = action_monomials(self, self.var_actions)
        return self._act_mono

    def mult_matrix(self, a: AlgebraElement) -> np.ndarray:
        """The k-linear map `multiply by a` on A."""
        key = a.coords.tobytes()
        cached = self._mult_cache.get(key)
        if cached is not None:
            return cached
        mats = self.action_monomials()
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, c in enumerate(a.coords):
            if c:
                out += int(c) * mats[i]
        out %= self.p
        if len(self._mult_cache) < 4096:
            self._mult_cache[key] = out
        return out

    # -- distinguished ideals / modules ---------------------------------------

    def maximal_ideal(self) -> "Ideal":
        """m = (x_1..x_n)A; with the grevlex basis this is the span of deg >= 1 monomials."""
        if self._maximal_ideal is None:
            rows = np.eye(self.dim, dtype=np.int64)[1:]
            self._maximal_ideal = Ideal(self, SubspaceFp.from_rows(rows, self.p, self.dim) if self.dim > 1 else SubspaceFp.zero(self.p, self.dim))
        return self._maximal_ideal

    def unit_ideal(self) -> "Ideal":
        return Ideal(self, SubspaceFp.full(self.p, self.dim))

    def nilpotency_index(self) -> int:
        """Least t with m^t = 0 (equals 1 + the top degree in the basis)."""
        return max(self.basis_degrees) + 1 if self.dim > 1 else 1

    def power_of_maximal(self, d: int) -> SubspaceFp:
        """m^d as a subspace: standard monomials of degree >= d (grevlex visibility)."""
        rows = [i for i, deg in enumerate(self.basis_degrees) if deg >= d]
        if not rows:
            return SubspaceFp.zero(self.p, self.dim)
        return SubspaceFp.from_rows(np.eye(self.dim, dtype=np.int64)[rows], self.p, self.dim)

    def short_name(self) -> str:
        gens = ", ".join(str(g) for g in self.ideal_gens)
        base = f"F_{self.p}[{', '.join(self.variables)}]"
        rel = f"({gens}) + m^{self.truncation}" if gens else f"m^{self.truncation}"
        return f"{base}/({rel})"

    def __repr__(self):
        return f"LocalAlgebra({self.short_name()}, dim={self.dim})"


def action_monomials(algebra: LocalAlgebra, var_actions: list[np.ndarray]) -> list[np.ndarray]:
    """Action matrix of every basis monomial of `algebra` on a module.

    `var_actions` are the variable actions on the module.  Divisors of
    standard monomials are standard, so each matrix is one product away
    from an earlier one.
    """
    p = algebra.p
    order = sorted(range(algebra.dim), key=lambda i: grevlex_key(algebra.monomial_basis[i]))
    index_of = {algebra.monomial_basis[i]: i for i in range(algebra.dim)}
    dim = var_actions[0].shape[0] if var_actions else 1
    mats: list[np.ndarray | None] = [None] * algebra.dim
    for i in order:
        mono = algebra.monomial_basis[i]
        if sum(mono) == 0:
            mats[i] = np.eye(dim, dtype=np.int64)
            continue
        v = next(j for j, e in enumerate(mono) if e > 0)
        parent = list(mono)
        parent[v] -= 1
        mats[i] = matmul_mod(var_actions[v], mats[index_of[tuple(parent)]], p)
    return mats  # type: ignore[return-value]


class Ideal:
    """An ideal of A: a subspace closed under multiplication by every variable."""

    __slots__ = ("algebra", "subspace", "_powers")

    def __init__(self, algebra: LocalAlgebra, subspace: SubspaceFp, *, _trusted: bool = False):
        self.algebra = algebra
        self.subspace = subspace
        self._powers: list[SubspaceFp] = []
        if not _trusted and not subspace.is_zero():
            for act in algebra.var_actions:
                image = matmul_mod(act, subspace.basis.T, algebra.p).T
                for row in image:
                    if not subspace.contains(row):
                        raise ValueError("subspace is not closed under multiplication")

    @classmethod
    def generated(cls, algebra: LocalAlgebra, gens) -> "Ideal":
        """The ideal generated by the given elements (strings or elements)."""
        elems = [algebra.element(g) for g in gens]
        rows = [e.coords for e in elems if not e.is_zero()]
        span = SubspaceFp.from_rows(np.array(rows), algebra.p, algebra.dim) if rows else SubspaceFp.zero(algebra.p, algebra.dim)
        closed = close_under_actions(span, algebra.var_actions, algebra.p)
        return cls(algebra, closed, _trusted=True)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def is_zero(self) -> bool:
        return self.subspace.is_zero()

    def is_proper(self) -> bool:
        return self.subspace.dim < self.algebra.dim

    def is_unit_ideal(self) -> bool:
        return self.subspace.is_full()

    def contains(self, a: AlgebraElement) -> bool:
        return self.subspace.contains(a.coords)

    def basis_elements(self) -> list[AlgebraElement]:
        return [AlgebraElement(self.algebra, row) for row in self.subspace.basis]

    def times_subspace(self, other: SubspaceFp) -> SubspaceFp:
        """The subspace J * V inside A (k-span of pairwise products)."""
        A = self.algebra
        if self.is_zero() or other.is_zero():
            return SubspaceFp.zero(A.p, A.dim)
        rows = []
        for jrow in self.subspace.basis:
            mat = A.mult_matrix(AlgebraElement(A, jrow))
            rows.append(matmul_mod(mat, other.basis.T, A.p).T)
        return SubspaceFp.from_rows(np.vstack(rows), A.p, A.dim)

    def power(self, n: int) -> "Ideal":
        """J^n, with J^0 the unit ideal; powers are cached."""
        if n < 0:
            raise ValueError("negative ideal power")
        if n == 0:
            return self.algebra.unit_ideal()
        while len(self._powers) < n:
            prev = self._powers[-1].subspace if self._powers else self.subspace
            if len(self._powers) == 0:
                self._powers.append(self)
                continue
            self._powers.append(Ideal(self.algebra, self.times_subspace(prev), _trusted=True))
        return self._powers[n - 1]

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.algebra is other.algebra and self.subspace == other.subspace

    def __repr__(self):
        return f"Ideal(dim={self.dim} of {self.algebra.short_name()})"


def close_under_actions(span: SubspaceFp, actions: list[np.ndarray], p: int) -> SubspaceFp:
    """Smallest subspace containing `span` and stable under all action matrices."""
    current = span
    frontier = span.basis
    while frontier.shape[0]:
        new_rows = []
        for act in actions:
            image = matmul_mod(act, frontier.T, p).T
            for row in image:
                if not current.contains(row):
                    new_rows.append(row)
        if not new_rows:
            break
        grown = current.add(SubspaceFp.from_rows(np.array(new_rows), p, current.ambient))
        frontier = grown.quotient_representatives(current)
        current = grown
    return current


def build_algebra(p: int, variables, truncation: int, gens=None) -> LocalAlgebra:
    """Construct A = F_p[variables]/((gens) + m^truncation).

    `gens` may be strings in the expression grammar or Poly values; every
    generator must have zero constant term so the presentation stays local.
    """
    variables = tuple(variables)
    polys = []
    for g in gens or []:
        if isinstance(g, str):
            g = parse_polynomial(g, variables, p)
        polys.append(g)
    return LocalAlgebra(p, variables, truncation, polys)


def ideal_power(gens, n: int, algebra: LocalAlgebra | None = None) -> Ideal:
    """J^n for the ideal J generated by `gens` (J^0 = the unit ideal)."""
    if isinstance(gens, Ideal):
        return gens.power(n)
    if algebra is None:
        first = next((g for g in gens if isinstance(g, AlgebraElement)), None)
        if first is None:
            raise ValueError("need an algebra to interpret the generators")
        algebra = first.algebra
    return Ideal.generated(algebra, gens).power(n)
