"""Finitely generated modules over a LocalAlgebra as k-spaces with variable actions.

A module is a concrete object: a dimension, one commuting action matrix per
algebra variable, and (when it came from a presentation) distinguished
generators.  Submodules are canonical subspaces stable under the actions, so
every set-level statement (colon equality, initial-module equality, ...) is a
deterministic comparison of echelon bases.

Column convention: elements are coordinate vectors acted on from the left,
so composition of maps is matrix product in the usual order.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, Ideal, LocalAlgebra, action_monomials, close_under_actions
from .linalg import SubspaceFp, matmul_mod


class FdModule:
    """A finite-dimensional module over a LocalAlgebra."""

    def __init__(self, algebra: LocalAlgebra, actions: list[np.ndarray], generators: list[np.ndarray] | None = None, *, validate: bool = True):
        self.algebra = algebra
        self.actions = [np.asarray(a, dtype=np.int64) % algebra.p for a in actions]
        self.k_dim = self.actions[0].shape[0] if self.actions else 0
        if len(self.actions) != len(algebra.variables):
            raise ValueError("need one action matrix per algebra variable")
        for a in self.actions:
            if a.shape != (self.k_dim, self.k_dim):
                raise ValueError("action matrices must be square of equal size")
        self.generators = [np.asarray(g, dtype=np.int64) % algebra.p for g in (generators or [])]
        self._act_mono: list[np.ndarray] | None = None
        self._mult_cache: dict[bytes, np.ndarray] = {}
        self._resolution = None  # cached by homology.minimal_free_resolution
        if validate and self.k_dim and self.k_dim <= 128:
            self.validate()

    # -- consistency ---------------------------------------------------------

    def validate(self):
        """Check commutativity and that the algebra's relations annihilate the module."""
        p = self.algebra.p
        for i in range(len(self.actions)):
            for j in range(i + 1, len(self.actions)):
                ab = matmul_mod(self.actions[i], self.actions[j], p)
                ba = matmul_mod(self.actions[j], self.actions[i], p)
                if not np.array_equal(ab, ba):
                    raise ValueError("action matrices do not commute")
        for g in self.algebra.ideal_gens:
            mat = np.zeros((self.k_dim, self.k_dim), dtype=np.int64)
            for exps, coeff in g.terms.items():
                term = np.eye(self.k_dim, dtype=np.int64)
                for v, e in enumerate(exps):
                    for _ in range(e):
                        term = matmul_mod(self.actions[v], term, p)
                mat = (mat + coeff * term) % p
            if mat.any():
                raise ValueError(f"relation {g} does not annihilate the module")
        # m^T = 0: the top-degree monomial times each variable must vanish
        mats = self.action_monomials()
        top = [i for i, d in enumerate(self.algebra.basis_degrees) if d == self.algebra.truncation - 1]
        for i in top:
            for act in self.actions:
                if matmul_mod(act, mats[i], p).any():
                    raise ValueError("m^T does not annihilate the module")

    # -- action machinery ------------------------------------------------------

    def action_monomials(self) -> list[np.ndarray]:
        if self._act_mono is None:
            self._act_mono = action_monomials(self.algebra, self.actions) if self.k_dim else [np.zeros((0, 0), dtype=np.int64)] * self.algebra.dim
        return self._act_mono

    def mult_matrix(self, a: AlgebraElement) -> np.ndarray:
        """The k-linear map `multiply by a` on this module."""
        if a.algebra is not self.algebra:
            raise ValueError("element of a different algebra")
        key = a.coords.tobytes()
        cached = self._mult_cache.get(key)
        if cached is not None:
            return cached
        mats = self.action_monomials()
        out = np.zeros((self.k_dim, self.k_dim), dtype=np.int64)
        for i, c in enumerate(a.coords):
            if c:
                out += int(c) * mats[i]
        out %= self.algebra.p
        if len(self._mult_cache) < 1024:
            self._mult_cache[key] = out
        return out

    def apply(self, a: AlgebraElement, vec: np.ndarray) -> np.ndarray:
        return self.mult_matrix(a) @ (np.asarray(vec, dtype=np.int64) % self.algebra.p) % self.algebra.p

    # -- distinguished submodules ---------------------------------------------

    def zero_submodule(self) -> "Submodule":
        return Submodule(self, SubspaceFp.zero(self.algebra.p, self.k_dim))

    def full_submodule(self) -> "Submodule":
        return Submodule(self, SubspaceFp.full(self.algebra.p, self.k_dim))

    def is_zero(self) -> bool:
        return self.k_dim == 0

    def __repr__(self):
        return f"FdModule(k_dim={self.k_dim} over {self.algebra.short_name()})"


class Submodule:
    """An action-stable subspace of an FdModule, in canonical echelon form."""

    __slots__ = ("module", "subspace")

    def __init__(self, module: FdModule, subspace: SubspaceFp):
        self.module = module
        self.subspace = subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def is_zero(self) -> bool:
        return self.subspace.is_zero()

    def contains(self, vec) -> bool:
        return self.subspace.contains(vec)

    def contains_submodule(self, other: "Submodule") -> bool:
        return self.subspace.contains_subspace(other.subspace)

    def add(self, other: "Submodule") -> "Submodule":
        self._check(other)
        return Submodule(self.module, self.subspace.add(other.subspace))

    def intersect(self, other: "Submodule") -> "Submodule":
        self._check(other)
        return Submodule(self.module, self.subspace.intersect(other.subspace))

    def _check(self, other: "Submodule"):
        if self.module is not other.module:
            raise ValueError("submodules of different modules")

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.module is other.module and self.subspace == other.subspace

    def key(self) -> bytes:
        return self.subspace.key()

    def __repr__(self):
        return f"Submodule(dim={self.dim} of k_dim={self.module.k_dim})"


class ModuleHom:
    """An A-linear map between modules: a matrix commuting with the actions."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FdModule, target: FdModule, matrix: np.ndarray, *, validate: bool = True):
        self.source = source
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64) % source.algebra.p
        if self.matrix.shape != (target.k_dim, source.k_dim):
            raise ValueError(f"hom matrix shape {self.matrix.shape} != ({target.k_dim}, {source.k_dim})")
        if validate:
            p = source.algebra.p
            for xs, xt in zip(source.actions, target.actions):
                left = matmul_mod(xt, self.matrix, p)
                right = matmul_mod(self.matrix, xs, p)
                if not np.array_equal(left, right):
                    raise ValueError("matrix does not commute with the variable actions")

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ (np.asarray(vec, dtype=np.int64)) % self.source.algebra.p

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def image(self) -> Submodule:
        return Submodule(self.target, SubspaceFp.from_rows(self.matrix.T, self.source.algebra.p, self.target.k_dim))

    def kernel(self) -> Submodule:
        from .linalg import kernel as _kernel

        return Submodule(self.source, _kernel(self.matrix, self.source.algebra.p))

    def __repr__(self):
        return f"ModuleHom({self.source.k_dim} -> {self.target.k_dim})"


# -- constructors -------------------------------------------------------------


def free_module(algebra: LocalAlgebra, rank: int) -> FdModule:
    """A^rank with block-diagonal variable actions; generators are the copies of 1."""
    dim = algebra.dim
    actions = []
    for act in algebra.var_actions:
        big = np.zeros((rank * dim, rank * dim), dtype=np.int64)
        for i in range(rank):
            big[i * dim : (i + 1) * dim, i * dim : (i + 1) * dim] = act
        actions.append(big)
    gens = []
    for i in range(rank):
        g = np.zeros(rank * dim, dtype=np.int64)
        g[i * dim] = 1
        gens.append(g)
    mod = FdModule(algebra, actions, gens, validate=False)
    if algebra.dim and rank:
        # block-diagonal action monomials come straight from the algebra's
        base = algebra.action_monomials()
        mono = []
        for mat in base:
            big = np.zeros((rank * dim, rank * dim), dtype=np.int64)
            for i in range(rank):
                big[i * dim : (i + 1) * dim, i * dim : (i + 1) * dim] = mat
            mono.append(big)
        mod._act_mono = mono
    return mod


def regular_module(algebra: LocalAlgebra) -> FdModule:
    """A as a module over itself (cached on the algebra)."""
    if algebra._regular_module is None:
        algebra._regular_module = free_module(algebra, 1)
    return algebra._regular_module


def residue_field_module(algebra: LocalAlgebra) -> FdModule:
    """k = A/m as a module (cached on the algebra)."""
    if algebra._residue_module is None:
        algebra._residue_module = present_module(algebra, 1, [(v,) for v in algebra.variables])[0]
    return algebra._residue_module


def submodule_generated(module: FdModule, elems) -> Submodule:
    """Smallest action-stable subspace containing the given vectors."""
    rows = [np.asarray(v, dtype=np.int64) % module.algebra.p for v in elems]
    rows = [r for r in rows if r.any()]
    if not rows:
        return module.zero_submodule()
    span = SubspaceFp.from_rows(np.array(rows), module.algebra.p, module.k_dim)
    return Submodule(module, close_under_actions(span, module.actions, module.algebra.p))


def present_module(algebra: LocalAlgebra, rank: int, relations) -> tuple[FdModule, np.ndarray]:
    """M = A^rank / (A-span of relations).

    Each relation is a rank-tuple of algebra elements (or parseable strings).
    Returns (module, projection matrix from the free realization onto M);
    the module's generators are the images of the free basis.
    """
    free = free_module(algebra, rank)
    rel_vectors = []
    for rel in relations:
        if isinstance(rel, (str, AlgebraElement)):
            rel = (rel,)
        if len(rel) != rank:
            raise ValueError(f"relation {rel!r} does not have {rank} components")
        vec = np.concatenate([algebra.element(c).coords for c in rel])
        rel_vectors.append(vec)
    closure = submodule_generated(free, rel_vectors)
    quotient, proj = quotient_module(free, closure)
    quotient.generators = [proj.matrix @ g % algebra.p for g in free.generators]
    return quotient, proj.matrix


def quotient_module(module: FdModule, sub: Submodule) -> tuple[FdModule, ModuleHom]:
    """M/N with induced actions and the canonical projection hom.

    Coset coordinates are the non-pivot positions of N's echelon basis, so
    the projection of v is its canonical representative read off those
    positions.
    """
    if sub.module is not module:
        raise ValueError("submodule of a different module")
    p = module.algebra.p
    n = module.k_dim
    pivots = list(sub.subspace.pivots)
    nonpivots = [j for j in range(n) if j not in set(pivots)]
    q = len(nonpivots)

    # projection: v -> (v - v[pivots] @ basis)[nonpivots]
    proj = np.zeros((q, n), dtype=np.int64)
    for a, j in enumerate(nonpivots):
        proj[a, j] = 1
    if pivots:
        for r, c in enumerate(pivots):
            proj[:, c] = (proj[:, c] - sub.subspace.basis[r, nonpivots]) % p
    # section: coset coordinates -> canonical representative
    sect = np.zeros((n, q), dtype=np.int64)
    for a, j in enumerate(nonpivots):
        sect[j, a] = 1

    actions = [matmul_mod(matmul_mod(proj, act, p), sect, p) for act in module.actions]
    quot = FdModule(module.algebra, actions, validate=False)
    quot._section = sect  # lifts cosets to canonical representatives
    hom = ModuleHom(module, quot, proj, validate=False)
    return quot, hom


def ideal_times(ideal: Ideal, target) -> Submodule:
    """J * N (or J * M) as a submodule: span of products of basis elements."""
    if isinstance(target, FdModule):
        target = target.full_submodule()
    module = target.module
    if ideal.algebra is not module.algebra:
        raise ValueError("ideal of a different algebra")
    p = module.algebra.p
    if ideal.is_zero() or target.is_zero():
        return module.zero_submodule()
    rows = []
    for jrow in ideal.subspace.basis:
        mat = module.mult_matrix(AlgebraElement(module.algebra, jrow))
        rows.append(matmul_mod(mat, target.subspace.basis.T, p).T)
    return Submodule(module, SubspaceFp.from_rows(np.vstack(rows), p, module.k_dim))


def loewy_length(ideal: Ideal, target) -> int:
    """a_J(X): least n >= 0 with J^n X = 0; requires J proper when X != 0."""
    if isinstance(target, FdModule):
        target = target.full_submodule()
    current = target
    n = 0
    while not current.is_zero():
        if ideal.is_unit_ideal():
            raise ValueError("Loewy length is infinite: the ideal is the unit ideal")
        nxt = ideal_times(ideal, current)
        if nxt.dim >= current.dim:
            raise ValueError("Loewy length did not decrease; ideal not nilpotent on the module")
        current = nxt
        n += 1
    return n


def loewy_length_into(ideal: Ideal, top: Submodule, bottom: Submodule) -> int:
    """a_J(top/bottom): least n with J^n * top contained in bottom."""
    current = top
    n = 0
    while not bottom.contains_submodule(current):
        if ideal.is_unit_ideal():
            raise ValueError("Loewy length is infinite: the ideal is the unit ideal")
        nxt = ideal_times(ideal, current)
        if nxt.dim >= current.dim and not bottom.contains_submodule(nxt):
            raise ValueError("Loewy length did not decrease; ideal not nilpotent on the quotient")
        current = nxt
        n += 1
    return n


def colon(module: FdModule, sub: Submodule, x: AlgebraElement) -> Submodule:
    """(N :_M x) = preimage of N under multiplication by x."""
    if sub.module is not module:
        raise ValueError("submodule of a different module")
    from .linalg import kernel as _kernel

    p = module.algebra.p
    mult = module.mult_matrix(x)
    # membership in N is linear: compose with the canonical reduction mod N
    reducer = np.eye(module.k_dim, dtype=np.int64)
    if sub.dim:
        rows = np.zeros((sub.dim, module.k_dim), dtype=np.int64)
        for r, c in enumerate(sub.subspace.pivots):
            rows[r, c] = 1
        reducer = (reducer - sub.subspace.basis.T @ rows) % p
    return Submodule(module, _kernel(matmul_mod(reducer, mult, p), p))


def annihilator(module: FdModule, x: AlgebraElement) -> Submodule:
    """(0 :_M x)."""
    return colon(module, module.zero_submodule(), x)


def sequence_submodule(module: FdModule, xs: list[AlgebraElement]) -> Submodule:
    """(x_1, ..., x_r)M as a submodule (zero submodule for the empty sequence)."""
    if not xs:
        return module.zero_submodule()
    p = module.algebra.p
    rows = []
    for x in xs:
        mat = module.mult_matrix(x)
        rows.append(mat.T % p)
    return Submodule(module, SubspaceFp.from_rows(np.vstack(rows), p, module.k_dim))


def induced_multiplication_hom(c: AlgebraElement, module: FdModule, x: AlgebraElement) -> ModuleHom:
    """The hom M/(0 :_M x) -> M sending a class to c times a representative.

    Well-defined exactly when c annihilates (0 :_M x); otherwise raises,
    which signals that c lies outside the guaranteed range.
    """
    ann = annihilator(module, x)
    mult_c = module.mult_matrix(c)
    p = module.algebra.p
    if ann.dim and matmul_mod(mult_c, ann.subspace.basis.T, p).any():
        raise ValueError("multiplier does not annihilate the colon submodule; the map is not well defined")
    quot, proj = quotient_module(module, ann)
    section = quot._section
    return ModuleHom(quot, module, matmul_mod(mult_c, section, p), validate=False)
