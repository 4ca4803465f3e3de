"""Minimal free resolutions, Betti and Bass numbers, Tor/Ext with induced maps.

Resolutions are built degree by degree: minimal generators of each kernel
are the pivot-column representatives of the canonical echelon form of
ker/m*ker, so the output is deterministic.  Betti numbers are computed by two
independent routes (resolution ranks of M, and homology of the residue-field
resolution tensored with M) and any disagreement raises InternalCheckError.

Homology of a complex is carried as an explicit subquotient (cycles,
boundaries, canonical representatives), which keeps the module structure:
that is what makes J * Tor and J * Ext computable for the containment checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraElement, Ideal
from .grading import InternalCheckError
from .linalg import SubspaceFp, matmul_mod, rank as matrix_rank, rref, kernel_matrix
from .modules import FdModule, ModuleHom, Submodule, ideal_times, residue_field_module


# -- free resolutions ---------------------------------------------------------


class FreeResolution:
    """A minimal free resolution ... -> A^{b_1} -> A^{b_0} -> M -> 0."""

    def __init__(self, module: FdModule):
        self.module = module
        self.algebra = module.algebra
        A = self.algebra
        p = A.p
        full = module.full_submodule()
        m_full = ideal_times(A.maximal_ideal(), full) if module.k_dim else module.zero_submodule()
        gens = full.subspace.quotient_representatives(m_full.subspace)
        self.generators = gens
        self.ranks: list[int] = [gens.shape[0]]
        self.diff_entries: list[list[list[AlgebraElement]]] = [[]]  # index j >= 1 used
        self.diff_real: list[np.ndarray | None] = [None]
        # augmentation A^{b_0} -> M
        self.aug = _free_to_module_matrix(module, gens) if gens.shape[0] else np.zeros((module.k_dim, 0), dtype=np.int64)
        if gens.shape[0]:
            ker = kernel_matrix(self.aug, p)
        else:
            ker = np.zeros((0, 0), dtype=np.int64)
        self._kernel = SubspaceFp.from_rows(ker, p, self.aug.shape[1]) if ker.size or self.aug.shape[1] else SubspaceFp.zero(p, 0)
        self.terminated = self.ranks[0] == 0

    def extend_to(self, j_max: int):
        """Compute ranks and differentials through homological degree j_max."""
        while len(self.ranks) <= j_max and not self.terminated:
            self._step()
        while len(self.ranks) <= j_max:
            self.ranks.append(0)
            self.diff_entries.append([])
            self.diff_real.append(np.zeros((self.ranks[-2] * self.algebra.dim, 0), dtype=np.int64))

    def _step(self):
        A = self.algebra
        p = A.p
        j = len(self.ranks)
        prev_rank = self.ranks[-1]
        ker = self._kernel
        if ker.is_zero():
            self.ranks.append(0)
            self.diff_entries.append([])
            self.diff_real.append(np.zeros((prev_rank * A.dim, 0), dtype=np.int64))
            self.terminated = True
            return
        m_ker = _ideal_times_free(A.maximal_ideal(), ker, prev_rank, A)
        reps = ker.quotient_representatives(m_ker)
        b = reps.shape[0]
        # minimality: representatives of ker/m*ker have every component in m
        ones = reps[:, [i * A.dim for i in range(prev_rank)]]
        if ones.any():
            raise InternalCheckError("resolution differential has a unit entry")
        entries = [
            [AlgebraElement(A, reps[l, i * A.dim : (i + 1) * A.dim]) for l in range(b)]
            for i in range(prev_rank)
        ]
        real = _free_map_realization(A, reps, prev_rank)
        new_ker = SubspaceFp.from_rows(kernel_matrix(real, p), p, real.shape[1])
        if real.shape[1] - new_ker.dim != ker.dim:
            raise InternalCheckError("resolution step is not exact: image rank != kernel dimension")
        self.ranks.append(b)
        self.diff_entries.append(entries)
        self.diff_real.append(real)
        self._kernel = new_ker

    def rank(self, j: int) -> int:
        if j < 0:
            return 0
        return self.ranks[j] if j < len(self.ranks) else 0

    def differential_entries(self, j: int) -> list[list[AlgebraElement]]:
        """Entries of d_j as an A-matrix (rows: copies of F_{j-1}, cols: of F_j)."""
        return self.diff_entries[j]

    def __repr__(self):
        return f"FreeResolution(ranks={self.ranks}, over {self.algebra.short_name()})"


def minimal_free_resolution(module: FdModule, j_max: int) -> FreeResolution:
    """The (cached) minimal free resolution of the module, through degree j_max."""
    res = module._resolution
    if res is None:
        res = FreeResolution(module)
        module._resolution = res
    res.extend_to(j_max)
    return res


def _free_to_module_matrix(module: FdModule, gens: np.ndarray) -> np.ndarray:
    """Realize A^b -> M, e_i -> gens[i], as a k-matrix with columns (copy, monomial)."""
    A = module.algebra
    mats = module.action_monomials()
    b = gens.shape[0]
    out = np.zeros((module.k_dim, b * A.dim), dtype=np.int64)
    for i in range(b):
        for t in range(A.dim):
            out[:, i * A.dim + t] = mats[t] @ gens[i] % A.p
    return out


def _free_map_realization(A, reps: np.ndarray, prev_rank: int) -> np.ndarray:
    """Realize A^b -> A^{prev_rank}, e_l -> reps[l], as a k-matrix."""
    p = A.p
    b = reps.shape[0]
    dim = A.dim
    mats = A.action_monomials()
    r3 = reps.reshape(b, prev_rank, dim)
    out = np.empty((b, dim, prev_rank, dim), dtype=np.int64)
    for t in range(dim):
        out[:, t, :, :] = np.einsum("lis,us->liu", r3, mats[t]).transpose(0, 1, 2) % p
    # rows are (copy i, monomial s), columns are (copy l, monomial t)
    return out.transpose(2, 3, 0, 1).reshape(prev_rank * dim, b * dim)


def _ideal_times_free(ideal: Ideal, sub: SubspaceFp, rank_: int, A) -> SubspaceFp:
    """J * V for a subspace V of the realization of A^rank_."""
    p = A.p
    if ideal.is_zero() or sub.is_zero():
        return SubspaceFp.zero(p, sub.ambient)
    d = sub.dim
    rows = []
    flat = sub.basis.reshape(d * rank_, A.dim)
    for jrow in ideal.subspace.basis:
        mat = A.mult_matrix(AlgebraElement(A, jrow))
        rows.append(matmul_mod(flat, mat.T, p).reshape(d, rank_ * A.dim))
    return SubspaceFp.from_rows(np.vstack(rows), p, sub.ambient)


# -- complexes with module coefficients ----------------------------------------


def _entry_coords(entries: list[list[AlgebraElement]], rows: int, cols: int, dimA: int) -> np.ndarray:
    out = np.zeros((rows, cols, dimA), dtype=np.int64)
    for i in range(rows):
        for l in range(cols):
            out[i, l] = entries[i][l].coords
    return out


def tensor_differential(res: FreeResolution, coeff: FdModule, j: int) -> np.ndarray:
    """The map W^{b_j} -> W^{b_{j-1}} given by the entries of d_j acting on W."""
    p = coeff.algebra.p
    w = coeff.k_dim
    if j == 0:
        return np.zeros((0, res.rank(0) * w), dtype=np.int64)
    b_to, b_from = res.rank(j - 1), res.rank(j)
    if b_to == 0 or b_from == 0 or w == 0:
        return np.zeros((b_to * w, b_from * w), dtype=np.int64)
    coords = _entry_coords(res.differential_entries(j), b_to, b_from, res.algebra.dim)
    mono = np.stack(coeff.action_monomials())
    blocks = np.einsum("ilm,mst->islt", coords, mono) % p
    return blocks.reshape(b_to * w, b_from * w)


def hom_differential(res: FreeResolution, coeff: FdModule, j: int) -> np.ndarray:
    """The map Hom(F_{j-1}, W) -> Hom(F_j, W): pre-composition with d_j."""
    p = coeff.algebra.p
    w = coeff.k_dim
    if j == 0:
        return np.zeros((res.rank(0) * w, 0), dtype=np.int64)
    b_src, b_dst = res.rank(j - 1), res.rank(j)
    if b_src == 0 or b_dst == 0 or w == 0:
        return np.zeros((b_dst * w, b_src * w), dtype=np.int64)
    coords = _entry_coords(res.differential_entries(j), b_src, b_dst, res.algebra.dim)
    mono = np.stack(coeff.action_monomials())
    blocks = np.einsum("ilm,mst->lsit", coords, mono) % p
    return blocks.reshape(b_dst * w, b_src * w)


class SubquotientHomology:
    """ker/im with a canonical basis, inside the realization of W^b."""

    __slots__ = ("p", "ambient", "cycles", "boundaries", "reps", "pivots")

    def __init__(self, p: int, ambient: int, cycles: SubspaceFp, boundaries: SubspaceFp):
        self.p = p
        self.ambient = ambient
        self.cycles = cycles
        self.boundaries = boundaries
        reps = cycles.quotient_representatives(boundaries)
        self.reps = reps
        sub = SubspaceFp.from_rows(reps, p, ambient) if reps.size else SubspaceFp.zero(p, ambient)
        self.pivots = sub.pivots

    @property
    def dim(self) -> int:
        return self.reps.shape[0]

    def coords(self, vec: np.ndarray) -> np.ndarray:
        """Coordinates of the class of a cycle in the canonical basis."""
        reduced = self.boundaries.reduce(vec)
        return reduced[list(self.pivots)] if self.dim else np.zeros(0, dtype=np.int64)


def homology_at(res: FreeResolution, coeff: FdModule, j: int, *, cochain: bool = False) -> SubquotientHomology:
    """H_j of F(E) tensor W, or H^j of Hom(F(E), W) when cochain=True."""
    p = coeff.algebra.p
    w = coeff.k_dim
    ambient = res.rank(j) * w
    if cochain:
        out_map = hom_differential(res, coeff, j + 1)   # leaves degree j
        in_map = hom_differential(res, coeff, j)        # enters degree j
    else:
        out_map = tensor_differential(res, coeff, j)
        in_map = tensor_differential(res, coeff, j + 1)
    cycles = SubspaceFp.from_rows(kernel_matrix(out_map, p), p, ambient) if out_map.shape[0] else SubspaceFp.full(p, ambient)
    boundaries = SubspaceFp.from_rows(in_map.T, p, ambient) if in_map.shape[1] else SubspaceFp.zero(p, ambient)
    return SubquotientHomology(p, ambient, cycles, boundaries)


def _power_module_ideal_times(ideal: Ideal, coeff: FdModule, copies: int, sub: SubspaceFp) -> SubspaceFp:
    """J * V for a subspace V of the realization of W^copies."""
    p = coeff.algebra.p
    if ideal.is_zero() or sub.is_zero() or copies == 0 or coeff.k_dim == 0:
        return SubspaceFp.zero(p, sub.ambient)
    d = sub.dim
    flat = sub.basis.reshape(d * copies, coeff.k_dim)
    rows = []
    for jrow in ideal.subspace.basis:
        mat = coeff.mult_matrix(AlgebraElement(coeff.algebra, jrow))
        rows.append(matmul_mod(flat, mat.T, p).reshape(d, copies * coeff.k_dim))
    return SubspaceFp.from_rows(np.vstack(rows), p, sub.ambient)


# -- Betti / Bass ---------------------------------------------------------------


@dataclass
class BettiTable:
    values: list[int]

    def __post_init__(self):
        seen_zero = False
        for v in self.values:
            if v < 0:
                raise ValueError("negative Betti number")
            if seen_zero and v:
                raise InternalCheckError("Betti numbers restarted after a zero")
            seen_zero = seen_zero or v == 0

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        values = other.values if isinstance(other, BettiTable) else other
        return list(self.values) == list(values)


@dataclass
class BassTable:
    values: list[int]

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        values = other.values if isinstance(other, BassTable) else other
        return list(self.values) == list(values)


def betti(module: FdModule, j_max: int) -> BettiTable:
    """Betti numbers through j_max, by two routes, asserted equal.

    Route one: ranks of the minimal free resolution of the module.  Route
    two: homology dimensions of the residue-field resolution tensored with
    the module.
    """
    res = minimal_free_resolution(module, j_max)
    by_ranks = [res.rank(j) for j in range(j_max + 1)]

    k = residue_field_module(module.algebra)
    res_k = minimal_free_resolution(k, j_max + 1)
    p = module.algebra.p
    w = module.k_dim
    by_homology = []
    prev_rank_in = None
    for j in range(j_max + 1):
        d_j = tensor_differential(res_k, module, j)
        d_next = tensor_differential(res_k, module, j + 1)
        cols = res_k.rank(j) * w
        rank_out = matrix_rank(d_j, p) if d_j.shape[0] else 0
        rank_in = matrix_rank(d_next, p) if d_next.shape[1] else 0
        by_homology.append(cols - rank_out - rank_in)
    if by_ranks != by_homology:
        raise InternalCheckError(
            f"Betti routes disagree: resolution ranks {by_ranks}, homology dims {by_homology}"
        )
    return BettiTable(by_ranks)


def bass(module: FdModule, j_max: int) -> BassTable:
    """Bass numbers mu^j = dim H^j(Hom(F(k), M)) through j_max."""
    k = residue_field_module(module.algebra)
    res_k = minimal_free_resolution(k, j_max + 1)
    p = module.algebra.p
    w = module.k_dim
    values = []
    for j in range(j_max + 1):
        delta_out = hom_differential(res_k, module, j + 1)
        delta_in = hom_differential(res_k, module, j)
        cols = res_k.rank(j) * w
        rank_out = matrix_rank(delta_out, p) if delta_out.shape[0] else 0
        rank_in = matrix_rank(delta_in, p) if delta_in.shape[1] else 0
        values.append(cols - rank_out - rank_in)
    if module.k_dim and values and values[0] <= 0:
        raise InternalCheckError("mu^0 must be positive for a nonzero module (nonzero socle)")
    return BassTable(values)


# -- induced maps ----------------------------------------------------------------


@dataclass
class InducedMapReport:
    """Per-degree matrices of an induced map on Tor or Ext, with J-containment flags."""

    source_dims: list[int]
    target_dims: list[int]
    matrices: list[np.ndarray]
    contained_in_ideal_times_target: list[bool]

    def all_contained(self) -> bool:
        return all(self.contained_in_ideal_times_target)

    def matrices_equal(self, other: "InducedMapReport") -> bool:
        return len(self.matrices) == len(other.matrices) and all(
            np.array_equal(a, b) for a, b in zip(self.matrices, other.matrices)
        )


def _induced_report(res: FreeResolution, phi: ModuleHom, j_max: int, ideal: Ideal, *, cochain: bool) -> InducedMapReport:
    p = phi.source.algebra.p
    src_h = [homology_at(res, phi.source, j, cochain=cochain) for j in range(j_max + 1)]
    dst_h = [homology_at(res, phi.target, j, cochain=cochain) for j in range(j_max + 1)]
    mats = []
    contained = []
    for j in range(j_max + 1):
        hs, hd = src_h[j], dst_h[j]
        b = res.rank(j)
        mat = np.zeros((hd.dim, hs.dim), dtype=np.int64)
        images = []
        for col, rep in enumerate(hs.reps):
            blocks = rep.reshape(b, phi.source.k_dim) if b else rep.reshape(0, phi.source.k_dim)
            img = (blocks @ phi.matrix.T % p).reshape(-1)
            if not hd.cycles.contains(img):
                raise InternalCheckError("chain map did not send cycles to cycles")
            images.append(img)
            if hd.dim:
                mat[:, col] = hd.coords(img)
        mats.append(mat)
        if hs.dim == 0:
            contained.append(True)
        else:
            j_cycles = _power_module_ideal_times(ideal, phi.target, b, dst_h[j].cycles)
            allowed = j_cycles.add(dst_h[j].boundaries.add(SubspaceFp.zero(p, hd.ambient)))
            contained.append(all(allowed.contains(img) for img in images))
    return InducedMapReport(
        source_dims=[h.dim for h in src_h],
        target_dims=[h.dim for h in dst_h],
        matrices=mats,
        contained_in_ideal_times_target=contained,
    )


def tor_induced(E: FdModule, phi: ModuleHom, j_max: int, ideal: Ideal) -> InducedMapReport:
    """Matrices of Tor_j(E, phi) and flags for image in J * Tor_j(E, target)."""
    res = minimal_free_resolution(E, j_max + 1)
    return _induced_report(res, phi, j_max, ideal, cochain=False)


def ext_induced(E: FdModule, phi: ModuleHom, j_max: int, ideal: Ideal) -> InducedMapReport:
    """Matrices of Ext^j(E, phi) and flags for image in J * Ext^j(E, target)."""
    res = minimal_free_resolution(E, j_max + 1)
    return _induced_report(res, phi, j_max, ideal, cochain=True)


# -- dimension readouts -----------------------------------------------------------

GEQ_JMAX = "geq_jmax"
PLUS_INFINITY = "plus_infinity"
MINUS_INFINITY = "minus_infinity"


@dataclass
class DimensionReport:
    """pd/id/depth readouts; exact integers or symbolic markers."""

    j_max: int
    betti: list[int]
    bass: list[int]
    pd: int | str
    injective_dim: int | str
    depth: int | str

    def markers(self) -> tuple:
        return (self.pd, self.injective_dim, self.depth)


def homological_dims(module: FdModule, j_max: int, *, betti_table=None, bass_table=None) -> DimensionReport:
    """Projective dimension, injective dimension, and depth from the tables.

    pd is exact when a zero Betti number occurs (trailing zeros are certain
    by minimality), otherwise reported as >= j_max.  depth is the first
    nonzero Bass number.  For the injective dimension the first zero Bass
    number after the depth is treated as terminal (the Bass numbers between
    depth and injective dimension admit no gaps); the raw table rides along.
    """
    b = list(betti_table.values if isinstance(betti_table, BettiTable) else betti_table or betti(module, j_max).values)
    u = list(bass_table.values if isinstance(bass_table, BassTable) else bass_table or bass(module, j_max).values)

    if module.k_dim == 0:
        return DimensionReport(j_max, b, u, MINUS_INFINITY, MINUS_INFINITY, PLUS_INFINITY)

    if 0 in b:
        pd: int | str = b.index(0) - 1
    else:
        pd = GEQ_JMAX

    depth = next(j for j, v in enumerate(u) if v > 0)

    inj: int | str = GEQ_JMAX
    for j in range(depth + 1, j_max + 1):
        if u[j] == 0:
            inj = j - 1
            break
    return DimensionReport(j_max, b, u, pd, inj, depth)
