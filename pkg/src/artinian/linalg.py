"""Exact dense linear algebra over prime fields F_p.

Matrices are 2-D numpy ``int64`` arrays with every entry reduced into
``[0, p)``; vectors are 1-D arrays with the same convention.  Subspaces are
kept in reduced row-echelon form, which is a normal form: two subspaces are
equal iff their canonical bases are identical entry-wise.  That makes every
set-equality question downstream (colon modules, initial modules, ...) a
deterministic comparison.

Everything here is pure and allocation-fresh; nothing mutates its inputs.
"""

from __future__ import annotations

import numpy as np


class PrimeField:
    """The field F_p for a machine-word prime p (p < 2**31)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {p!r}")
        if p >= 1 << 31:
            raise ValueError(f"modulus {p} too large (need p < 2**31)")
        d = 2
        while d * d <= p:
            if p % d == 0:
                raise ValueError(f"{p} is not prime (divisible by {d})")
            d += 1
        self.p = p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def as_matrix(rows, p: int) -> np.ndarray:
    """Coerce nested lists / arrays to a reduced int64 matrix mod p."""
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a % p


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """a @ b reduced mod p, chunking the inner dimension so int64 never overflows."""
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # max accumulated magnitude is chunk * (p-1)^2; keep it under 2**62
    chunk = max(1, (1 << 62) // ((p - 1) * (p - 1) or 1))
    if inner <= chunk:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, inner, chunk):
        hi = min(lo + chunk, inner)
        out += a[:, lo:hi] @ b[lo:hi, :]
        out %= p
    return out


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form.

    Returns (basis, pivots): the nonzero rows of the RREF and the pivot
    column of each row.  Unit pivots, pivot columns elsewhere zero, pivots
    strictly increasing -- the unique canonical form of the row space.
    """
    a = mat.copy()
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r] = (a[r] * pow(piv, p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        # one outer-product step clears the column above and below
        a -= np.outer(col, a[r])
        a %= p
        pivots.append(c)
        r += 1
    return a[:r].copy(), tuple(pivots)


def kernel_matrix(mat: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (as rows) of the right kernel {v : mat @ v = 0}."""
    m, n = mat.shape
    basis, pivots = rref(mat, p)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    vecs = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        vecs[k, f] = 1
        for r, c in enumerate(pivots):
            vecs[k, c] = (-int(basis[r, f])) % p
    out, _ = rref(vecs, p)
    return out


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution v of mat @ v = rhs, or None if inconsistent."""
    m, n = mat.shape
    aug = np.concatenate([mat, (rhs % p).reshape(m, 1)], axis=1)
    basis, pivots = rref(aug, p)
    if n in pivots:
        return None
    v = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(pivots):
        v[c] = int(basis[r, n])
    return v


class SubspaceFp:
    """A subspace of F_p^n, held as a canonical RREF basis (rows)."""

    __slots__ = ("p", "ambient", "basis", "pivots")

    def __init__(self, p: int, ambient: int, basis: np.ndarray, pivots: tuple[int, ...]):
        # callers go through from_rows/zero/full, which guarantee canonical input
        self.p = p
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows, p: int, ambient: int) -> "SubspaceFp":
        a = np.asarray(rows, dtype=np.int64)
        if a.size == 0:
            return cls.zero(p, ambient)
        a = as_matrix(a, p)
        if a.shape[1] != ambient:
            raise ValueError(f"row length {a.shape[1]} != ambient {ambient}")
        basis, pivots = rref(a, p)
        return cls(p, ambient, basis, pivots)

    @classmethod
    def zero(cls, p: int, ambient: int) -> "SubspaceFp":
        return cls(p, ambient, np.zeros((0, ambient), dtype=np.int64), ())

    @classmethod
    def full(cls, p: int, ambient: int) -> "SubspaceFp":
        return cls(p, ambient, np.eye(ambient, dtype=np.int64), tuple(range(ambient)))

    # -- basic structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Canonical coset representative of vec modulo this subspace."""
        v = np.asarray(vec, dtype=np.int64) % self.p
        if self.dim:
            v = (v - v[list(self.pivots)] @ self.basis) % self.p
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def contains_subspace(self, other: "SubspaceFp") -> bool:
        return all(self.contains(row) for row in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, SubspaceFp)
            and self.p == other.p
            and self.ambient == other.ambient
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient, self.basis.tobytes()))

    def __repr__(self):
        return f"SubspaceFp(dim={self.dim}, ambient={self.ambient}, p={self.p})"

    def key(self) -> bytes:
        """Stable bytes identifying the subspace (canonical basis)."""
        return self.basis.tobytes()

    # -- lattice operations ------------------------------------------------

    def _check_compatible(self, other: "SubspaceFp"):
        if self.p != other.p:
            raise ValueError(f"field mismatch: F_{self.p} vs F_{other.p}")
        if self.ambient != other.ambient:
            raise ValueError(f"ambient dimension mismatch: {self.ambient} != {other.ambient}")

    def add(self, other: "SubspaceFp") -> "SubspaceFp":
        self._check_compatible(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        return SubspaceFp.from_rows(np.vstack([self.basis, other.basis]), self.p, self.ambient)

    def perp(self) -> "SubspaceFp":
        """Orthogonal complement for the standard dot product; dim flips to n - dim."""
        if self.dim == 0:
            return SubspaceFp.full(self.p, self.ambient)
        return SubspaceFp.from_rows(kernel_matrix(self.basis, self.p), self.p, self.ambient)

    def intersect(self, other: "SubspaceFp") -> "SubspaceFp":
        self._check_compatible(other)
        # U cap V = (U^perp + V^perp)^perp; double-perp is the identity over F_p^n
        return self.perp().add(other.perp()).perp()

    def quotient_representatives(self, sub: "SubspaceFp") -> np.ndarray:
        """Canonical coset representatives for self/sub (sub must lie in self)."""
        self._check_compatible(sub)
        if not self.contains_subspace(sub):
            raise ValueError("quotient_representatives: subspace is not contained in the ambient space")
        if sub.is_zero():
            return self.basis.copy()
        reduced = np.array([sub.reduce(row) for row in self.basis], dtype=np.int64)
        reps, _ = rref(reduced, self.p)
        return reps


def echelonize(mat: np.ndarray, p: int) -> tuple[SubspaceFp, int]:
    """Row space of mat as a canonical subspace, together with the rank."""
    m = as_matrix(mat, p)
    sub = SubspaceFp.from_rows(m, p, m.shape[1])
    return sub, sub.dim


def kernel(mat: np.ndarray, p: int) -> SubspaceFp:
    """The right kernel {v : mat @ v = 0} as a canonical subspace of F_p^cols."""
    m = as_matrix(mat, p)
    return SubspaceFp.from_rows(kernel_matrix(m, p), p, m.shape[1])


def quotient_basis(w: SubspaceFp, u: SubspaceFp) -> list[np.ndarray]:
    """Coset representatives of u inside w; together with u they span w."""
    return [row.copy() for row in w.quotient_representatives(u)]


def rank(mat: np.ndarray, p: int) -> int:
    _, pivots = rref(as_matrix(mat, p), p)
    return len(pivots)
