"""J-adic filtrations, initial modules, generator degrees, Artin-Rees numbers.

The filtration of M by J is the finite chain M = J^0 M >= J^1 M >= ... >= 0.
A submodule N has, in each graded piece G_d = J^d M / J^{d+1} M, the image
Q_d of N cap J^d M; these images form the initial module of N.  Degreewise
dimensions add up to dim N, and the maximum degree of a minimal graded
generating set of the initial module equals the Artin-Rees number of N.
That identity is computed by both routes on every call and any disagreement
is raised loudly -- it is the strongest internal cross-check in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Ideal
from .linalg import SubspaceFp
from .modules import FdModule, Submodule, ideal_times


class InternalCheckError(AssertionError):
    """A dual-route computation disagreed with itself: an implementation bug."""


class GradedFiltration:
    """The chain F_d = J^d M, ending at the first zero piece."""

    __slots__ = ("module", "ideal", "pieces")

    def __init__(self, module: FdModule, ideal: Ideal, pieces: list[Submodule]):
        self.module = module
        self.ideal = ideal
        self.pieces = pieces

    @property
    def length(self) -> int:
        """a_J(M): the index of the final (zero) piece."""
        return len(self.pieces) - 1

    def piece(self, d: int) -> Submodule:
        """F_d, with F_d = 0 for every d beyond the length."""
        if d >= len(self.pieces):
            return self.pieces[-1]
        return self.pieces[d]

    def graded_dims(self) -> list[int]:
        return [self.pieces[d].dim - self.pieces[d + 1].dim for d in range(self.length)]

    def __repr__(self):
        return f"GradedFiltration(dims={[pc.dim for pc in self.pieces]})"


def filtration(module: FdModule, ideal: Ideal) -> GradedFiltration:
    """Compute the J-adic filtration of M (requires J nilpotent on M)."""
    if ideal.algebra is not module.algebra:
        raise ValueError("ideal of a different algebra")
    pieces = [module.full_submodule()]
    while not pieces[-1].is_zero():
        if ideal.is_unit_ideal():
            raise ValueError("the unit ideal gives no finite filtration on a nonzero module")
        nxt = ideal_times(ideal, pieces[-1])
        if nxt.dim >= pieces[-1].dim:
            raise ValueError("filtration did not terminate; ideal not nilpotent on the module")
        pieces.append(nxt)
    return GradedFiltration(module, ideal, pieces)


class InitialModule:
    """Degreewise images of a submodule in the associated graded module.

    Degree d is carried as the ambient subspace (N cap F_d) + F_{d+1}; its
    dimension relative to F_{d+1} is the dimension of the graded piece.
    """

    __slots__ = ("filtration", "submodule", "reps", "intersections")

    def __init__(self, filt: GradedFiltration, submodule: Submodule, reps: list[Submodule], intersections: list[Submodule]):
        self.filtration = filt
        self.submodule = submodule
        self.reps = reps                  # (N cap F_d) + F_{d+1} per degree d
        self.intersections = intersections  # N cap F_d per degree d

    def degree_dims(self) -> list[int]:
        filt = self.filtration
        return [self.reps[d].dim - filt.piece(d + 1).dim for d in range(filt.length)]

    def total_dim(self) -> int:
        return sum(self.degree_dims())

    def __eq__(self, other):
        """Equality of graded submodules inside the same associated graded module."""
        return (
            isinstance(other, InitialModule)
            and self.filtration is other.filtration
            and all(a == b for a, b in zip(self.reps, other.reps))
        )

    def __repr__(self):
        return f"InitialModule(degree_dims={self.degree_dims()})"


def initial_module(submodule: Submodule, filt: GradedFiltration) -> InitialModule:
    """int(N): per-degree images (N cap J^d M + J^{d+1} M)/J^{d+1} M."""
    if submodule.module is not filt.module:
        raise ValueError("submodule of a different module")
    reps = []
    inters = []
    for d in range(filt.length):
        cap = submodule.intersect(filt.piece(d))
        inters.append(cap)
        reps.append(cap.add(filt.piece(d + 1)))
    got = sum(r.dim - filt.piece(d + 1).dim for d, r in enumerate(reps))
    if got != submodule.dim:
        raise InternalCheckError(f"initial module dimensions sum to {got}, expected {submodule.dim}")
    return InitialModule(filt, submodule, reps, inters)


def generator_degrees(init: InitialModule) -> tuple[dict[int, int], int]:
    """Minimal graded generator counts by degree, and the maximum degree d(Q).

    Degree d contributes dim Q_d - dim (G_+ Q)_d, where (G_+ Q)_d collects
    the images of J^e * (N cap F_{d-e}) for every e >= 1 (not only e = 1:
    the associated graded ring need not be generated in degree one).
    The convention d(0) = 0 keeps max-formulas well defined.
    """
    filt = init.filtration
    ideal = filt.ideal
    L = filt.length
    degrees: dict[int, int] = {}
    # powers[e][c] = J^e * (N cap F_c), built incrementally in e
    current = list(init.intersections)
    reach: list[Submodule] = [filt.module.zero_submodule() for _ in range(L)]
    for e in range(1, L + 1):
        current = [ideal_times(ideal, sub) for sub in current]
        for c in range(L):
            d = c + e
            if d < L:
                reach[d] = reach[d].add(current[c])
    d_max = 0
    for d in range(L):
        below = reach[d].add(filt.piece(d + 1))
        count = init.reps[d].dim - below.dim
        if count < 0:
            raise InternalCheckError("graded generator count went negative")
        if count:
            degrees[d] = count
            d_max = d
    return degrees, d_max


def artin_rees(submodule: Submodule, module: FdModule, ideal: Ideal) -> int:
    """ar_J(N): least c with J^n M cap N = J^{n-c}(J^c M cap N) for all n >= c.

    Both sides vanish for n past a_J(M), so scanning n in [c, a_J(M)] is
    exhaustive.  The result is checked against d(int(N)); a mismatch is an
    implementation bug and raises InternalCheckError.
    """
    if submodule.module is not module:
        raise ValueError("submodule of a different module")
    filt = filtration(module, ideal)
    L = filt.length
    caps = [filt.piece(n).intersect(submodule) for n in range(L + 1)]

    by_definition = None
    for c in range(L + 1):
        chain = caps[c]
        ok = chain == caps[c]
        n = c
        while ok and n < L:
            n += 1
            chain = ideal_times(ideal, chain)
            ok = chain == caps[n]
        if ok:
            by_definition = c
            break
    assert by_definition is not None

    _, by_degrees = generator_degrees(initial_module(submodule, filt))
    if by_definition != by_degrees:
        raise InternalCheckError(
            f"Artin-Rees routes disagree: definition gives {by_definition}, "
            f"initial-module degree gives {by_degrees}"
        )
    return by_definition
