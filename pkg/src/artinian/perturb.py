"""Filter regularity data, perturbation bounds, and perturbation experiments.

For a sequence x_1..x_r on M, the profile collects the Loewy lengths

    a_i = a_J( ((x_1..x_{i-1})M : x_i) / (x_1..x_{i-1})M ),

all finite in this Artinian realization, so every sequence is filter
regular.  Four explicit bounds are supported, one per flavor token:

    prop32  (r = 1)  max{a_J(0 : x), ar_J(xM) + 1}
    prop34  (r = 2)  max{a_1 + a_2, ar_J(x_1 M), ar_J((x_1,x_2)M)} + 1
    lemma   (r = 1)  the prop32 value + 1  (map-level containment bound)
    main    (any r)  max{a_1 + 2a_2 + ... + 2^{r-1}a_r,
                         ar_J(x_1 M), ..., ar_J((x_1..x_r)M)} + 2

A perturbation replaces x_i by x_i + eps_i with eps_i drawn from J^N.  When
J^N = 0 the experiment is flagged vacuous: zero is the only perturbation and
the run carries no information.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraElement, Ideal
from .grading import artin_rees, filtration, initial_module
from .homology import BassTable, BettiTable, DimensionReport, bass, betti, homological_dims
from .modules import (
    FdModule,
    Submodule,
    annihilator,
    colon,
    loewy_length_into,
    quotient_module,
    sequence_submodule,
)

FLAVORS = ("prop32", "prop34", "lemma", "main")


@dataclass
class FilterRegProfile:
    """The a_i data of a sequence, with the colon submodules that produced it."""

    sequence: list[AlgebraElement]
    a_values: list[int]
    all_finite: bool = True

    @property
    def r(self) -> int:
        return len(self.sequence)


def filter_regular_profile(module: FdModule, xs: list[AlgebraElement], ideal: Ideal) -> FilterRegProfile:
    """Compute a_i for each element of the sequence; always finite here."""
    a_values = []
    for i in range(len(xs)):
        prev = sequence_submodule(module, xs[:i])
        cln = colon(module, prev, xs[i])
        a_values.append(loewy_length_into(ideal, cln, prev))
    return FilterRegProfile(list(xs), a_values)


@dataclass
class BoundReport:
    """One of the explicit perturbation bounds, with its ingredients."""

    flavor: str
    a_values: list[int]
    artin_rees_values: list[int]    # ar_J((x_1..x_i)M) for i = 1..r
    N: int
    vacuous: bool                   # J^N = 0: only the zero perturbation exists

    def describe(self) -> dict:
        return {
            "flavor": self.flavor,
            "a_values": list(self.a_values),
            "artin_rees_values": list(self.artin_rees_values),
            "N": self.N,
            "vacuous": self.vacuous,
        }


def perturbation_bound(module: FdModule, xs: list[AlgebraElement], ideal: Ideal, flavor: str = "main") -> BoundReport:
    """The explicit bound N for the requested flavor."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; choose from {FLAVORS}")
    r = len(xs)
    if flavor in ("prop32", "lemma") and r != 1:
        raise ValueError(f"flavor {flavor!r} requires a sequence of length 1, got {r}")
    if flavor == "prop34" and r != 2:
        raise ValueError(f"flavor 'prop34' requires a sequence of length 2, got {r}")
    if r == 0:
        raise ValueError("empty sequence has no perturbation bound")

    profile = filter_regular_profile(module, xs, ideal)
    a = profile.a_values
    ar_values = [
        artin_rees(sequence_submodule(module, xs[: i + 1]), module, ideal) for i in range(r)
    ]
    if flavor in ("prop32", "lemma"):
        n = max(a[0], ar_values[0] + 1)
        if flavor == "lemma":
            n += 1
    elif flavor == "prop34":
        n = max(a[0] + a[1], ar_values[0], ar_values[1]) + 1
    else:
        weighted = sum(a[i] * (1 << i) for i in range(r))
        n = max([weighted] + ar_values) + 2
    vacuous = ideal.power(n).is_zero()
    return BoundReport(flavor, a, ar_values, n, vacuous)


@dataclass
class PerturbationOutcome:
    """Side-by-side invariants of M/(x)M and M/(x')M for one epsilon choice."""

    epsilons: list[AlgebraElement]
    vacuous: bool
    betti_original: list[int]
    betti_perturbed: list[int]
    bass_original: list[int]
    bass_perturbed: list[int]
    dims_original: DimensionReport
    dims_perturbed: DimensionReport
    tables_equal: bool
    dims_equal: bool
    aux: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return self.tables_equal and all(self.aux.values())

    def describe(self) -> dict:
        return {
            "epsilons": [str(e) for e in self.epsilons],
            "vacuous": self.vacuous,
            "betti_original": list(self.betti_original),
            "betti_perturbed": list(self.betti_perturbed),
            "bass_original": list(self.bass_original),
            "bass_perturbed": list(self.bass_perturbed),
            "pd": [self.dims_original.pd, self.dims_perturbed.pd],
            "injective_dim": [self.dims_original.injective_dim, self.dims_perturbed.injective_dim],
            "depth": [self.dims_original.depth, self.dims_perturbed.depth],
            "tables_equal": self.tables_equal,
            "dims_equal": self.dims_equal,
            "aux": dict(self.aux),
            "verdict": self.verdict,
        }


class _QuotientTables:
    """Memo for Betti/Bass/dims of M/S keyed by the canonical basis of S."""

    def __init__(self, module: FdModule, j_max: int):
        self.module = module
        self.j_max = j_max
        self.cache: dict[bytes, tuple[list[int], list[int], DimensionReport]] = {}

    def tables(self, sub: Submodule) -> tuple[list[int], list[int], DimensionReport]:
        key = sub.key()
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        quotient, _ = quotient_module(self.module, sub)
        bt = betti(quotient, self.j_max)
        ut = bass(quotient, self.j_max)
        dims = homological_dims(quotient, self.j_max, betti_table=bt, bass_table=ut)
        out = (list(bt.values), list(ut.values), dims)
        self.cache[key] = out
        return out


def perturb_once(
    module: FdModule,
    xs: list[AlgebraElement],
    epsilons: list[AlgebraElement],
    ideal: Ideal,
    j_max: int,
    *,
    _tables: _QuotientTables | None = None,
    _profile: FilterRegProfile | None = None,
) -> PerturbationOutcome:
    """Compare the invariants of M/(x)M and M/(x')M for x' = x + eps.

    Auxiliary set equalities ride along for short sequences: for r = 1 the
    colon and initial-module stability, for r = 2 the colon Loewy data and
    the initial module of the pair (the pair checks perturb only the first
    element, as their statements do).
    """
    if len(epsilons) != len(xs):
        raise ValueError(f"need {len(xs)} perturbation elements, got {len(epsilons)}")
    r = len(xs)
    tables = _tables or _QuotientTables(module, j_max)
    xs2 = [x + e for x, e in zip(xs, epsilons)]

    sub_orig = sequence_submodule(module, xs)
    sub_pert = sequence_submodule(module, xs2)
    b0, u0, d0 = tables.tables(sub_orig)
    b1, u1, d1 = tables.tables(sub_pert)
    tables_equal = b0 == b1 and u0 == u1
    dims_equal = d0.markers() == d1.markers()

    aux: dict[str, bool] = {}
    if r == 1:
        x, x2 = xs[0], xs2[0]
        aux["colon_equal"] = annihilator(module, x) == annihilator(module, x2)
        filt = filtration(module, ideal)
        aux["initial_equal"] = initial_module(sequence_submodule(module, [x]), filt) == initial_module(
            sequence_submodule(module, [x2]), filt
        )
    elif r == 2:
        profile = _profile or filter_regular_profile(module, xs, ideal)
        x1p = xs2[0]
        x2_orig = xs[1]
        a1, a2 = profile.a_values
        aux["colon_loewy_preserved"] = (
            loewy_length_into(ideal, annihilator(module, x1p), module.zero_submodule()) == a1
        )
        x1p_m = sequence_submodule(module, [x1p])
        cln = colon(module, x1p_m, x2_orig)
        aux["colon_quotient_bounded"] = loewy_length_into(ideal, cln, x1p_m) <= 2 * a2
        filt = filtration(module, ideal)
        aux["initial_equal"] = initial_module(sequence_submodule(module, [xs[0], x2_orig]), filt) == initial_module(
            sequence_submodule(module, [x1p, x2_orig]), filt
        )

    vacuous = all(e.is_zero() for e in epsilons)
    return PerturbationOutcome(
        epsilons=list(epsilons),
        vacuous=vacuous,
        betti_original=b0,
        betti_perturbed=b1,
        bass_original=u0,
        bass_perturbed=u1,
        dims_original=d0,
        dims_perturbed=d1,
        tables_equal=tables_equal,
        dims_equal=dims_equal,
        aux=aux,
    )


def enumerate_power_elements(ideal: Ideal, exponent: int) -> list[AlgebraElement]:
    """Every element of the subspace J^exponent, in a deterministic order."""
    A = ideal.algebra
    space = ideal.power(exponent).subspace
    elems = []
    for coeffs in itertools.product(range(A.p), repeat=space.dim):
        vec = np.zeros(A.dim, dtype=np.int64)
        for c, row in zip(coeffs, space.basis):
            vec = (vec + c * row) % A.p
        elems.append(AlgebraElement(A, vec))
    return elems


def sample_perturbations(
    module: FdModule,
    xs: list[AlgebraElement],
    ideal: Ideal,
    exponent: int,
    budget: int,
    seed: int,
    j_max: int = 6,
    *,
    _tables: _QuotientTables | None = None,
) -> list[PerturbationOutcome]:
    """Run perturb_once over epsilon tuples drawn from J^exponent.

    Exhaustive enumeration when the tuple count fits in the budget,
    otherwise `budget` seeded uniform samples.  Deterministic given the seed.
    """
    A = module.algebra
    r = len(xs)
    space = ideal.power(exponent).subspace
    tables = _tables or _QuotientTables(module, j_max)
    profile = filter_regular_profile(module, xs, ideal) if r == 2 else None

    total = A.p ** (space.dim * r)
    outcomes = []
    if total <= budget:
        singles = enumerate_power_elements(ideal, exponent)
        for combo in itertools.product(singles, repeat=r):
            outcomes.append(perturb_once(module, xs, list(combo), ideal, j_max, _tables=tables, _profile=profile))
    else:
        rng = random.Random(seed)
        for _ in range(budget):
            eps = []
            for _i in range(r):
                vec = np.zeros(A.dim, dtype=np.int64)
                for row in space.basis:
                    vec = (vec + rng.randrange(A.p) * row) % A.p
                eps.append(AlgebraElement(A, vec))
            outcomes.append(perturb_once(module, xs, eps, ideal, j_max, _tables=tables, _profile=profile))
    return outcomes


@dataclass
class ThresholdReport:
    """Observed stability of the Betti/Bass tables as the power drops to zero."""

    proved_bound: int
    vacuous_at_bound: bool
    levels: list[dict]
    observed_threshold: int
    largest_violation: int | None
    falsified_at_bound: bool
    falsifications: list[dict] = field(default_factory=list)

    def describe(self) -> dict:
        return {
            "proved_bound": self.proved_bound,
            "vacuous_at_bound": self.vacuous_at_bound,
            "levels": list(self.levels),
            "observed_threshold": self.observed_threshold,
            "largest_violation": self.largest_violation,
            "falsified_at_bound": self.falsified_at_bound,
            "falsifications": list(self.falsifications),
        }


def threshold_search(
    module: FdModule,
    xs: list[AlgebraElement],
    ideal: Ideal,
    j_max: int,
    budget: int,
    seed: int,
) -> ThresholdReport:
    """Scan exponents from the proved bound down to 0, sampling perturbations.

    A change in any Betti or Bass value is a violation at that level; at the
    proved bound itself any violation is a falsification and its full
    reproduction data is recorded.  The bound is sufficient and not claimed
    necessary, so lower violation-free levels are merely observations.
    """
    bound = perturbation_bound(module, xs, ideal, "main")
    tables = _QuotientTables(module, j_max)
    levels = []
    falsifications = []
    largest_violation = None
    observed_threshold = 0
    for exponent in range(bound.N, -1, -1):
        outs = sample_perturbations(module, xs, ideal, exponent, budget, seed + exponent, j_max, _tables=tables)
        violations = [o for o in outs if not o.tables_equal]
        levels.append(
            {
                "exponent": exponent,
                "sampled": len(outs),
                "exhaustive": module.algebra.p ** (ideal.power(exponent).subspace.dim * len(xs)) <= budget,
                "violations": len(violations),
                "vacuous": ideal.power(exponent).is_zero(),
            }
        )
        if violations:
            if largest_violation is None or exponent > largest_violation:
                largest_violation = exponent
            if exponent >= bound.N:
                for v in violations:
                    falsifications.append(v.describe())
    if largest_violation is not None:
        observed_threshold = largest_violation + 1
    return ThresholdReport(
        proved_bound=bound.N,
        vacuous_at_bound=bound.vacuous,
        levels=levels,
        observed_threshold=observed_threshold,
        largest_violation=largest_violation,
        falsified_at_bound=bool(falsifications),
        falsifications=falsifications,
    )
