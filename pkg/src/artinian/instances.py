"""Seeded random instances (algebra, module, sequence, ideal) for the test suites.

Instances are drawn from three shapes: truncated power-series lines (one
variable, deep truncation -- these supply the non-vacuous long-sequence
cases), complete-intersection-like planes (two variables, pure-power
generators -- slow Betti growth), and small generic quotients.  A rejection
guard bounds the free-module sizes a residue-field resolution can reach, so
drawing an instance is deterministic in the seed and never produces a
resolution that dwarfs the time budget.

Dimension caps default to the desk-scale limits used by the acceptance
suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import AlgebraElement, Ideal, LocalAlgebra, build_algebra
from .homology import minimal_free_resolution
from .modules import FdModule, present_module, residue_field_module
from .poly import Poly


@dataclass(frozen=True)
class InstanceCaps:
    """Size limits for generated instances."""

    max_algebra_dim: int = 20
    max_module_dim: int = 64
    max_free_dim: int = 0        # 0 disables the resolution guard
    guard_depth: int = 7         # resolution degree probed by the guard
    max_sequence_length: int = 3
    allow_small_ideal: bool = True


AR_CAPS = InstanceCaps(max_algebra_dim=24, max_module_dim=64, max_free_dim=0)
RESOLUTION_CAPS = InstanceCaps(max_algebra_dim=12, max_module_dim=16, max_free_dim=420, guard_depth=7)


@dataclass
class RandomInstance:
    """One generated instance plus the strings needed to reproduce it."""

    algebra: LocalAlgebra
    module: FdModule
    sequence: list[AlgebraElement]
    ideal: Ideal
    descriptor: dict = field(default_factory=dict)

    @property
    def r(self) -> int:
        return len(self.sequence)


def _random_monomial(rng: random.Random, n_vars: int, min_deg: int, max_deg: int) -> tuple[int, ...]:
    deg = rng.randint(min_deg, max_deg)
    exps = [0] * n_vars
    for _ in range(deg):
        exps[rng.randrange(n_vars)] += 1
    return tuple(exps)


def random_poly(rng: random.Random, variables: tuple[str, ...], p: int, min_deg: int, max_deg: int, n_terms: int) -> Poly:
    """A random polynomial with every term of degree in [min_deg, max_deg]."""
    terms: dict[tuple[int, ...], int] = {}
    for _ in range(n_terms):
        exps = _random_monomial(rng, len(variables), min_deg, max_deg)
        terms[exps] = rng.randrange(1, p)
    return Poly(variables, p, terms)


def random_maximal_element(rng: random.Random, algebra: LocalAlgebra, max_deg: int | None = None) -> AlgebraElement:
    """A random nonzero element of m (retrying a few times before giving up)."""
    top = max_deg or max(2, algebra.truncation - 1)
    for _ in range(16):
        poly = random_poly(rng, algebra.variables, algebra.p, 1, min(top, algebra.truncation - 1), rng.randint(1, 2))
        elem = algebra.reduce_poly(poly)
        if not elem.is_zero():
            return elem
    return algebra.variable(algebra.variables[0])


def _line_algebra(rng: random.Random, p: int) -> LocalAlgebra:
    t = rng.randint(4, 14)
    return build_algebra(p, ("x",), t)


def _ci_algebra(rng: random.Random, p: int) -> LocalAlgebra:
    a = rng.randint(2, 4)
    b = rng.randint(2, 4)
    gens = [f"x^{a}", f"y^{b}"]
    if rng.random() < 0.3:
        gens[0] = f"x^{a} + y^{min(b, a + 1)}" if rng.random() < 0.5 else f"x^{a} + x*y"
    return build_algebra(p, ("x", "y"), a + b, gens)


def _generic_algebra(rng: random.Random, p: int, caps: InstanceCaps) -> LocalAlgebra:
    n = rng.choice((1, 2, 2, 3))
    t = rng.choice((3, 4, 5))
    variables = ("x", "y", "z")[:n]
    gens: list[Poly] = []
    for _ in range(32):
        algebra = build_algebra(p, variables, t, gens)
        if algebra.dim <= caps.max_algebra_dim:
            return algebra
        gens.append(random_poly(rng, variables, p, 1, t - 1, rng.randint(1, 3)))
    return build_algebra(p, ("x",), min(t, 5))


def _resolution_guard_ok(algebra: LocalAlgebra, caps: InstanceCaps) -> bool:
    """Reject algebras whose residue-field resolution outgrows the size cap."""
    if caps.max_free_dim <= 0:
        return True
    k = residue_field_module(algebra)
    res = minimal_free_resolution(k, 0)
    try:
        for j in range(1, caps.guard_depth + 1):
            res.extend_to(j)
            if res.rank(j) * algebra.dim > caps.max_free_dim:
                return False
    except MemoryError:  # pragma: no cover
        return False
    return True


def random_module(rng: random.Random, algebra: LocalAlgebra, caps: InstanceCaps) -> tuple[FdModule, int, list[tuple[str, ...]]]:
    """A presented module within the dimension cap; returns (module, rank, relation strings)."""
    for _ in range(24):
        rank = rng.choice((1, 1, 2))
        n_rel = rng.randint(0, 2)
        relations = []
        for _ in range(n_rel):
            rel = tuple(
                str(random_maximal_element(rng, algebra)) if rng.random() < 0.8 else "0"
                for _ in range(rank)
            )
            relations.append(rel)
        module, _ = present_module(algebra, rank, relations)
        if 0 < module.k_dim <= caps.max_module_dim:
            return module, rank, relations
    module, _ = present_module(algebra, 1, [])
    return module, 1, []


def random_ideal(rng: random.Random, algebra: LocalAlgebra, caps: InstanceCaps) -> tuple[Ideal, list[str]]:
    """J = m most of the time; occasionally a smaller nonzero ideal inside m."""
    if not caps.allow_small_ideal or rng.random() < 0.7 or algebra.dim == 1:
        return algebra.maximal_ideal(), []
    gens = [random_maximal_element(rng, algebra) for _ in range(rng.randint(1, 2))]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return algebra.maximal_ideal(), []
    return Ideal.generated(algebra, gens), [str(g) for g in gens]


def random_sequence(rng: random.Random, algebra: LocalAlgebra, r: int, *, deep: bool = False) -> list[AlgebraElement]:
    """r elements of m; `deep` biases to low-order elements (good for lines)."""
    xs = []
    for _ in range(r):
        if deep and len(algebra.variables) == 1:
            power = rng.choice((1, 1, 1, 2))
            unit = 1 + rng.randrange(algebra.p - 1) if algebra.p > 2 else 1
            elem = algebra.element(f"{unit}*x^{power}")
            if rng.random() < 0.3:
                elem = elem + random_maximal_element(rng, algebra)
                if elem.is_zero():
                    elem = algebra.variable("x")
        else:
            elem = random_maximal_element(rng, algebra, max_deg=2)
        xs.append(elem)
    return xs


def generate_instance(seed: int, index: int, caps: InstanceCaps = RESOLUTION_CAPS, *, r_choices=(1, 2, 3)) -> RandomInstance:
    """Deterministic instance for (seed, index); independent across indices."""
    rng = random.Random(seed * 1_000_003 + index)
    p = rng.choice((2, 2, 3, 5))
    for _attempt in range(64):
        shape = rng.choice(("line", "ci", "generic", "generic"))
        if shape == "line":
            algebra = _line_algebra(rng, p)
        elif shape == "ci":
            algebra = _ci_algebra(rng, p)
        else:
            algebra = _generic_algebra(rng, p, caps)
        if algebra.dim > caps.max_algebra_dim:
            continue
        if not _resolution_guard_ok(algebra, caps):
            continue
        module, rank, relations = random_module(rng, algebra, caps)
        ideal, j_gens = random_ideal(rng, algebra, caps)
        r = rng.choice(tuple(rc for rc in r_choices if rc <= caps.max_sequence_length))
        xs = random_sequence(rng, algebra, r, deep=(shape == "line"))
        descriptor = {
            "field": algebra.p,
            "variables": list(algebra.variables),
            "truncation": algebra.truncation,
            "ideal": [str(g) for g in algebra.ideal_gens],
            "rank": rank,
            "relations": [list(rel) for rel in relations],
            "sequence": [str(x) for x in xs],
            "j_ideal": j_gens,
            "seed": seed,
            "index": index,
            "shape": shape,
        }
        return RandomInstance(algebra, module, xs, ideal, descriptor)
    raise RuntimeError(f"could not generate an instance within caps for seed={seed}, index={index}")
