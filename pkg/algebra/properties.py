"""
Property Suites
===============
Randomized checks of the algebraic laws the library relies on. Each suite
draws its instances from a seeded generator and returns a SuiteResult;
the ``verify`` management command and the test-suite share them.

Location: algebra/properties.py
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np
from sympy import Matrix, Poly, QQ, ZZ, multiplicity
from sympy.matrices.normalforms import smith_normal_form

from . import buildings, mustafin, rank_codes, skew_algebra
from .chain_rings import build_galois_ring
from .exceptions import CriterionViolation, MonotonicityViolation
from .local_linalg import elementary_divisor_valuations, inner_rank, smith_form
from .sampling import (
    make_rng,
    random_element,
    random_free_family,
    random_int_matrix,
    random_lattice_matrix,
    random_matrix_code,
    random_sigma_poly,
    random_unit,
)
from .valued_scalars import INFINITY, T, PAdicField, TAdicField

logger = logging.getLogger(__name__)

SMALL_RINGS = ((2, 2, 2), (3, 2, 2), (2, 2, 3), (3, 1, 3))


@dataclass
class SuiteResult:
    name: str
    trials: int
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        logger.error("%s: %s", self.name, message)
        self.failures.append(message)

    def to_json(self) -> dict:
        return {'name': self.name, 'trials': self.trials, 'checked': self.checked,
                'passed': self.passed, 'failures': self.failures}


def _pick(rng: np.random.Generator, options):
    return options[int(rng.integers(0, len(options)))]


# ---------------------------------------------------------------------------
# scalars and linear algebra
# ---------------------------------------------------------------------------

def valuation_axioms(rng, trials: int) -> SuiteResult:
    """Additivity under products, the ultrametric inequality, and equality when the valuations differ."""
    result = SuiteResult('valuation_axioms', trials)
    t = TAdicField()
    for field_ in (PAdicField(2), t):
        if field_.zero.valuation() is not INFINITY:
            result.fail(f"val(0) is not infinite over {field_}")
    for _ in range(trials):
        F = PAdicField(_pick(rng, (2, 3, 5, 7)))
        a, b = (F(Fraction(int(rng.integers(-500, 500)), int(rng.integers(1, 200)))) for _ in range(2))
        f, g = (t(Poly([int(c) for c in rng.integers(-3, 4, size=3)], T, domain=QQ)) for _ in range(2))
        for x, y in ((a, b), (f, g)):
            result.checked += 1
            vx, vy, vs = x.valuation(), y.valuation(), (x + y).valuation()
            if (x * y).valuation() != vx + vy:
                result.fail(f"val({x}·{y}) is not additive")
            if vs < min(vx, vy):
                result.fail(f"val({x}+{y}) breaks the ultrametric inequality")
            if vx != vy and vs != min(vx, vy):
                result.fail(f"val({x}+{y}) differs from min(val) although the valuations differ")
    return result


def smith_reconstruction(rng, trials: int) -> SuiteResult:
    """Transforms reproduce the diagonal, and valuations match sympy's integer Smith form."""
    result = SuiteResult('smith_reconstruction', trials)
    for _ in range(trials):
        p = _pick(rng, (2, 3, 5))
        F = PAdicField(p)
        rows, cols = (int(x) for x in rng.integers(1, 5, size=2))
        M = random_int_matrix(rng, F, rows, cols, -12, 13)
        snf = smith_form(M)
        result.checked += 1
        product = snf.left @ M @ snf.right
        for i in range(rows):
            for j in range(cols):
                v = snf.divisor_valuations[i] if i == j else INFINITY
                expected = F.zero if v is INFINITY else F.pi_power(v)
                if product[i, j] != expected:
                    result.fail(f"L·M·R differs from the Smith diagonal at ({i},{j}) for {M}")
        if not (snf.left.det().valuation() == 0 and snf.right.det().valuation() == 0):
            result.fail(f"Smith transforms are not unimodular for {M}")
        oracle = smith_normal_form(Matrix([[int(x.value) for x in row] for row in M.rows]), domain=ZZ)
        diagonal = [oracle[i, i] for i in range(min(rows, cols))]
        expected_vals = sorted(multiplicity(p, abs(int(x))) if x != 0 else float('inf') for x in diagonal)
        ours = [float('inf') if v is INFINITY else v for v in snf.divisor_valuations]
        if ours != expected_vals:
            result.fail(f"divisor valuations {ours} differ from the integer Smith form {expected_vals}")
    return result


def _kernel_free_rank(M: List[List[int]], p: int, k: int) -> int:
    """Free rank of ker M over Z/p^k as dim_F_p of p^(k-1)·ker M, by enumeration."""
    q = p ** k
    n = len(M[0])
    socle = set()
    for x in itertools.product(range(q), repeat=n):
        if all(sum(a * b for a, b in zip(row, x)) % q == 0 for row in M):
            socle.add(tuple(p ** (k - 1) * c % q for c in x))
    return round(np.log(len(socle)) / np.log(p))


def rank_nullity(rng, trials: int) -> SuiteResult:
    """Inner rank of f plus the free rank of its kernel equals n."""
    result = SuiteResult('rank_nullity', trials)
    for _ in range(trials):
        ring = build_galois_ring(*_pick(rng, SMALL_RINGS))
        f = random_sigma_poly(rng, ring)
        M = skew_algebra.matrix_rep(f)
        result.checked += 1
        rk = inner_rank(M, ring.base)
        frk = _kernel_free_rank(M, ring.p, ring.k)
        if rk + frk != ring.n:
            result.fail(f"{f.to_text()} over {ring}: inner rank {rk} + kernel free rank {frk} != {ring.n}")
    return result


# ---------------------------------------------------------------------------
# sigma-polynomials and codes
# ---------------------------------------------------------------------------

def annihilator_equivalence(rng, trials: int) -> SuiteResult:
    result = SuiteResult('annihilator_equivalence', trials)
    for _ in range(trials):
        ring = build_galois_ring(*_pick(rng, ((2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 2, 3), (3, 1, 3), (2, 1, 4))))
        r = int(rng.integers(1, ring.n))
        beta = random_free_family(rng, ring, r)
        result.checked += 1
        f = skew_algebra.annihilator_recursive(beta)
        g = skew_algebra.annihilator_determinant(beta)
        if f != g:
            result.fail(f"annihilators differ: {f.to_text()} vs {g.to_text()}")
        if not f.is_monic() or f.degree != r:
            result.fail(f"{f.to_text()} is not monic of degree {r}")
        if any(not skew_algebra.evaluate(f, b).is_zero() for b in beta):
            result.fail(f"{f.to_text()} does not vanish on the family")
    return result


def degree_lower_bound(rng, trials: int) -> SuiteResult:
    """rk_inn(f) >= n - deg f for every nonzero f."""
    result = SuiteResult('degree_lower_bound', trials)
    for _ in range(trials):
        ring = build_galois_ring(*_pick(rng, SMALL_RINGS))
        f = random_sigma_poly(rng, ring)
        if f.is_zero():
            continue
        result.checked += 1
        rk = skew_algebra.inner_rank_of(f)
        if rk < ring.n - f.degree:
            result.fail(f"{f.to_text()} has inner rank {rk} < {ring.n} - {f.degree}")
    return result


def norm_screen(rng, trials: int) -> SuiteResult:
    """Polynomials of degree ell with unit ends and inner rank n - ell satisfy the norm condition."""
    result = SuiteResult('norm_screen', trials)
    for _ in range(trials):
        ring = build_galois_ring(*_pick(rng, ((3, 1, 2), (3, 2, 2), (2, 1, 3), (2, 2, 3))))
        ell = int(rng.integers(1, ring.n))
        coeffs = [random_unit(rng, ring)] + [random_element(rng, ring) for _ in range(ell - 1)] + [random_unit(rng, ring)]
        f = skew_algebra.SigmaPoly(ring, coeffs)
        if skew_algebra.inner_rank_of(f) != ring.n - ell:
            continue
        result.checked += 1
        if not skew_algebra.norm_condition_check(f, ell).holds:
            result.fail(f"{f.to_text()} has inner rank {ring.n - ell} but fails the norm condition")
    return result


def monotone_sequences(rng, trials: int) -> SuiteResult:
    """k_i and d_i never decrease along the filtration of a random code."""
    result = SuiteResult('monotone_sequences', trials)
    for _ in range(trials):
        ring = build_galois_ring(*_pick(rng, ((2, 2, 2), (3, 2, 2), (2, 3, 2))))
        gens = tuple(random_sigma_poly(rng, ring) for _ in range(int(rng.integers(1, 3))))
        if all(g.is_zero() for g in gens):
            continue
        spec = rank_codes.CodeSpec(ring, 'custom', generators=gens)
        result.checked += 1
        try:
            rank_codes.filtration_report(spec, ring.k)
        except MonotonicityViolation as exc:
            result.fail(f"{[g.to_text() for g in gens]}: {exc}")
    return result


def k_limit_identity(rng, trials: int) -> SuiteResult:
    """Past the largest divisor valuation, i·(r - k_i) equals the valuation sum."""
    result = SuiteResult('k_limit_identity', trials)
    for _ in range(trials):
        vals = sorted(int(v) for v in rng.integers(0, 6, size=int(rng.integers(1, 7))))
        if rng.random() < 0.3:
            vals.append(INFINITY)
        finite = [v for v in vals if v is not INFINITY]
        r = len(finite)
        ks = [rank_codes.k_sequence(vals, i) for i in range(1, max(finite) + 4)]
        result.checked += 1
        if any(a > b for a, b in zip(ks, ks[1:])):
            result.fail(f"k_i decreases for divisors {vals}")
        for i in range(max(finite) + 1, max(finite) + 4):
            if i * (r - rank_codes.k_sequence(vals, i)) != sum(finite):
                result.fail(f"limit identity fails at i={i} for divisors {vals}")
    return result


# ---------------------------------------------------------------------------
# buildings and Mustafin fibers
# ---------------------------------------------------------------------------

def lattice_canonical_forms(rng, trials: int) -> SuiteResult:
    """Idempotence and homothety invariance of lattice_class."""
    result = SuiteResult('lattice_canonical_forms', trials)
    for _ in range(trials):
        F = PAdicField(_pick(rng, (2, 3))) if rng.random() < 0.7 else TAdicField()
        M = random_lattice_matrix(rng, F, int(rng.integers(2, 4)))
        L = buildings.lattice_class(M)
        result.checked += 1
        if buildings.lattice_class(L.canonical) != L:
            result.fail(f"canonical form of {M} is not idempotent")
        m = int(rng.integers(-3, 4))
        if buildings.lattice_class(M.scale(F.pi_power(m))) != L:
            result.fail(f"class of {M} changes under π^{m}")
    return result


def intersection_meet(rng, trials: int) -> SuiteResult:
    result = SuiteResult('intersection_meet', trials)
    for _ in range(trials):
        F = PAdicField(_pick(rng, (2, 3)))
        d = int(rng.integers(2, 4))
        M1, M2, M3 = (random_lattice_matrix(rng, F, d) for _ in range(3))
        meet = buildings.intersect(M1, M2)
        result.checked += 1
        if not (buildings.contains(M1, meet) and buildings.contains(M2, meet)):
            result.fail(f"{meet} is not inside both {M1} and {M2}")
        # shrink Λ_3 until it lies in both
        shift = max(0, -(M1.inverse() @ M3).min_valuation(), -(M2.inverse() @ M3).min_valuation())
        inner = M3.scale(F.pi_power(shift))
        if not buildings.contains(meet, inner):
            result.fail(f"{inner} lies in both lattices but not in their intersection")
    return result


def hull_convexity(rng, trials: int) -> SuiteResult:
    result = SuiteResult('hull_convexity', trials)
    for _ in range(trials):
        F = PAdicField(2) if rng.random() < 0.6 else TAdicField()
        d = int(rng.integers(2, 4))
        gamma = [random_lattice_matrix(rng, F, d, max_shift=1) for _ in range(int(rng.integers(1, 4)))]
        hull = buildings.convex_hull(gamma)
        result.checked += 1
        for g in gamma:
            if not buildings.hull_member(g, hull):
                result.fail(f"generator {g} missing from its hull")
        for a, b in itertools.combinations(hull.vertices, 2):
            vals = elementary_divisor_valuations(a.canonical.inverse() @ b.canonical)
            for m in range(min(vals), max(vals) + 1):
                meet = buildings.intersect(a.canonical.scale(F.pi_power(m)), b.canonical)
                if buildings.lattice_class(meet) not in hull:
                    result.fail(f"hull of {len(gamma)} classes is not closed at {a}, {b}, m={m}")
    return result


def basis_criterion_suite(rng, trials: int) -> SuiteResult:
    """Saturated codes of full closure dimension have [O^d] in the hull of their B-lattices."""
    result = SuiteResult('basis_criterion', trials)
    attempts = 0
    while result.checked < trials and attempts < 50 * trials:
        attempts += 1
        d = int(rng.integers(2, 4))
        F = PAdicField(_pick(rng, (2, 3)))
        A = random_matrix_code(rng, F, d, int(rng.integers(2, 4)))
        report = mustafin.mp_dimension(A)
        if not (report.saturated and report.mp_dimension == d - 1):
            continue
        result.checked += 1
        try:
            full = mustafin.basis_criterion(A)
        except CriterionViolation as exc:
            result.fail(str(exc))
            continue
        if not full.hull_contains_standard:
            result.fail(f"standard lattice outside the hull for {[str(a) for a in A]}")
    return result


def component_locality(rng, trials: int) -> SuiteResult:
    """Vertices within distance 2 of the hull carry components only inside it (d = 2)."""
    result = SuiteResult('component_locality', trials)
    F = PAdicField(2)
    for _ in range(trials):
        gamma = [random_lattice_matrix(rng, F, 2, max_shift=1) for _ in range(int(rng.integers(1, 4)))]
        result.checked += 1
        for report in mustafin.neighbourhood_components(gamma, 2):
            if report.is_component and not report.in_hull:
                result.fail(f"component at {report.vertex} outside the hull")
    return result


SUITES: Dict[str, Callable[[np.random.Generator, int], SuiteResult]] = {
    'valuation_axioms': valuation_axioms,
    'smith_reconstruction': smith_reconstruction,
    'rank_nullity': rank_nullity,
    'annihilator_equivalence': annihilator_equivalence,
    'degree_lower_bound': degree_lower_bound,
    'norm_screen': norm_screen,
    'monotone_sequences': monotone_sequences,
    'k_limit_identity': k_limit_identity,
    'lattice_canonical_forms': lattice_canonical_forms,
    'intersection_meet': intersection_meet,
    'hull_convexity': hull_convexity,
    'basis_criterion': basis_criterion_suite,
    'component_locality': component_locality,
}

DEFAULT_TRIALS = {
    'valuation_axioms': 10_000,
    'smith_reconstruction': 100,
    'rank_nullity': 30,
    'annihilator_equivalence': 1000,
    'degree_lower_bound': 200,
    'norm_screen': 200,
    'monotone_sequences': 20,
    'k_limit_identity': 200,
    'lattice_canonical_forms': 100,
    'intersection_meet': 100,
    'hull_convexity': 20,
    'basis_criterion': 100,
    'component_locality': 10,
}


def run_suite(name: str, trials: Optional[int] = None, seed: Optional[int] = None) -> SuiteResult:
    rng = make_rng(seed)
    trials = DEFAULT_TRIALS[name] if trials is None else trials
    result = SUITES[name](rng, trials)
    logger.info("suite %s: %d checked, %d failures", name, result.checked, len(result.failures))
    return result
