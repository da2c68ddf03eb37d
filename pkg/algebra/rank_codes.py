"""
Rank-Metric Codes
=================
Linear codes inside S[G] over the chain ring R = Z/p^k: Gabidulin and
twisted Gabidulin codes, codes spanned by arbitrary generators, their
reductions C_i to every depth, brute-force minimum distances, the
Singleton-like bound and the filtration sequences k_i(C), d_i(C).

Location: algebra/rank_codes.py
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .chain_rings import GaloisRing, GaloisRingElement
from .conf import get_setting
from .exceptions import (
    BudgetExceeded,
    DepthExceeded,
    InvalidArgument,
    MonotonicityViolation,
    RingMismatch,
)
from .local_linalg import inner_rank, invert_matrix, smith_form
from .skew_algebra import SigmaPoly, matrix_rep, reduce_mod
from .valued_scalars import INFINITY, Valuation, valuation_to_json

logger = logging.getLogger(__name__)

KINDS = ('gabidulin', 'twisted', 'custom')


@dataclass(frozen=True)
class CodeSpec:
    """
    Description of a code C in S[G].

    gabidulin: {sum_(i<ell) f_i sigma^i}
    twisted:   {sum_(i<ell) f_i sigma^i + eta sigma^h(f_0) sigma^ell}, ell < n, eta != 0
    custom:    the R-span of ``generators``
    """

    ring: GaloisRing
    kind: str
    ell: int = 1
    eta: Optional[GaloisRingElement] = None
    h: int = 0
    generators: Tuple[SigmaPoly, ...] = field(default_factory=tuple)

    def __post_init__(self):
        n = self.ring.n
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown code kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == 'gabidulin' and not 1 <= self.ell <= n:
            raise InvalidArgument(f"Gabidulin codes need 1 <= ell <= {n}, got {self.ell}")
        if self.kind == 'twisted':
            if not 1 <= self.ell < n:
                raise InvalidArgument(f"twisted codes need 1 <= ell < {n}, got {self.ell}")
            if self.eta is None or self.eta.is_zero():
                raise InvalidArgument("twisted codes need a nonzero eta")
            if self.eta.ring != self.ring:
                raise RingMismatch(f"eta lives in {self.eta.ring}, the code in {self.ring}")
            object.__setattr__(self, 'h', self.h % n)
        if self.kind == 'custom':
            if not self.generators:
                raise InvalidArgument("custom codes need at least one generator")
            if any(g.ring != self.ring for g in self.generators):
                raise RingMismatch(f"generators must lie in {self.ring}[G]")
            object.__setattr__(self, 'generators', tuple(self.generators))

    @property
    def depth(self) -> int:
        return self.ring.k

    def generator_polys(self) -> List[SigmaPoly]:
        """An R-generating set of C."""
        ring = self.ring
        powers = ring.power_basis()
        if self.kind == 'custom':
            return list(self.generators)
        gens = []
        first = 0 if self.kind == 'gabidulin' else 1
        if self.kind == 'twisted':
            for xm in powers:
                gens.append(SigmaPoly.monomial(ring, xm, 0)
                            + SigmaPoly.monomial(ring, self.eta * ring.frobenius(xm, self.h), self.ell))
        for i in range(first, self.ell):
            for xm in powers:
                gens.append(SigmaPoly.monomial(ring, xm, i))
        return gens

    def to_json(self) -> dict:
        out = {'ring': self.ring.to_json(), 'kind': self.kind, 'ell': self.ell}
        if self.kind == 'twisted':
            out.update(eta=self.eta.to_json(), h=self.h)
        if self.kind == 'custom':
            out['generators'] = [g.to_json() for g in self.generators]
        return out


def coordinate_vector(f: SigmaPoly) -> List[int]:
    """Coordinates of f in the n²-dimensional ambient: index i·n + m holds coeff m of f_i."""
    return [c for coeff in f.coeffs for c in coeff.coeffs]


def _coordinate_matrix(polys: Sequence[SigmaPoly]) -> List[List[int]]:
    columns = [coordinate_vector(f) for f in polys]
    return [list(row) for row in zip(*columns)]


def code_divisor_valuations(spec: CodeSpec, depth: Optional[int] = None) -> Tuple[Valuation, ...]:
    """Elementary divisor valuations of C inside the n² ambient, over Z/p^depth."""
    depth = spec.depth if depth is None else depth
    gens = [reduce_mod(g, depth) for g in spec.generator_polys()]
    return smith_form(_coordinate_matrix(gens), spec.ring.reduce(depth).base,
                      transforms=False).divisor_valuations


def k_sequence(divisor_valuations: Sequence[Valuation], i: int) -> Fraction:
    """k_i = (1/i) · sum over divisors with val < i of (i - val)."""
    if i < 1:
        raise InvalidArgument(f"depth must be positive, got {i}")
    return Fraction(sum(i - v for v in divisor_valuations if v is not INFINITY and v < i), i)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Span:
    """C_i as {sum c_j b_j : 0 <= c_j < ranges[j]}, each element exactly once."""

    ring: GaloisRing
    basis: Tuple[SigmaPoly, ...]
    ranges: Tuple[int, ...]

    @property
    def count(self) -> int:
        return math.prod(self.ranges)

    def combine(self, coeffs: Sequence[int]) -> SigmaPoly:
        total = SigmaPoly(self.ring)
        for c, b in zip(coeffs, self.basis):
            if c:
                total = total + b.scale(c)
        return total


def _span_at_depth(spec: CodeSpec, depth: int) -> _Span:
    if not 1 <= depth <= spec.depth:
        raise DepthExceeded(f"depth {depth} outside 1..{spec.depth}", depth=spec.depth)
    target = spec.ring.reduce(depth)
    q = target.base_modulus
    if spec.kind != 'custom':
        basis = tuple(reduce_mod(g, depth) for g in spec.generator_polys())
        return _Span(target, basis, (q,) * len(basis))

    gens = [reduce_mod(g, depth) for g in spec.generators]
    base = target.base
    snf = smith_form(_coordinate_matrix(gens), base)
    left_inv = invert_matrix(base, [list(row) for row in snf.left])
    n = target.n
    basis, ranges = [], []
    for j, v in enumerate(snf.divisor_valuations):
        if v is INFINITY:
            continue
        column = [left_inv[r][j] * base.pi_power(v) % q for r in range(n * n)]
        basis.append(SigmaPoly(target, [target.element(column[i * n:(i + 1) * n]) for i in range(n)]))
        ranges.append(target.p ** (depth - v))
    return _Span(target, tuple(basis), tuple(ranges))


def _check_budget(count: int, budget: Optional[int]):
    budget = get_setting('ALGEBRA_ENUMERATION_BUDGET') if budget is None else budget
    if count > budget:
        raise BudgetExceeded(count, budget)


def enumerate_codewords(spec: CodeSpec, depth: int, budget: Optional[int] = None) -> Iterator[SigmaPoly]:
    """
    Stream the distinct elements of C_i in a fixed order.

    Raises:
        DepthExceeded: if depth is outside 1..k
        BudgetExceeded: if |C_i| exceeds the budget (checked before streaming)
    """
    span = _span_at_depth(spec, depth)
    _check_budget(span.count, budget)
    return (span.combine(coeffs) for coeffs in itertools.product(*(range(r) for r in span.ranges)))


def _codeword_ranks(spec: CodeSpec, depth: int, budget: Optional[int],
                    minimal_only: bool = False) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """
    (coefficients, inner rank) for every nonzero codeword, using linearity of matrix_rep.

    With ``minimal_only`` the codewords lying in pi·C_i are skipped: the
    span is a direct sum over its basis, so those are exactly the
    coefficient vectors divisible by p.
    """
    span = _span_at_depth(spec, depth)
    _check_budget(span.count, budget)
    base = span.ring.base
    p, q = span.ring.p, base.modulus
    n = span.ring.n
    reps = [matrix_rep(b) for b in span.basis]
    for coeffs in itertools.product(*(range(r) for r in span.ranges)):
        if not any(coeffs) or (minimal_only and not any(c % p for c in coeffs)):
            continue
        M = [[0] * n for _ in range(n)]
        for c, rep in zip(coeffs, reps):
            if c:
                for r in range(n):
                    row, src = M[r], rep[r]
                    for s in range(n):
                        row[s] += c * src[s]
        M = [[x % q for x in row] for row in M]
        yield coeffs, inner_rank(M, base)


def min_distance(spec: CodeSpec, depth: int, budget: Optional[int] = None) -> int:
    """d_i: minimal inner rank over the codewords of C_i outside pi·C_i (0 for the zero code)."""
    best = None
    for _, rank in _codeword_ranks(spec, depth, budget, minimal_only=True):
        if best is None or rank < best:
            best = rank
            if best == 1:
                break
    logger.debug("d_%d of %s code over %s: %s", depth, spec.kind, spec.ring, best)
    return best or 0


def codewords_of_rank(spec: CodeSpec, depth: int, rank: int, limit: Optional[int] = None,
                      budget: Optional[int] = None) -> List[SigmaPoly]:
    """Codewords of C_i whose inner rank equals ``rank`` (at most ``limit`` of them)."""
    span = _span_at_depth(spec, depth)
    found = []
    for coeffs, r in _codeword_ranks(spec, depth, budget):
        if r == rank:
            found.append(span.combine(coeffs))
            if limit is not None and len(found) >= limit:
                break
    return found


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def norm_certificate(ring: GaloisRing, eta: GaloisRingElement, ell: int) -> Dict[str, object]:
    """Norm(eta) against (-1)^(ell·n); a difference guarantees the twisted code is MRD."""
    norm = ring.norm(ring(eta))
    target = ring((-1) ** (ell * ring.n))
    return {'norm': norm.to_json(), 'target': target.to_json(), 'mrd_guaranteed': norm != target}


@dataclass(frozen=True)
class SingletonReport:
    depth: int
    min_distance: int
    bound: int
    free_rank: int
    inner_rank: int
    log_size: Fraction
    is_free: bool
    is_mrd: bool
    norm_certificate: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            'depth': self.depth,
            'min_distance': self.min_distance,
            'bound': self.bound,
            'free_rank': self.free_rank,
            'inner_rank': self.inner_rank,
            'log_size': str(self.log_size),
            'is_free': self.is_free,
            'is_mrd': self.is_mrd,
        }
        if self.norm_certificate is not None:
            out['norm_certificate'] = self.norm_certificate
        return out


def _singleton_from(spec: CodeSpec, depth: int, d: int) -> SingletonReport:
    n = spec.ring.n
    vals = code_divisor_valuations(spec, depth)
    finite = [v for v in vals if v is not INFINITY]
    free_rank = sum(1 for v in finite if v == 0)
    is_free = all(v == 0 for v in finite)
    bound = n * (n - d + 1)
    certificate = None
    if spec.kind == 'twisted':
        reduced = spec.ring.reduce(depth)
        certificate = norm_certificate(reduced, reduced.reduce_element(spec.eta), spec.ell)
    return SingletonReport(
        depth=depth,
        min_distance=d,
        bound=bound,
        free_rank=free_rank,
        inner_rank=len(finite),
        log_size=k_sequence(vals, depth),
        is_free=is_free,
        is_mrd=is_free and free_rank == bound,
        norm_certificate=certificate,
    )


def singleton_check(spec: CodeSpec, depth: int, budget: Optional[int] = None) -> SingletonReport:
    """
    Singleton-like bound n(n - d_i + 1) against the module structure of C_i.

    log_size <= inner_rank <= bound holds for every code.
    """
    return _singleton_from(spec, depth, min_distance(spec, depth, budget))


@dataclass(frozen=True)
class FiltrationReport:
    depths: Tuple[int, ...]
    k_values: Tuple[Fraction, ...]
    d_values: Tuple[int, ...]
    divisor_valuations: Tuple[Valuation, ...]
    mrd_flags: Tuple[bool, ...]

    def to_json(self) -> dict:
        return {
            'depths': list(self.depths),
            'k_values': [str(k) for k in self.k_values],
            'd_values': list(self.d_values),
            'divisor_valuations': [valuation_to_json(v) for v in self.divisor_valuations],
            'mrd_flags': list(self.mrd_flags),
        }


def filtration_report(spec: CodeSpec, up_to: int, budget: Optional[int] = None) -> FiltrationReport:
    """
    k_i(C) and d_i(C) for i = 1..up_to.

    Raises:
        DepthExceeded: if up_to exceeds the ring depth
        MonotonicityViolation: if k_i decreases, or d_i decreases for a saturated code
    """
    if not 1 <= up_to <= spec.depth:
        raise DepthExceeded(f"filtration depth {up_to} outside 1..{spec.depth}", depth=spec.depth)
    vals = code_divisor_valuations(spec)
    depths = tuple(range(1, up_to + 1))
    k_values = tuple(k_sequence(vals, i) for i in depths)
    d_values, flags = [], []
    for i in depths:
        d = min_distance(spec, i, budget)
        d_values.append(d)
        flags.append(_singleton_from(spec, i, d).is_mrd)
    checked = [('k', k_values)]
    if all(v is INFINITY or v == 0 for v in vals):
        checked.append(('d', d_values))
    elif any(a > b for a, b in zip(d_values, d_values[1:])):
        logger.warning("d_i sequence %s decreases for the non-saturated code %s", d_values, spec.to_json())
    for name, seq in checked:
        if any(a > b for a, b in zip(seq, seq[1:])):
            logger.error("%s sequence %s decreases for %s", name, [str(x) for x in seq], spec.to_json())
            raise MonotonicityViolation(f"{name}_i sequence is not nondecreasing", sequence=name)
    return FiltrationReport(depths, k_values, tuple(d_values), vals, tuple(flags))
