"""
Skew Group Algebra
==================
sigma-polynomials f = sum f_i sigma^i in S[G] for S = GR(p^k, n) and G the
cyclic group generated by the Frobenius sigma. Exponents live modulo n and
multiplication follows the twist (a sigma^i)(b sigma^j) = a sigma^i(b) sigma^(i+j).

Besides the arithmetic this module carries the matrix representation with
respect to an integral basis, depth reduction and truncation, right
division, annihilator polynomials of free submodules, the truncated Moore
factorization and the norm criterion for polynomials of minimal rank.

Location: algebra/skew_algebra.py
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .chain_rings import (
    BasisWithDual,
    GaloisRing,
    GaloisRingElement,
    dual_basis,
    integral_basis_test,
    moore_matrix,
    pi_assemble,
    pi_digits,
    residue_columns_over,
    ring_determinant,
)
from .exceptions import (
    DependentReduction,
    DepthExceeded,
    InvalidArgument,
    NonUnitCoefficient,
    NotIntegralBasis,
    NotMonic,
    RingMismatch,
    SingularTruncatedMoore,
)
from .local_linalg import RationalField, inner_rank, invert_matrix, rank_over_field, smith_form
from .valued_scalars import INFINITY, Valuation

logger = logging.getLogger(__name__)


class SigmaPoly:
    """Element of S[G]; coeffs[i] is the coefficient of sigma^i, i < n."""

    __slots__ = ('ring', 'coeffs')

    def __init__(self, ring: GaloisRing, coeffs: Sequence[Union[GaloisRingElement, int]] = ()):
        folded = [ring.zero] * ring.n
        for i, c in enumerate(coeffs):
            folded[i % ring.n] = folded[i % ring.n] + ring(c)
        object.__setattr__(self, 'ring', ring)
        object.__setattr__(self, 'coeffs', tuple(folded))

    def __setattr__(self, name, value):
        raise AttributeError("SigmaPoly is immutable")

    @classmethod
    def identity(cls, ring: GaloisRing) -> 'SigmaPoly':
        return cls(ring, [ring.one])

    @classmethod
    def monomial(cls, ring: GaloisRing, c, i: int = 1) -> 'SigmaPoly':
        coeffs = [ring.zero] * ring.n
        coeffs[i % ring.n] = ring(c)
        return cls(ring, coeffs)

    @classmethod
    def sigma(cls, ring: GaloisRing, i: int = 1) -> 'SigmaPoly':
        return cls.monomial(ring, ring.one, i)

    def __eq__(self, other):
        if not isinstance(other, SigmaPoly):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"SigmaPoly({self.ring}, {self.to_text()!r})"

    def _check(self, other: 'SigmaPoly'):
        if not isinstance(other, SigmaPoly) or other.ring != self.ring:
            raise RingMismatch("sigma-polynomials over different rings")

    @property
    def degree(self) -> Optional[int]:
        """deg_sigma, or None for the zero polynomial."""
        for i in range(self.ring.n - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return None

    @property
    def leading_coefficient(self) -> GaloisRingElement:
        d = self.degree
        return self.ring.zero if d is None else self.coeffs[d]

    def is_zero(self) -> bool:
        return self.degree is None

    def is_monic(self) -> bool:
        return self.degree is not None and self.leading_coefficient == self.ring.one

    def valuation(self) -> Valuation:
        return min((c.valuation() for c in self.coeffs), default=INFINITY)

    def __add__(self, other: 'SigmaPoly') -> 'SigmaPoly':
        self._check(other)
        return SigmaPoly(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: 'SigmaPoly') -> 'SigmaPoly':
        self._check(other)
        return SigmaPoly(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> 'SigmaPoly':
        return SigmaPoly(self.ring, [-a for a in self.coeffs])

    def __mul__(self, other: 'SigmaPoly') -> 'SigmaPoly':
        self._check(other)
        ring = self.ring
        n = ring.n
        out = [ring.zero] * n
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[(i + j) % n] = out[(i + j) % n] + a * ring.frobenius(b, i)
        return SigmaPoly(ring, out)

    def scale(self, c) -> 'SigmaPoly':
        """Left multiplication by a ring element."""
        c = self.ring(c)
        return SigmaPoly(self.ring, [c * a for a in self.coeffs])

    def __call__(self, x: GaloisRingElement) -> GaloisRingElement:
        return evaluate(self, x)

    def to_text(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            op = 'id' if i == 0 else ('sigma' if i == 1 else f'sigma^{i}')
            text = c.to_text()
            if c == self.ring.one:
                terms.append(op)
            elif '+' in text:
                terms.append(f'({text})*{op}')
            else:
                terms.append(f'{text}*{op}')
        return ' + '.join(terms) or '0'

    def to_json(self) -> dict:
        return {'ring': self.ring.to_json(), 'coeffs': [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> 'SigmaPoly':
        ring = GaloisRing.from_json(obj['ring'])
        return cls(ring, [ring.element(c) for c in obj['coeffs']])


def parse_sigma_poly(ring: GaloisRing, text: str) -> SigmaPoly:
    """
    Read a sigma-polynomial such as ``id + (1+3*xi)*sigma`` or ``sigma^2 - id``.

    Coefficients are written to the left of ``id``/``sigma``; ``xi`` and
    ``pi`` are read as in ring elements.
    """
    s, xi = sympy.symbols('sigma xi')
    try:
        expr = parse_expr(text, local_dict={'sigma': s, 'xi': xi, 'id': sympy.Integer(1),
                                            'pi': sympy.Integer(ring.p)},
                          transformations=standard_transformations + (convert_xor,))
        poly = sympy.Poly(sympy.expand(expr), s, xi, domain=sympy.ZZ)
    except Exception as exc:
        raise InvalidArgument(f"cannot read {text!r} as a sigma-polynomial: {exc}") from exc
    coeffs = [ring.zero] * ring.n
    for (i, m), c in poly.terms():
        coeffs[i % ring.n] = coeffs[i % ring.n] + ring.xi ** m * int(c)
    return SigmaPoly(ring, coeffs)


# ---------------------------------------------------------------------------
# arithmetic and evaluation
# ---------------------------------------------------------------------------

def skew_arith(f: SigmaPoly, g: SigmaPoly, op: str) -> SigmaPoly:
    if op == 'add':
        return f + g
    if op == 'mul':
        return f * g
    raise InvalidArgument(f"unknown operation {op!r}; expected add or mul")


def evaluate(f: SigmaPoly, x: GaloisRingElement) -> GaloisRingElement:
    """sum f_i sigma^i(x)."""
    if x.ring != f.ring:
        raise RingMismatch(f"cannot evaluate a polynomial over {f.ring} at an element of {x.ring}")
    total = f.ring.zero
    for i, c in enumerate(f.coeffs):
        if not c.is_zero():
            total = total + c * f.ring.frobenius(x, i)
    return total


def _basis_for(ring: GaloisRing, alpha) -> BasisWithDual:
    if alpha is None:
        return ring.standard_basis
    if isinstance(alpha, BasisWithDual):
        return alpha
    if not integral_basis_test(alpha):
        raise NotIntegralBasis(f"{[a.to_text() for a in alpha]} is not an integral basis")
    return dual_basis(alpha)


def matrix_rep(f: SigmaPoly, alpha=None) -> List[List[int]]:
    """
    Matrix of x -> f(x) over Z/p^k in the basis alpha (power basis by default).

    Column j holds the coordinates Tr(f(alpha_j) alpha*_i) of f(alpha_j).
    """
    basis = _basis_for(f.ring, alpha)
    if basis.ring != f.ring:
        raise RingMismatch(f"basis over {basis.ring} used with a polynomial over {f.ring}")
    n = f.ring.n
    moore = basis.moore
    columns = []
    for j in range(n):
        image = f.ring.zero
        for i, c in enumerate(f.coeffs):
            if not c.is_zero():
                image = image + c * moore[i][j]
        columns.append(basis.coordinates(image))
    return [[columns[j][i] for j in range(n)] for i in range(n)]


def inner_rank_of(f: SigmaPoly, alpha=None) -> int:
    return inner_rank(matrix_rep(f, alpha), f.ring.base)


# ---------------------------------------------------------------------------
# depth
# ---------------------------------------------------------------------------

def reduce_mod(f: SigmaPoly, i: int) -> SigmaPoly:
    """Coefficientwise reduction to the compatible ring of depth i."""
    target = f.ring.reduce(i)
    return SigmaPoly(target, [target.reduce_element(c) for c in f.coeffs])


def truncate(f: SigmaPoly, k: int) -> SigmaPoly:
    """Keep the Teichmüller digits 0..k of every coefficient."""
    if not 0 <= k < f.ring.k:
        raise DepthExceeded(f"truncation index {k} outside 0..{f.ring.k - 1}", depth=f.ring.k)
    return SigmaPoly(f.ring, [pi_assemble(pi_digits(c)[:k + 1]) for c in f.coeffs])


def depth_rank_profile(f: SigmaPoly) -> List[Dict[str, int]]:
    """
    Ranks of f across depths: inner rank of the reduction to depth k, and
    fraction-field ranks of the integer lifts of the truncation f|_(k-1) and
    of f itself. Reported only; no ordering between them is asserted.
    """
    full_rank = rank_over_field(matrix_rep(f), RationalField())
    profile = []
    for k in range(1, f.ring.k + 1):
        reduced = reduce_mod(f, k)
        profile.append({
            'depth': k,
            'inner_rank': inner_rank(matrix_rep(reduced), reduced.ring.base),
            'truncation_rank': rank_over_field(matrix_rep(truncate(f, k - 1)), RationalField()),
            'rank': full_rank,
        })
    return profile


# ---------------------------------------------------------------------------
# division and annihilators
# ---------------------------------------------------------------------------

def right_divide(f: SigmaPoly, g: SigmaPoly) -> Tuple[SigmaPoly, SigmaPoly]:
    """
    Right Euclidean division f = q·g + r with r = 0 or deg r < deg g.

    Raises:
        NotMonic: if g is zero or its leading coefficient is not 1
    """
    f._check(g)
    if not g.is_monic():
        raise NotMonic(f"divisor {g.to_text()} is not monic")
    ring = f.ring
    dg = g.degree
    q = SigmaPoly(ring)
    r = f
    while not r.is_zero() and r.degree >= dg:
        term = SigmaPoly.monomial(ring, r.leading_coefficient, r.degree - dg)
        q = q + term
        r = r - term * g
    return q, r


def _check_submodule(beta: Sequence[GaloisRingElement], ring: Optional[GaloisRing]) -> GaloisRing:
    if ring is None:
        if not beta:
            raise InvalidArgument("the ring is required for an empty family")
        ring = beta[0].ring
    if any(b.ring != ring for b in beta):
        raise RingMismatch(f"family is not contained in {ring}")
    if len(beta) >= ring.n:
        raise InvalidArgument(
            f"annihilators exist for families of fewer than {ring.n} elements, got {len(beta)}"
        )
    return ring


def annihilator_recursive(beta: Sequence[GaloisRingElement], ring: Optional[GaloisRing] = None) -> SigmaPoly:
    """
    Monic annihilator of the free submodule spanned by beta, built one generator at a time.

    f_0 = id and f_(N+1) = (sigma - sigma(y)/y · id) ∘ f_N with y = f_N(beta_(N+1)).

    Raises:
        DependentReduction: if some y is not a unit (the reductions of beta are dependent)
    """
    ring = _check_submodule(beta, ring)
    f = SigmaPoly.identity(ring)
    for step, b in enumerate(beta):
        y = evaluate(f, b)
        if not y.is_unit():
            raise DependentReduction(
                f"f_{step}(beta_{step + 1}) = {y.to_text()} is not a unit", step=step + 1
            )
        factor = SigmaPoly(ring, [-(ring.frobenius(y) / y), ring.one])
        f = factor * f
    return f


def annihilator_determinant(beta: Sequence[GaloisRingElement], ring: Optional[GaloisRing] = None) -> SigmaPoly:
    """
    Monic annihilator from maximal minors of the (r+1)×r Moore matrix of beta.

    h_i is the determinant with row i removed; f = h_r^(-1) sum (-1)^(r+i) h_i sigma^i.

    Raises:
        SingularTruncatedMoore: if h_r is not a unit
    """
    ring = _check_submodule(beta, ring)
    r = len(beta)
    if r == 0:
        return SigmaPoly.identity(ring)
    moore = moore_matrix(beta, r + 1)
    minors = [ring_determinant(moore[:i] + moore[i + 1:], ring) for i in range(r + 1)]
    if not minors[r].is_unit():
        raise SingularTruncatedMoore(f"truncated Moore determinant {minors[r].to_text()} is not a unit")
    lead_inv = minors[r].inverse()
    coeffs = [lead_inv * (minors[i] if (r + i) % 2 == 0 else -minors[i]) for i in range(r + 1)]
    return SigmaPoly(ring, coeffs)


@dataclass(frozen=True)
class MooreFactorization:
    """M_r(alpha)·A = M_r(beta)·diag(e) with A invertible over Z/p^k."""

    alpha: Tuple[GaloisRingElement, ...]
    transform: Tuple[Tuple[int, ...], ...]
    beta: Tuple[GaloisRingElement, ...]
    divisors: Tuple[int, ...]
    divisor_valuations: Tuple[Valuation, ...]

    def verify(self) -> bool:
        r = len(self.alpha)
        ring = self.alpha[0].ring
        left = moore_matrix(self.alpha, r)
        right = moore_matrix(self.beta, r)
        for i in range(r):
            for j in range(r):
                lhs = ring.zero
                for m in range(r):
                    lhs = lhs + left[i][m] * self.transform[m][j]
                if lhs != right[i][j] * self.divisors[j]:
                    return False
        return ring_determinant(right, ring).is_unit()

    def to_json(self) -> dict:
        return {
            'A': [list(row) for row in self.transform],
            'beta': [b.to_json() for b in self.beta],
            'divisors': list(self.divisors),
            'divisor_valuations': ['inf' if v is INFINITY else v for v in self.divisor_valuations],
        }


def moore_factorization(alpha: Sequence[GaloisRingElement]) -> MooreFactorization:
    """
    Factor the r×r truncated Moore matrix of alpha through a family beta of
    independent reduction and the elementary divisors of the module alpha spans.

    Built from the Smith form L·C·R = D of the coordinate matrix C of alpha:
    A = R, beta_j = column j of L^(-1), e_j = p^(v_j) (0 when the divisor vanishes).
    """
    alpha = tuple(alpha)
    if not alpha:
        raise InvalidArgument("moore_factorization needs a nonempty family")
    ring = alpha[0].ring
    if len(alpha) > ring.n:
        raise InvalidArgument(f"at most {ring.n} elements can be factored, got {len(alpha)}")
    base = ring.base
    coords = residue_columns_over(ring, alpha)
    snf = smith_form(coords, base)
    left_inv = invert_matrix(base, [list(row) for row in snf.left])
    beta = tuple(ring.element([left_inv[m][j] for m in range(ring.n)]) for j in range(len(alpha)))
    divisors = tuple(0 if v is INFINITY else base.pi_power(v) for v in snf.divisor_valuations)
    result = MooreFactorization(alpha, snf.right, beta, divisors, snf.divisor_valuations)
    logger.debug("moore factorization of %d elements: divisors %s", len(alpha), divisors)
    return result


# ---------------------------------------------------------------------------
# norm criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormReport:
    holds: bool
    norm_value: GaloisRingElement
    target: GaloisRingElement

    def to_json(self) -> dict:
        return {'holds': self.holds, 'norm_value': self.norm_value.to_json(),
                'target': self.target.to_json()}


def norm_condition_check(f: SigmaPoly, ell: int) -> NormReport:
    """
    Compare Norm(f_0 / f_ell) with (-1)^(ell·n).

    Every f of degree ell with inner rank n - ell passes; a failure certifies
    inner rank above n - ell.

    Raises:
        InvalidArgument: if deg f differs from ell
        NonUnitCoefficient: if f_0 or f_ell is not a unit
    """
    ring = f.ring
    if f.degree != ell:
        raise InvalidArgument(f"{f.to_text()} has degree {f.degree}, expected {ell}")
    f0, fl = f.coeffs[0], f.coeffs[ell]
    for name, c in (('f_0', f0), (f'f_{ell}', fl)):
        if not c.is_unit():
            raise NonUnitCoefficient(f"{name} = {c.to_text()} is not a unit", coefficient=name)
    norm_value = ring.norm(f0 / fl)
    target = ring((-1) ** (ell * ring.n))
    return NormReport(norm_value == target, norm_value, target)
