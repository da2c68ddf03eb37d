"""
Chain Rings
===========
Finite chain rings Z/p^k and Galois rings GR(p^k, n) = (Z/p^k)[x]/(h):
Frobenius, trace and norm, Teichmüller lifts, pi-adic digits, G-Moore
matrices, dual bases and the integral-basis test.

Rings come from build_galois_ring, which picks the basic irreducible h
deterministically so its root xi is a Teichmüller element.

Location: algebra/chain_rings.py
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .exceptions import (
    AlgebraError,
    DepthMismatch,
    InvalidArgument,
    NotPrime,
    RingMismatch,
    SingularMooreMatrix,
)
from .local_linalg import PrimeField, invert_matrix, rank_over_field
from .valued_scalars import INFINITY, Valuation

logger = logging.getLogger(__name__)


def _p_multiplicity(p: int, a: int, cap: int) -> int:
    v = 0
    while v < cap and a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class ResidueRing:
    """Z/p^k as a local ring; elements are ints in [0, p^k)."""

    p: int
    k: int

    zero = 0
    one = 1

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    @property
    def depth(self) -> int:
        return self.k

    def coerce(self, a) -> int:
        if isinstance(a, GaloisRingElement):
            a = a.to_int()
        return int(a) % self.modulus

    def is_zero(self, a) -> bool:
        return a % self.modulus == 0

    def valuation(self, a) -> Valuation:
        a %= self.modulus
        if a == 0:
            return INFINITY
        return _p_multiplicity(self.p, a, self.k)

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def inverse(self, a) -> int:
        return pow(a, -1, self.modulus)

    def add(self, a, b) -> int:
        return (a + b) % self.modulus

    def sub(self, a, b) -> int:
        return (a - b) % self.modulus

    def mul(self, a, b) -> int:
        return a * b % self.modulus

    def quotient(self, a, b) -> int:
        """Some c with b·c = a; requires val(a) >= val(b)."""
        a %= self.modulus
        v = self.valuation(b)
        pv = self.p ** v
        return (a // pv) * pow((b % self.modulus) // pv, -1, self.modulus) % self.modulus

    def pi_power(self, v: int) -> int:
        return pow(self.p, v, self.modulus)

    def elements(self) -> range:
        return range(self.modulus)

    def __str__(self):
        return f"Z/{self.modulus}"


class GaloisRingElement:
    """Element of GR(p^k, n) in the power basis 1, xi, ..., xi^(n-1)."""

    __slots__ = ('ring', 'coeffs')

    def __init__(self, ring: 'GaloisRing', coeffs: Tuple[int, ...]):
        object.__setattr__(self, 'ring', ring)
        object.__setattr__(self, 'coeffs', coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("GaloisRingElement is immutable")

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, GaloisRingElement):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"{self.ring}[{self.to_text()}]"

    def _coerce(self, other) -> 'GaloisRingElement':
        if isinstance(other, GaloisRingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"cannot combine elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring(other)
        raise RingMismatch(f"cannot combine a ring element with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        q = self.ring.base_modulus
        return GaloisRingElement(self.ring, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        q = self.ring.base_modulus
        return GaloisRingElement(self.ring, tuple((a - b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        q = self.ring.base_modulus
        return GaloisRingElement(self.ring, tuple(-a % q for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        return GaloisRingElement(self.ring, self.ring.multiply_coeffs(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return any(a % self.ring.p for a in self.coeffs)

    def inverse(self) -> 'GaloisRingElement':
        if not self.is_unit():
            raise InvalidArgument(f"{self.to_text()} is not a unit of {self.ring}")
        return self ** (self.ring.unit_group_order - 1)

    def valuation(self) -> Valuation:
        if self.is_zero():
            return INFINITY
        return min(_p_multiplicity(self.ring.p, a, self.ring.k) for a in self.coeffs if a)

    def residue(self) -> Tuple[int, ...]:
        return tuple(a % self.ring.p for a in self.coeffs)

    def frobenius(self, j: int = 1) -> 'GaloisRingElement':
        return self.ring.frobenius(self, j)

    def in_base_ring(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.in_base_ring():
            raise InvalidArgument(f"{self.to_text()} does not lie in Z/{self.ring.base_modulus}")
        return self.coeffs[0]

    def to_text(self) -> str:
        terms = []
        for m, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if m == 0:
                terms.append(str(c))
            else:
                mono = 'xi' if m == 1 else f'xi^{m}'
                terms.append(mono if c == 1 else f'{c}*{mono}')
        return '+'.join(terms) or '0'

    def to_json(self) -> List[int]:
        return list(self.coeffs)


@dataclass(frozen=True)
class GaloisRing:
    """
    GR(p^k, n) with basic irreducible h (constant term first, monic, length n+1).

    Doubles as the ChainRingDescriptor of the ring: equal descriptors mean
    equal rings.
    """

    p: int
    k: int
    n: int
    modulus: Tuple[int, ...]

    def __post_init__(self):
        if len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise InvalidArgument(f"modulus {self.modulus} is not monic of degree {self.n}")

    def __str__(self):
        return f"GR({self.base_modulus},{self.n})"

    @property
    def base_modulus(self) -> int:
        return self.p ** self.k

    @property
    def depth(self) -> int:
        return self.k

    @property
    def size(self) -> int:
        return self.base_modulus ** self.n

    @property
    def residue_size(self) -> int:
        return self.p ** self.n

    @property
    def unit_group_order(self) -> int:
        return (self.p ** self.n - 1) * self.p ** (self.n * (self.k - 1))

    @cached_property
    def base(self) -> ResidueRing:
        return ResidueRing(self.p, self.k)

    # construction --------------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> GaloisRingElement:
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            coeffs = list(self.multiply_coeffs(tuple(coeffs), (1,)))
        q = self.base_modulus
        padded = [int(c) % q for c in coeffs] + [0] * (self.n - len(coeffs))
        return GaloisRingElement(self, tuple(padded))

    def __call__(self, value) -> GaloisRingElement:
        if isinstance(value, GaloisRingElement):
            if value.ring != self:
                raise RingMismatch(f"element of {value.ring} used in {self}")
            return value
        if isinstance(value, int):
            return self.element([value])
        return self.element(value)

    def coerce(self, value) -> GaloisRingElement:
        return self(value)

    @cached_property
    def zero(self) -> GaloisRingElement:
        return self.element([0])

    @cached_property
    def one(self) -> GaloisRingElement:
        return self.element([1])

    @cached_property
    def xi(self) -> GaloisRingElement:
        if self.n == 1:
            return self.element([-self.modulus[0]])
        return self.element([0, 1])

    def multiply_coeffs(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        q = self.base_modulus
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        h = self.modulus
        n = self.n
        for deg in range(len(prod) - 1, n - 1, -1):
            c = prod[deg] % q
            if c:
                for i in range(n):
                    prod[deg - n + i] -= c * h[i]
            prod[deg] = 0
        out = [c % q for c in prod[:n]]
        return tuple(out + [0] * (n - len(out)))

    # local ring surface (for invert_matrix and determinants) -------------

    def is_zero(self, a: GaloisRingElement) -> bool:
        return a.is_zero()

    def is_unit(self, a: GaloisRingElement) -> bool:
        return a.is_unit()

    def inverse(self, a: GaloisRingElement) -> GaloisRingElement:
        return a.inverse()

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def add(self, a, b):
        return a + b

    # Frobenius -----------------------------------------------------------

    @cached_property
    def _frobenius_columns(self) -> List[List[Tuple[int, ...]]]:
        """_frobenius_columns[j][m] = coefficients of sigma^j(xi^m) = xi^(m p^j)."""
        order = self.residue_size - 1
        table = []
        for j in range(self.n):
            table.append([(self.xi ** (m * self.p ** j % order)).coeffs for m in range(self.n)])
        return table

    def frobenius(self, x: GaloisRingElement, j: int = 1) -> GaloisRingElement:
        x = self(x)
        j %= self.n
        if j == 0:
            return x
        q = self.base_modulus
        cols = self._frobenius_columns[j]
        out = [0] * self.n
        for m, c in enumerate(x.coeffs):
            if c:
                for i, v in enumerate(cols[m]):
                    out[i] += c * v
        return GaloisRingElement(self, tuple(v % q for v in out))

    def trace(self, x: GaloisRingElement) -> GaloisRingElement:
        total = self.zero
        for j in range(self.n):
            total = total + self.frobenius(x, j)
        return total

    def norm(self, x: GaloisRingElement) -> GaloisRingElement:
        total = self.one
        for j in range(self.n):
            total = total * self.frobenius(x, j)
        return total

    # reduction and enumeration ------------------------------------------

    def reduce(self, i: int) -> 'GaloisRing':
        """The compatible ring of depth i."""
        if not 1 <= i <= self.k:
            raise DepthMismatch(f"cannot reduce {self} to depth {i}", depth=self.k, target=i)
        q = self.p ** i
        return GaloisRing(self.p, i, self.n, tuple(c % q for c in self.modulus))

    def is_reduction_of(self, other: 'GaloisRing') -> bool:
        return (self.p == other.p and self.n == other.n and self.k <= other.k
                and tuple(c % self.base_modulus for c in other.modulus) == self.modulus)

    def reduce_element(self, x: GaloisRingElement) -> GaloisRingElement:
        """Image in this ring of an element of a deeper compatible ring."""
        if not self.is_reduction_of(x.ring):
            raise DepthMismatch(f"{self} is not a reduction of {x.ring}")
        return self.element(x.coeffs)

    def lift_element(self, x: GaloisRingElement) -> GaloisRingElement:
        """Integer-coefficient lift of an element of a shallower compatible ring."""
        if not x.ring.is_reduction_of(self):
            raise DepthMismatch(f"{x.ring} is not a reduction of {self}")
        return self.element(x.coeffs)

    def elements(self) -> Iterator[GaloisRingElement]:
        for coeffs in itertools.product(range(self.base_modulus), repeat=self.n):
            yield GaloisRingElement(self, coeffs)

    def residue_field_elements(self) -> Iterator[Tuple[int, ...]]:
        return itertools.product(range(self.p), repeat=self.n)

    def units(self) -> Iterator[GaloisRingElement]:
        return (x for x in self.elements() if x.is_unit())

    def power_basis(self) -> Tuple[GaloisRingElement, ...]:
        return tuple(self.xi ** m for m in range(self.n))

    @cached_property
    def standard_basis(self) -> 'BasisWithDual':
        return dual_basis(self.power_basis())

    def to_json(self) -> Dict[str, object]:
        return {'p': self.p, 'k': self.k, 'n': self.n, 'h': list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> 'GaloisRing':
        return cls(int(obj['p']), int(obj['k']), int(obj['n']), tuple(int(c) for c in obj['h']))


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _least_irreducible(p: int, n: int) -> Tuple[int, ...]:
    x = sympy.Symbol('x')
    for tail in itertools.product(range(p), repeat=n):
        coeffs = tail + (1,)
        if sympy.Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible:
            return coeffs
    raise AlgebraError(f"no irreducible polynomial of degree {n} over F_{p}")


@lru_cache(maxsize=None)
def build_galois_ring(p: int, k: int, n: int) -> GaloisRing:
    """
    Build GR(p^k, n) with a deterministic basic irreducible.

    The lexicographically least monic irreducible over F_p (coefficient
    tuples compared constant term first) is lifted to the monic divisor of
    x^(p^n - 1) - 1 over Z/p^k with the same reduction. For n = 1 the ring is
    Z/p^k with h = x - 1.

    Raises:
        NotPrime: if p is not prime
        InvalidArgument: if k or n is not positive
    """
    if not isinstance(p, int) or not sympy.isprime(p):
        raise NotPrime(f"{p} is not a prime", p=p)
    if k < 1 or n < 1:
        raise InvalidArgument(f"depth and degree must be positive, got k={k}, n={n}")
    q = p ** k
    if n == 1:
        return GaloisRing(p, k, 1, (q - 1, 1))

    f = _least_irreducible(p, n)
    scratch = GaloisRing(p, k, n, f)
    root = scratch.element([0, 1])
    for _ in range(k):
        root = root ** (p ** n)

    # h = prod_i (X - root^(p^i)); coefficients land in Z/p^k
    poly = [scratch.one]
    conjugate = root
    for _ in range(n):
        shifted = [scratch.zero] + poly
        for i in range(len(poly)):
            shifted[i] = shifted[i] - conjugate * poly[i]
        poly = shifted
        conjugate = conjugate ** p
    if not all(c.in_base_ring() for c in poly):
        raise AlgebraError(f"Hensel lift of {f} did not descend to Z/{q}")
    modulus = tuple(c.coeffs[0] for c in poly)

    ring = GaloisRing(p, k, n, modulus)
    if ring.xi ** (p ** n - 1) != ring.one:
        raise AlgebraError(f"root of {modulus} is not a Teichmüller element")
    logger.debug("built %s with basic irreducible %s (residue %s)", ring, modulus, f)
    return ring


# ---------------------------------------------------------------------------
# element operations
# ---------------------------------------------------------------------------

def frobenius(x: GaloisRingElement, j: int = 1) -> GaloisRingElement:
    return x.ring.frobenius(x, j)


def trace_norm(x: GaloisRingElement) -> Tuple[GaloisRingElement, GaloisRingElement]:
    return x.ring.trace(x), x.ring.norm(x)


ResidueInput = Union[int, Sequence[int], GaloisRingElement]


def teichmuller_lift(ring: GaloisRing, r: ResidueInput) -> GaloisRingElement:
    """The unique y with y^(p^n) = y reducing to r mod p."""
    if isinstance(r, GaloisRingElement):
        r = r.residue()
    elif isinstance(r, int):
        r = [r]
    y = ring.element([c % ring.p for c in r])
    exponent = ring.residue_size
    for _ in range(ring.k):
        y = y ** exponent
    return y


def pi_digits(x: GaloisRingElement) -> List[GaloisRingElement]:
    """Teichmüller digits d_0..d_(k-1) with x = sum d_i p^i."""
    ring = x.ring
    digits = []
    rem = x
    for i in range(ring.k):
        scale = ring.p ** i
        digit = teichmuller_lift(ring, [c // scale for c in rem.coeffs])
        digits.append(digit)
        rem = rem - digit * scale
    return digits


def pi_assemble(digits: Sequence[GaloisRingElement]) -> GaloisRingElement:
    ring = digits[0].ring
    total = ring.zero
    for i, digit in enumerate(digits):
        total = total + digit * (ring.p ** i)
    return total


# ---------------------------------------------------------------------------
# Moore matrices and bases
# ---------------------------------------------------------------------------

def _common_ring(alpha: Sequence[GaloisRingElement]) -> GaloisRing:
    if not alpha:
        raise InvalidArgument("an empty family has no ring")
    ring = alpha[0].ring
    for a in alpha[1:]:
        if a.ring != ring:
            raise RingMismatch(f"family mixes {ring} and {a.ring}")
    return ring


def moore_matrix(alpha: Sequence[GaloisRingElement], s: int) -> List[List[GaloisRingElement]]:
    """s×r matrix with entry (i, j) = sigma^i(alpha_j)."""
    ring = _common_ring(alpha)
    if not 1 <= s <= ring.n:
        raise InvalidArgument(f"Moore row count must lie in 1..{ring.n}, got {s}")
    return [[ring.frobenius(a, i) for a in alpha] for i in range(s)]


def ring_determinant(M: Sequence[Sequence[GaloisRingElement]], ring: GaloisRing) -> GaloisRingElement:
    """Leibniz expansion; square matrices of the small sizes used here only."""
    size = len(M)
    total = ring.zero
    for perm in itertools.permutations(range(size)):
        inversions = sum(1 for a in range(size) for b in range(a + 1, size) if perm[a] > perm[b])
        term = ring.one
        for row, col in enumerate(perm):
            term = term * M[row][col]
            if term.is_zero():
                break
        total = total - term if inversions % 2 else total + term
    return total


@dataclass(frozen=True)
class BasisWithDual:
    """An integral basis alpha with its trace-dual alpha* (Tr(alpha_i alpha*_j) = delta_ij)."""

    alpha: Tuple[GaloisRingElement, ...]
    alpha_star: Tuple[GaloisRingElement, ...]

    @property
    def ring(self) -> GaloisRing:
        return self.alpha[0].ring

    @cached_property
    def moore(self) -> List[List[GaloisRingElement]]:
        return moore_matrix(self.alpha, self.ring.n)

    @cached_property
    def trace_table(self) -> Tuple[Tuple[int, ...], ...]:
        ring = self.ring
        powers = ring.power_basis()
        return tuple(tuple(ring.trace(xm * star).to_int() for xm in powers)
                     for star in self.alpha_star)

    def coordinates(self, x: GaloisRingElement) -> Tuple[int, ...]:
        """c with x = sum c_i alpha_i, c_i = Tr(x alpha*_i)."""
        q = self.ring.base_modulus
        return tuple(sum(c * t for c, t in zip(x.coeffs, row)) % q for row in self.trace_table)

    def combine(self, coords: Sequence[int]) -> GaloisRingElement:
        total = self.ring.zero
        for c, a in zip(coords, self.alpha):
            total = total + a * int(c)
        return total

    def to_json(self) -> dict:
        return {'alpha': [a.to_json() for a in self.alpha],
                'alpha_star': [a.to_json() for a in self.alpha_star]}


def dual_basis(alpha: Sequence[GaloisRingElement]) -> BasisWithDual:
    """
    Trace-dual of an integral basis, read from the inverse Moore matrix.

    Raises:
        SingularMooreMatrix: if the Moore matrix has a non-unit determinant
    """
    alpha = tuple(alpha)
    ring = _common_ring(alpha)
    if len(alpha) != ring.n:
        raise InvalidArgument(f"a basis of {ring} has {ring.n} elements, got {len(alpha)}")
    inv = invert_matrix(ring, moore_matrix(alpha, ring.n))
    if inv is None:
        raise SingularMooreMatrix(f"Moore matrix of {[a.to_text() for a in alpha]} is not invertible")
    alpha_star = tuple(inv[j][0] for j in range(ring.n))
    for i, a in enumerate(alpha):
        for j, b in enumerate(alpha_star):
            if ring.trace(a * b) != (ring.one if i == j else ring.zero):
                raise AlgebraError(f"dual basis check failed at ({i}, {j})")
    return BasisWithDual(alpha, alpha_star)


def integral_basis_test(alpha: Sequence[GaloisRingElement]) -> bool:
    ring = _common_ring(alpha)
    if len(alpha) != ring.n:
        return False
    return ring_determinant(moore_matrix(alpha, ring.n), ring).is_unit()


def integral_basis_conditions(alpha: Sequence[GaloisRingElement]) -> Dict[str, Optional[bool]]:
    """
    The equivalent characterisations of an integral basis, each computed on its own.

    Returns:
        Dict with residue_basis (images span the residue field),
        moore_unit_det, moore_invertible, dual_units (None when the Moore
        matrix is singular) and module_basis (alpha spans S over Z/p^k)
    """
    ring = _common_ring(alpha)
    if len(alpha) != ring.n:
        raise InvalidArgument(f"a basis of {ring} has {ring.n} elements, got {len(alpha)}")
    coordinates = residue_columns_over(ring, alpha)
    moore = moore_matrix(alpha, ring.n)
    inv = invert_matrix(ring, moore)
    dual_units = None
    if inv is not None:
        dual_units = all(inv[j][0].is_unit() for j in range(ring.n))
    return {
        'residue_basis': rank_over_field(coordinates, PrimeField(ring.p)) == ring.n,
        'moore_unit_det': ring_determinant(moore, ring).valuation() == 0,
        'moore_invertible': inv is not None,
        'dual_units': dual_units,
        'module_basis': invert_matrix(ring.base, coordinates) is not None,
    }


def residue_columns_over(ring: GaloisRing, alpha: Sequence[GaloisRingElement]) -> List[List[int]]:
    """Power-basis coordinate matrix of alpha over Z/p^k (column j = alpha_j)."""
    return [[a.coeffs[m] for a in alpha] for m in range(ring.n)]


def parse_element(ring: GaloisRing, text: str) -> GaloisRingElement:
    """
    Read an element from an expression over integers, ``pi``, ``xi``, ``^``, ``+``, ``-``, ``*``.

    ``pi`` is the uniformizer p and ``xi`` the power-basis generator.
    """
    xi = sympy.Symbol('xi')
    try:
        expr = parse_expr(text, local_dict={'pi': sympy.Integer(ring.p), 'xi': xi},
                          transformations=standard_transformations + (convert_xor,))
        poly = sympy.Poly(sympy.expand(expr), xi, domain=sympy.ZZ)
    except Exception as exc:
        raise InvalidArgument(f"cannot read {text!r} as an element of {ring}: {exc}") from exc
    total = ring.zero
    for (m,), c in poly.terms():
        total = total + ring.xi ** m * int(c)
    return total
