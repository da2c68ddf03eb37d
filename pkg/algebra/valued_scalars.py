"""
Valued Scalars
==============
Exact arithmetic in the two discretely valued fields used by the building and
Mustafin computations: Q with the p-adic valuation and Q(t) with the t-adic
valuation. Matrices over either field are carried by ValuedMatrix.

Location: algebra/valued_scalars.py
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import sympy
from sympy import Poly, QQ, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from .exceptions import (
    BackendMismatch,
    InvalidArgument,
    NegativeValuation,
    NotPrime,
    SingularMatrix,
    ZeroMatrix,
)

logger = logging.getLogger(__name__)

T = Symbol('t')

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class _Infinity:
    """Valuation of zero: compares above every integer, absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'INFINITY'

    def __str__(self):
        return 'inf'

    def __hash__(self):
        return hash('valuation-infinity')

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITY = _Infinity()

Valuation = Union[int, _Infinity]


def valuation_to_json(v: Valuation):
    return 'inf' if v is INFINITY else v


def _multiplicity(p: int, n: int) -> int:
    return sympy.multiplicity(p, abs(n)) if n else 0


def _rational_to_fraction(value) -> Fraction:
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


# ---------------------------------------------------------------------------
# p-adic backend
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PAdicRational:
    """Element of Q viewed inside Q_p."""

    value: Fraction
    prime: int

    @property
    def field(self) -> 'PAdicField':
        return PAdicField(self.prime)

    def _coerce(self, other) -> 'PAdicRational':
        if isinstance(other, PAdicRational):
            if other.prime != self.prime:
                raise BackendMismatch(
                    f"cannot combine {self.prime}-adic and {other.prime}-adic scalars"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return PAdicRational(Fraction(other), self.prime)
        raise BackendMismatch(f"cannot combine a p-adic scalar with {type(other).__name__}")

    def __add__(self, other):
        return PAdicRational(self.value + self._coerce(other).value, self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        return PAdicRational(self.value - self._coerce(other).value, self.prime)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return PAdicRational(self.value * self._coerce(other).value, self.prime)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by a zero p-adic scalar")
        return PAdicRational(self.value / other.value, self.prime)

    def __neg__(self):
        return PAdicRational(-self.value, self.prime)

    def is_zero(self) -> bool:
        return self.value == 0

    def valuation(self) -> Valuation:
        if self.value == 0:
            return INFINITY
        return (_multiplicity(self.prime, self.value.numerator)
                - _multiplicity(self.prime, self.value.denominator))

    def residue(self) -> int:
        v = self.valuation()
        if v < 0:
            raise NegativeValuation(f"{self.to_text()} has valuation {v} < 0", value=self.to_text())
        if v is INFINITY or v > 0:
            return 0
        p = self.prime
        return self.value.numerator * pow(self.value.denominator, -1, p) % p

    def to_text(self) -> str:
        return str(self.value)

    def sort_key(self):
        return (self.value,)

    def to_json(self) -> dict:
        return {'backend': 'padic', 'p': self.prime, 'value': self.to_text()}

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class PAdicField:
    """Q with the p-adic valuation; uniformizer p, residue field F_p."""

    p: int

    backend = 'padic'
    finite_residue_field = True

    def __post_init__(self):
        if not isinstance(self.p, int) or not sympy.isprime(self.p):
            raise NotPrime(f"{self.p} is not a prime", p=self.p)

    def __call__(self, value) -> PAdicRational:
        if isinstance(value, PAdicRational):
            if value.prime != self.p:
                raise BackendMismatch(f"expected a {self.p}-adic scalar, got {value.prime}-adic")
            return value
        if isinstance(value, (int, Fraction)):
            return PAdicRational(Fraction(value), self.p)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, sympy.Basic) and value.is_Rational:
            return PAdicRational(_rational_to_fraction(value), self.p)
        raise InvalidArgument(f"cannot read {value!r} as a {self.p}-adic scalar")

    @property
    def zero(self) -> PAdicRational:
        return PAdicRational(Fraction(0), self.p)

    @property
    def one(self) -> PAdicRational:
        return PAdicRational(Fraction(1), self.p)

    @property
    def uniformizer(self) -> PAdicRational:
        return PAdicRational(Fraction(self.p), self.p)

    def pi_power(self, m: int) -> PAdicRational:
        return PAdicRational(Fraction(self.p) ** m, self.p)

    def parse(self, text: str) -> PAdicRational:
        try:
            expr = parse_expr(text, local_dict={'pi': sympy.Integer(self.p)},
                              transformations=_TRANSFORMATIONS)
        except Exception as exc:
            raise InvalidArgument(f"cannot parse {text!r}: {exc}") from exc
        if not (isinstance(expr, sympy.Basic) and expr.is_Rational):
            raise InvalidArgument(f"{text!r} is not a rational number")
        return PAdicRational(_rational_to_fraction(expr), self.p)

    def residue_mod(self, x: PAdicRational, a: int) -> PAdicRational:
        """Representative of x modulo p^a as an integer in [0, p^a)."""
        if x.valuation() < 0:
            raise NegativeValuation(f"{x.to_text()} is not integral")
        if a <= 0:
            return self.zero
        modulus = self.p ** a
        rep = x.value.numerator * pow(x.value.denominator, -1, modulus) % modulus
        return PAdicRational(Fraction(rep), self.p)

    def to_json(self) -> dict:
        return {'backend': 'padic', 'p': self.p}

    def __str__(self):
        return f"Q_{self.p}"


# ---------------------------------------------------------------------------
# t-adic backend
# ---------------------------------------------------------------------------

def _qq_poly(value) -> Poly:
    if isinstance(value, Poly):
        return Poly(value.as_expr(), T, domain=QQ)
    if isinstance(value, Fraction):
        value = sympy.Rational(value.numerator, value.denominator)
    return Poly(value, T, domain=QQ)


def _order(poly: Poly) -> Valuation:
    if poly.is_zero:
        return INFINITY
    return min(monom[0] for monom in poly.monoms())


def poly_to_text(poly: Poly) -> str:
    """Sparse ascending form, e.g. ``2+t`` or ``-1+1/2*t^3``."""
    if poly.is_zero:
        return '0'
    terms = []
    for (e,), c in reversed(poly.terms()):
        if e == 0:
            terms.append(str(c))
            continue
        mono = 't' if e == 1 else f't^{e}'
        if c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append('-' + mono)
        else:
            terms.append(f'{c}*{mono}')
    return '+'.join(terms).replace('+-', '-')


class TAdicFunction:
    """
    Rational function num/den in Q(t) with the t-adic valuation.

    Stored in lowest terms with a monic denominator, so equal functions have
    identical representations.
    """

    __slots__ = ('num', 'den')

    def __init__(self, num, den=1):
        num, den = _qq_poly(num), _qq_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            den = _qq_poly(1)
        else:
            g = num.gcd(den)
            num, den = num.exquo(g), den.exquo(g)
            lc = den.LC()
            num, den = num.quo_ground(lc), den.monic()
        object.__setattr__(self, 'num', num)
        object.__setattr__(self, 'den', den)

    def __setattr__(self, name, value):
        raise AttributeError("TAdicFunction is immutable")

    def __eq__(self, other):
        if not isinstance(other, TAdicFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"TAdicFunction({self.to_text()!r})"

    @property
    def field(self) -> 'TAdicField':
        return TAdicField()

    @staticmethod
    def _coerce(other) -> 'TAdicFunction':
        if isinstance(other, TAdicFunction):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return TAdicFunction(other)
        raise BackendMismatch(f"cannot combine a t-adic scalar with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        return TAdicFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return TAdicFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return TAdicFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by a zero t-adic scalar")
        return TAdicFunction(self.num * other.den, self.den * other.num)

    def __neg__(self):
        return TAdicFunction(-self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero

    def valuation(self) -> Valuation:
        if self.num.is_zero:
            return INFINITY
        return _order(self.num) - _order(self.den)

    def residue(self) -> Fraction:
        v = self.valuation()
        if v < 0:
            raise NegativeValuation(f"{self.to_text()} has valuation {v} < 0", value=self.to_text())
        if v is INFINITY or v > 0:
            return Fraction(0)
        return _rational_to_fraction(self.num.eval(0) / self.den.eval(0))

    def to_text(self) -> str:
        if self.den == _qq_poly(1):
            return poly_to_text(self.num)
        return f"({poly_to_text(self.num)})/({poly_to_text(self.den)})"

    def sort_key(self):
        def coeffs(poly):
            return tuple(_rational_to_fraction(c) for c in reversed(poly.all_coeffs()))
        return (len(self.num.all_coeffs()), coeffs(self.num), coeffs(self.den))

    def to_json(self) -> dict:
        return {'backend': 'tadic', 'num': poly_to_text(self.num), 'den': poly_to_text(self.den)}

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class TAdicField:
    """Q(t) with the t-adic valuation; uniformizer t, residue field Q."""

    backend = 'tadic'
    finite_residue_field = False

    def __call__(self, value) -> TAdicFunction:
        if isinstance(value, TAdicFunction):
            return value
        if isinstance(value, (int, Fraction, Poly)):
            return TAdicFunction(value)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, sympy.Basic):
            return self._from_expr(value)
        raise InvalidArgument(f"cannot read {value!r} as a t-adic scalar")

    @property
    def zero(self) -> TAdicFunction:
        return TAdicFunction(0)

    @property
    def one(self) -> TAdicFunction:
        return TAdicFunction(1)

    @property
    def uniformizer(self) -> TAdicFunction:
        return TAdicFunction(_qq_poly(T))

    def pi_power(self, m: int) -> TAdicFunction:
        if m >= 0:
            return TAdicFunction(_qq_poly(T ** m))
        return TAdicFunction(1, _qq_poly(T ** (-m)))

    def _from_expr(self, expr) -> TAdicFunction:
        num, den = sympy.fraction(sympy.together(expr))
        try:
            return TAdicFunction(Poly(num, T, domain=QQ), Poly(den, T, domain=QQ))
        except (sympy.PolynomialError, sympy.CoercionFailed) as exc:
            raise InvalidArgument(f"{expr} is not a rational function of t") from exc

    def parse(self, text: str) -> TAdicFunction:
        try:
            expr = parse_expr(text, local_dict={'pi': T, 't': T},
                              transformations=_TRANSFORMATIONS)
        except Exception as exc:
            raise InvalidArgument(f"cannot parse {text!r}: {exc}") from exc
        return self._from_expr(expr)

    def residue_mod(self, x: TAdicFunction, a: int) -> TAdicFunction:
        """Representative of x modulo t^a as a polynomial of degree < a."""
        if x.valuation() < 0:
            raise NegativeValuation(f"{x.to_text()} is not integral")
        if a <= 0 or x.is_zero():
            return self.zero
        modulus = _qq_poly(T ** a)
        rep = (x.num * x.den.invert(modulus)).rem(modulus)
        return TAdicFunction(rep)

    def to_json(self) -> dict:
        return {'backend': 'tadic'}

    def __str__(self):
        return "Q((t))"


Scalar = Union[PAdicRational, TAdicFunction]
Field = Union[PAdicField, TAdicField]


def field_from_json(obj: dict) -> Field:
    backend = obj.get('backend')
    if backend == 'padic':
        return PAdicField(int(obj['p']))
    if backend == 'tadic':
        return TAdicField()
    raise InvalidArgument(f"unknown backend {backend!r}")


def scalar_from_json(obj: dict) -> Scalar:
    field = field_from_json(obj)
    if field.backend == 'padic':
        return field.parse(obj['value'])
    return field.parse(obj['num']) / field.parse(obj.get('den', '1'))


def same_field(*fields: Field) -> Field:
    first = fields[0]
    for other in fields[1:]:
        if other != first:
            raise BackendMismatch(f"{first} and {other} are different fields")
    return first


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def valuation(x: Scalar) -> Valuation:
    return x.valuation()


def reduce_residue(x: Scalar):
    """Image of an integral scalar in the residue field (int mod p, or a Fraction)."""
    return x.residue()


def unit_part(x: Scalar) -> Scalar:
    """x divided by pi^val(x)."""
    return x / x.field.pi_power(x.valuation())


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValuedMatrix:
    """Dense matrix over a valued field; immutable, rows of scalars."""

    field: Field
    rows: Tuple[Tuple[Scalar, ...], ...]

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable]) -> 'ValuedMatrix':
        built = tuple(tuple(field(x) for x in row) for row in rows)
        if not built or not built[0]:
            raise InvalidArgument("a matrix needs at least one row and one column")
        width = len(built[0])
        if any(len(row) != width for row in built):
            raise InvalidArgument("matrix rows have different lengths")
        return cls(field, built)

    @classmethod
    def identity(cls, field: Field, d: int) -> 'ValuedMatrix':
        return cls.diagonal(field, [field.one] * d)

    @classmethod
    def diagonal(cls, field: Field, entries: Sequence) -> 'ValuedMatrix':
        d = len(entries)
        return cls.from_rows(field, [[entries[i] if i == j else field.zero for j in range(d)]
                                     for i in range(d)])

    @classmethod
    def from_json(cls, obj: dict) -> 'ValuedMatrix':
        field = field_from_json(obj)
        return cls.from_rows(field, obj['matrix'])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> List[Scalar]:
        return [row[j] for row in self.rows]

    def entries(self) -> Iterator[Scalar]:
        for row in self.rows:
            yield from row

    def _check(self, other: 'ValuedMatrix'):
        same_field(self.field, other.field)

    def __matmul__(self, other: 'ValuedMatrix') -> 'ValuedMatrix':
        self._check(other)
        if self.ncols != other.nrows:
            raise InvalidArgument(f"shape mismatch {self.shape} @ {other.shape}")
        zero = self.field.zero
        cols = [other.column(j) for j in range(other.ncols)]
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out_row.append(acc)
            out.append(tuple(out_row))
        return ValuedMatrix(self.field, tuple(out))

    def __add__(self, other: 'ValuedMatrix') -> 'ValuedMatrix':
        self._check(other)
        return ValuedMatrix(self.field, tuple(tuple(a + b for a, b in zip(r, s))
                                              for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: 'ValuedMatrix') -> 'ValuedMatrix':
        self._check(other)
        return ValuedMatrix(self.field, tuple(tuple(a - b for a, b in zip(r, s))
                                              for r, s in zip(self.rows, other.rows)))

    def scale(self, c) -> 'ValuedMatrix':
        c = self.field(c)
        return ValuedMatrix(self.field, tuple(tuple(c * a for a in row) for row in self.rows))

    def transpose(self) -> 'ValuedMatrix':
        return ValuedMatrix(self.field, tuple(zip(*self.rows)))

    def hstack(self, other: 'ValuedMatrix') -> 'ValuedMatrix':
        self._check(other)
        return ValuedMatrix(self.field, tuple(r + s for r, s in zip(self.rows, other.rows)))

    def vstack(self, other: 'ValuedMatrix') -> 'ValuedMatrix':
        self._check(other)
        return ValuedMatrix(self.field, self.rows + other.rows)

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries())

    def min_valuation(self) -> Valuation:
        return min((x.valuation() for x in self.entries()), default=INFINITY)

    def is_integral(self) -> bool:
        return self.min_valuation() >= 0

    def residue_rows(self) -> List[list]:
        return [[x.residue() for x in row] for row in self.rows]

    def _echelon(self):
        """Gauss-Jordan on [self | I]; returns (det, inverse rows or None)."""
        n = self.nrows
        if n != self.ncols:
            raise InvalidArgument(f"square matrix required, got {self.shape}")
        zero, one = self.field.zero, self.field.one
        work = [list(row) + [one if i == j else zero for j in range(n)]
                for i, row in enumerate(self.rows)]
        det = one
        for col in range(n):
            pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
            if pivot is None:
                return zero, None
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            p = work[col][col]
            det = det * p
            work[col] = [x / p for x in work[col]]
            for r in range(n):
                if r != col and not work[r][col].is_zero():
                    f = work[r][col]
                    work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return det, [row[n:] for row in work]

    def det(self) -> Scalar:
        return self._echelon()[0]

    def inverse(self) -> 'ValuedMatrix':
        det, inv = self._echelon()
        if inv is None:
            raise SingularMatrix("matrix is not invertible over the fraction field")
        return ValuedMatrix(self.field, tuple(tuple(row) for row in inv))

    def sort_key(self):
        return tuple(x.sort_key() for x in self.entries())

    def to_text_rows(self) -> List[List[str]]:
        return [[x.to_text() for x in row] for row in self.rows]

    def to_json(self) -> dict:
        return {**self.field.to_json(), 'matrix': self.to_text_rows()}

    def __str__(self):
        return '; '.join(' '.join(row) for row in self.to_text_rows())


def saturate_matrix(M: ValuedMatrix) -> Tuple[int, ValuedMatrix]:
    """Scale M by pi^(-s), s the minimal entry valuation, so the result has minimum 0."""
    if M.is_zero():
        raise ZeroMatrix("cannot saturate the zero matrix")
    s = M.min_valuation()
    return s, M.scale(M.field.pi_power(-s))
