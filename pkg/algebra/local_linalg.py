"""
Local Linear Algebra
====================
Normal forms over local principal ideal rings: Smith decompositions over
Z/p^k and over the valuation ring of a ValuedMatrix's field, the lower
triangular Hermite form used to canonicalize lattices, and reduced row
echelon kernels over the residue fields F_p and Q.

The Smith engine works on any object exposing the small local-ring surface
used below (zero, one, is_zero, valuation, add, sub, mul, quotient,
pi_power); ResidueRing in chain_rings and ValuationRing here both do.

Location: algebra/local_linalg.py
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exceptions import InvalidArgument, SingularMatrix
from .valued_scalars import INFINITY, ValuedMatrix, Valuation, saturate_matrix

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# residue fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeField:
    """F_p with elements stored as ints in [0, p)."""

    p: int

    zero = 0
    one = 1

    def normalize(self, a) -> int:
        if isinstance(a, Fraction):
            return a.numerator * pow(a.denominator, -1, self.p) % self.p
        return a % self.p

    def inverse(self, a) -> int:
        return pow(a, -1, self.p)

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class RationalField:
    """Q with elements stored as Fractions."""

    zero = Fraction(0)
    one = Fraction(1)

    def normalize(self, a) -> Fraction:
        return Fraction(a)

    def inverse(self, a) -> Fraction:
        return 1 / Fraction(a)

    def __str__(self):
        return "Q"


def residue_field_of(field):
    """Residue field of a valued field backend."""
    if field.backend == 'padic':
        return PrimeField(field.p)
    return RationalField()


def row_echelon(M: Sequence[Sequence], field) -> Tuple[List[list], List[int]]:
    """Reduced row echelon form of M over a residue field; returns (rows, pivot columns)."""
    rows = [[field.normalize(x) for x in row] for row in M]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inverse(rows[r][c])
        rows[r] = [field.normalize(x * inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [field.normalize(a - f * b) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank_over_field(M: Sequence[Sequence], field) -> int:
    return len(row_echelon(M, field)[1])


def kernel_basis(M: Sequence[Sequence], field, ncols: Optional[int] = None) -> List[list]:
    """
    Echelonized basis of the right kernel {x : Mx = 0} over a residue field.

    Args:
        M: matrix as a list of rows (may be empty when ncols is given)
        field: PrimeField or RationalField
        ncols: column count, required only for a matrix with no rows

    Returns:
        List of kernel vectors, one per free column, each with a 1 in its
        free position.
    """
    if ncols is None:
        ncols = len(M[0])
    rows, pivots = row_echelon(M, field) if M else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, c in zip(rows, pivots):
            v[c] = field.normalize(-row[f])
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

class ValuationRing:
    """The valuation ring of a valued field, as seen by the Smith engine."""

    depth = None

    def __init__(self, field):
        self.field = field
        self.zero = field.zero
        self.one = field.one

    def coerce(self, a):
        return self.field(a)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def valuation(self, a) -> Valuation:
        return a.valuation()

    def is_unit(self, a) -> bool:
        return a.valuation() == 0

    def inverse(self, a):
        return self.one / a

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def quotient(self, a, b):
        return a / b

    def pi_power(self, v: int):
        return self.field.pi_power(v)


@dataclass(frozen=True)
class SmithDecomposition:
    """
    left · M · right = diag(pi^v_1, ..., pi^v_r) with v_1 <= ... <= v_r.

    Zero divisors are reported with valuation INFINITY.
    """

    divisor_valuations: Tuple[Valuation, ...]
    left: Optional[Tuple[tuple, ...]] = None
    right: Optional[Tuple[tuple, ...]] = None

    @property
    def finite_valuations(self) -> Tuple[int, ...]:
        return tuple(v for v in self.divisor_valuations if v is not INFINITY)

    def to_json(self) -> dict:
        return {'divisor_valuations': ['inf' if v is INFINITY else v
                                       for v in self.divisor_valuations]}


@dataclass(frozen=True)
class RankProfile:
    inner_rank: int
    free_rank_kernel: int
    divisor_valuations: Tuple[Valuation, ...]


def _identity(ring, size: int) -> List[list]:
    return [[ring.one if i == j else ring.zero for j in range(size)] for i in range(size)]


def _as_rows(M, ring):
    if isinstance(M, ValuedMatrix):
        return M.field, [list(row) for row in M.rows], ring or ValuationRing(M.field)
    if ring is None:
        raise InvalidArgument("a ring is required for a plain matrix")
    return None, [[ring.coerce(x) for x in row] for row in M], ring


def smith_form(M, ring=None, transforms: bool = True) -> SmithDecomposition:
    """
    Smith decomposition over a local principal ideal ring.

    Pivots on the entry of minimal valuation, ties broken row-major, scales
    it to pi^v and clears its row and column.

    Args:
        M: ValuedMatrix, or a list of rows over ``ring``
        ring: local ring surface (ResidueRing, ValuationRing); implied for a ValuedMatrix
        transforms: also accumulate the left and right transforms

    Returns:
        SmithDecomposition with min(rows, cols) divisor valuations
    """
    field, A, ring = _as_rows(M, ring)
    d = len(A)
    e = len(A[0]) if d else 0
    L = _identity(ring, d) if transforms else None
    R = _identity(ring, e) if transforms else None
    vals: List[Valuation] = []

    for t in range(min(d, e)):
        best = None
        for i in range(t, d):
            for j in range(t, e):
                if ring.is_zero(A[i][j]):
                    continue
                v = ring.valuation(A[i][j])
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            vals.extend([INFINITY] * (min(d, e) - t))
            break
        v, pi, pj = best
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        if transforms:
            L[t], L[pi] = L[pi], L[t]
            for row in R:
                row[t], row[pj] = row[pj], row[t]

        unit = ring.quotient(ring.pi_power(v), A[t][t])
        A[t] = [ring.mul(unit, x) for x in A[t]]
        if transforms:
            L[t] = [ring.mul(unit, x) for x in L[t]]
        pivot = A[t][t]

        for i in range(t + 1, d):
            if ring.is_zero(A[i][t]):
                continue
            f = ring.quotient(A[i][t], pivot)
            A[i] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(A[i], A[t])]
            if transforms:
                L[i] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(L[i], L[t])]
        for j in range(t + 1, e):
            if ring.is_zero(A[t][j]):
                continue
            f = ring.quotient(A[t][j], pivot)
            for row in A:
                row[j] = ring.sub(row[j], ring.mul(f, row[t]))
            if transforms:
                for row in R:
                    row[j] = ring.sub(row[j], ring.mul(f, row[t]))
        vals.append(v)

    if not transforms:
        return SmithDecomposition(tuple(vals))
    if field is not None:
        left = ValuedMatrix(field, tuple(tuple(r) for r in L))
        right = ValuedMatrix(field, tuple(tuple(r) for r in R))
        return SmithDecomposition(tuple(vals), left, right)
    return SmithDecomposition(tuple(vals), tuple(tuple(r) for r in L), tuple(tuple(r) for r in R))


def elementary_divisor_valuations(M, ring=None) -> Tuple[Valuation, ...]:
    return smith_form(M, ring, transforms=False).divisor_valuations


def inner_rank(M, ring=None) -> int:
    """Minimal number of generators of the image: #{divisors that are nonzero}."""
    return sum(1 for v in elementary_divisor_valuations(M, ring) if v is not INFINITY)


def free_rank_kernel(M, ring=None) -> int:
    ncols = M.ncols if isinstance(M, ValuedMatrix) else len(M[0])
    return ncols - inner_rank(M, ring)


def rank_profile(M, ring=None) -> RankProfile:
    vals = elementary_divisor_valuations(M, ring)
    ncols = M.ncols if isinstance(M, ValuedMatrix) else len(M[0])
    inner = sum(1 for v in vals if v is not INFINITY)
    return RankProfile(inner, ncols - inner, vals)


def invert_matrix(ring, M: Sequence[Sequence]) -> Optional[List[list]]:
    """Gauss-Jordan inverse over a local ring with unit pivots; None when M is not invertible."""
    n = len(M)
    work = [[ring.coerce(x) for x in row] + [ring.one if i == j else ring.zero for j in range(n)]
            for i, row in enumerate(M)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if ring.is_unit(work[r][c])), None)
        if pivot is None:
            return None
        work[c], work[pivot] = work[pivot], work[c]
        inv = ring.inverse(work[c][c])
        work[c] = [ring.mul(inv, x) for x in work[c]]
        for r in range(n):
            if r != c and not ring.is_zero(work[r][c]):
                f = work[r][c]
                work[r] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(work[r], work[c])]
    return [row[n:] for row in work]


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def hermite_form(M: ValuedMatrix) -> ValuedMatrix:
    """
    Lower-triangular Hermite form of the lattice spanned by the columns of M.

    M is d×m of full row rank. Column operations over the valuation ring
    bring it to a d×d matrix with diagonal entries pi^a_i and every entry
    (i, j), j < i, reduced modulo pi^a_i to its canonical representative
    (an integer in [0, p^a_i) or a polynomial in t of degree < a_i).

    Raises:
        SingularMatrix: if the columns do not span a full-rank lattice
    """
    field = M.field
    d, m = M.shape
    if m < d:
        raise SingularMatrix(f"{d}x{m} generators cannot span a rank-{d} lattice")
    s, scaled = saturate_matrix(M) if not M.is_zero() else (0, M)
    A = [list(row) for row in scaled.rows]

    def column_axpy(target, source, factor):
        for row in A:
            row[target] = row[target] - factor * row[source]

    exponents = []
    for i in range(d):
        best = None
        for j in range(i, m):
            if A[i][j].is_zero():
                continue
            v = A[i][j].valuation()
            if best is None or v < best[0]:
                best = (v, j)
        if best is None:
            raise SingularMatrix("matrix is not of full row rank")
        a, j = best
        if j != i:
            for row in A:
                row[i], row[j] = row[j], row[i]
        unit = field.pi_power(a) / A[i][i]
        for row in A:
            row[i] = row[i] * unit
        for j in range(i + 1, m):
            if not A[i][j].is_zero():
                column_axpy(j, i, A[i][j] / A[i][i])
        exponents.append(a)

    for i in range(d):
        pivot = A[i][i]
        for j in range(i):
            rep = field.residue_mod(A[i][j], exponents[i])
            if rep != A[i][j]:
                column_axpy(j, i, (A[i][j] - rep) / pivot)

    scale = field.pi_power(s)
    return ValuedMatrix(field, tuple(tuple(x * scale for x in row[:d]) for row in A))
