"""
Bruhat-Tits Buildings
=====================
Vertices of the building of PGL_d over a valued field: homothety classes
of lattices, stored through a canonical lower-triangular Hermite
representative. Covers containment, adjacency, distance, intersections,
convex hulls and, for finite residue fields, neighbourhoods and balls.

Location: algebra/buildings.py
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from .conf import get_setting
from .exceptions import AlgebraError, BackendMismatch, InvalidArgument, SingularMatrix
from .local_linalg import elementary_divisor_valuations, hermite_form
from .valued_scalars import ValuedMatrix, same_field, saturate_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatticeClass:
    """
    A vertex [Λ] of the building, held by its canonical generator matrix.

    The columns of ``canonical`` span a representative with minimal entry
    valuation 0; two classes are equal iff their canonical matrices are.
    """

    canonical: ValuedMatrix

    @property
    def field(self):
        return self.canonical.field

    @property
    def d(self) -> int:
        return self.canonical.nrows

    def sort_key(self):
        return self.canonical.sort_key()

    def to_json(self) -> dict:
        return {**self.field.to_json(), 'd': self.d, 'matrix': self.canonical.to_text_rows()}

    @classmethod
    def from_json(cls, obj: dict) -> 'LatticeClass':
        return lattice_class(ValuedMatrix.from_json(obj))

    def __str__(self):
        return f"[{self.canonical}]"


LatticeLike = Union[LatticeClass, ValuedMatrix]


def _rep(L: LatticeLike) -> ValuedMatrix:
    return L.canonical if isinstance(L, LatticeClass) else L


def _check_pair(M1: ValuedMatrix, M2: ValuedMatrix):
    same_field(M1.field, M2.field)
    if M1.nrows != M2.nrows:
        raise BackendMismatch(f"lattices of rank {M1.nrows} and {M2.nrows} live in different buildings")


def lattice_class(M: ValuedMatrix) -> LatticeClass:
    """
    Canonical class of the lattice spanned by the columns of M.

    M is d×d invertible, or any d×m generator matrix of full row rank.
    """
    if M.is_zero():
        raise SingularMatrix("the zero matrix spans no lattice")
    _, saturated = saturate_matrix(M)
    return LatticeClass(hermite_form(saturated))


def standard_class(field, d: int) -> LatticeClass:
    return LatticeClass(ValuedMatrix.identity(field, d))


def contains(L1: LatticeLike, L2: LatticeLike) -> bool:
    """Whether the lattice spanned by L2's representative lies inside L1's."""
    M1, M2 = _rep(L1), _rep(L2)
    _check_pair(M1, M2)
    return (M1.inverse() @ M2).is_integral()


def _relative_valuations(M1: ValuedMatrix, M2: ValuedMatrix) -> Tuple[int, ...]:
    _check_pair(M1, M2)
    return elementary_divisor_valuations(M1.inverse() @ M2)


def distance(L1: LatticeLike, L2: LatticeLike) -> int:
    """Graph distance: spread of the elementary divisor valuations of M1^(-1) M2."""
    vals = _relative_valuations(_rep(L1), _rep(L2))
    return max(vals) - min(vals)


def adjacent(L1: LatticeLike, L2: LatticeLike) -> bool:
    """Distinct classes with representatives πΛ_1 ⊆ Λ_2 ⊆ Λ_1."""
    M1, M2 = _rep(L1), _rep(L2)
    _check_pair(M1, M2)
    if lattice_class(M1) == lattice_class(M2):
        return False
    # largest m with Λ_2 ⊆ π^m Λ_1
    m = (M1.inverse() @ M2).min_valuation()
    shifted = M1.scale(M1.field.pi_power(m + 1))
    return contains(M2, shifted)


def intersect(L1: LatticeLike, L2: LatticeLike) -> ValuedMatrix:
    """
    Generator matrix of Λ_1 ∩ Λ_2 in Hermite form.

    The dual of M·O^d is M^(-T)·O^d; the intersection is the dual of the sum
    of the duals.
    """
    M1, M2 = _rep(L1), _rep(L2)
    _check_pair(M1, M2)
    dual_sum = hermite_form(M1.inverse().transpose().hstack(M2.inverse().transpose()))
    meet = hermite_form(dual_sum.inverse().transpose())
    if not (contains(M1, meet) and contains(M2, meet)):
        raise AlgebraError("intersection is not contained in both lattices")
    return meet


@dataclass(frozen=True)
class ConvexHull:
    vertices: Tuple[LatticeClass, ...]
    generators: Tuple[LatticeClass, ...]
    closure_added: int = 0

    def __contains__(self, L: LatticeClass) -> bool:
        return L in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        return {
            'vertices': [v.to_json() for v in self.vertices],
            'generators': [g.to_json() for g in self.generators],
        }


def _pair_classes(A: LatticeClass, B: LatticeClass) -> Iterator[LatticeClass]:
    """[π^m Λ_a ∩ Λ_b] for every shift m that can give a new class."""
    Ma, Mb = A.canonical, B.canonical
    vals = _relative_valuations(Ma, Mb)
    for m in range(min(vals), max(vals) + 1):
        yield lattice_class(intersect(Ma.scale(Ma.field.pi_power(m)), Mb))


def convex_hull(gamma: Sequence[LatticeLike]) -> ConvexHull:
    """
    Smallest set of classes containing gamma and closed under [π^m Λ_a ∩ Λ_b].

    Seeded by [∩ π^(m_i) Λ_i] over the box m_1 = 0, |m_i| <= D_i (D_i the
    valuation spread of M_1^(-1) M_i), then closed pairwise until stable.
    """
    if not gamma:
        raise InvalidArgument("the convex hull of an empty set is undefined")
    classes = [g if isinstance(g, LatticeClass) else lattice_class(g) for g in gamma]
    first = classes[0].canonical
    for c in classes[1:]:
        _check_pair(first, c.canonical)
    limit = get_setting('ALGEBRA_HULL_MAX_VERTICES')
    pi_power = first.field.pi_power

    spreads = [distance(classes[0], c) for c in classes[1:]]
    vertices: List[LatticeClass] = []
    seen = set()

    def add(L: LatticeClass):
        if L not in seen:
            seen.add(L)
            vertices.append(L)
            if len(vertices) > limit:
                raise AlgebraError(f"convex hull exceeds {limit} vertices", limit=limit)

    for c in classes:
        add(c)
    for shifts in itertools.product(*(range(-D, D + 1) for D in spreads)):
        meet = first
        for c, m in zip(classes[1:], shifts):
            meet = intersect(meet, c.canonical.scale(pi_power(m)))
        add(lattice_class(meet))
    seeded = len(vertices)

    b = 0
    while b < len(vertices):
        for a in range(b):
            for L in _pair_classes(vertices[a], vertices[b]):
                add(L)
        b += 1

    added = len(vertices) - seeded
    if added:
        logger.warning("hull closure added %d vertices beyond the enumeration box", added)
    logger.debug("convex hull of %d classes has %d vertices", len(classes), len(vertices))
    unique_generators = tuple(dict.fromkeys(classes))
    return ConvexHull(tuple(sorted(vertices, key=LatticeClass.sort_key)), unique_generators, added)


def hull_member(L: LatticeLike, H: ConvexHull) -> bool:
    L = L if isinstance(L, LatticeClass) else lattice_class(L)
    if H.vertices:
        _check_pair(H.vertices[0].canonical, L.canonical)
    return L in H


# ---------------------------------------------------------------------------
# neighbourhoods (finite residue fields)
# ---------------------------------------------------------------------------

def _subspace_bases(p: int, d: int) -> Iterator[List[List[int]]]:
    """Reduced row echelon bases of every proper nonzero subspace of F_p^d."""
    for r in range(1, d):
        for pivots in itertools.combinations(range(d), r):
            free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, d) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = [[1 if c == pc else 0 for c in range(d)] for pc in pivots]
                for (i, c), v in zip(free, values):
                    rows[i][c] = v
                yield rows


def neighbors(L: LatticeLike) -> List[LatticeClass]:
    """All classes adjacent to L; one per proper nonzero subspace of Λ/πΛ."""
    M = _rep(L)
    field = M.field
    if not field.finite_residue_field:
        raise InvalidArgument(f"neighbours are enumerable only over a finite residue field, not {field}")
    d = M.nrows
    pi_M = M.scale(field.uniformizer)
    found = []
    for rows in _subspace_bases(field.p, d):
        lifts = ValuedMatrix.from_rows(field, [list(col) for col in zip(*rows)])
        found.append(lattice_class((M @ lifts).hstack(pi_M)))
    return sorted(set(found), key=LatticeClass.sort_key)


def ball(gamma: Iterable[LatticeLike], radius: int) -> List[LatticeClass]:
    """Every class within ``radius`` steps of some member of gamma."""
    frontier = {g if isinstance(g, LatticeClass) else lattice_class(g) for g in gamma}
    reached = set(frontier)
    for _ in range(radius):
        frontier = {n for L in frontier for n in neighbors(L)} - reached
        reached |= frontier
    return sorted(reached, key=LatticeClass.sort_key)
