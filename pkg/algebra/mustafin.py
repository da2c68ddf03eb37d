"""
Mustafin Special Fibers
=======================
Combinatorial description of the special fiber of a Mustafin variety.

For a finite set Γ of lattice classes and a vertex [Λ] of the building,
the saturated reductions Ā_i of the transition maps define a rational map
P^(d-1) --> (P^(d-1))^n. The dimension of its image is read off from the
kernel intersection dimensions d_I through the multidegree sets M(h); a
vertex of conv(Γ) carries an irreducible component of the special fiber
exactly when that dimension is d-1.

The same machinery gives the dimension of the multi-projective closure of
a matrix code and checks the hull criterion for O-bases of such codes.

Location: algebra/mustafin.py
"""

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .buildings import (
    ConvexHull,
    LatticeClass,
    LatticeLike,
    ball,
    convex_hull,
    hull_member,
    lattice_class,
    standard_class,
)
from .exceptions import (
    CriterionViolation,
    InvalidArgument,
    MonotonicityViolation,
    RectangularityViolation,
    SingularB,
    TooManyFactors,
)
from .local_linalg import elementary_divisor_valuations, kernel_basis, rank_over_field, residue_field_of
from .valued_scalars import ValuedMatrix, same_field, saturate_matrix

logger = logging.getLogger(__name__)

MAX_FACTORS = 20

DTable = Dict[FrozenSet[int], int]


@dataclass(frozen=True)
class ReducedMapFamily:
    """Saturated reductions Ā_1, ..., Ā_n at one vertex, as rows over the residue field."""

    vertex: LatticeClass
    maps: Tuple[Tuple[tuple, ...], ...]
    residue_field: object

    @property
    def d(self) -> int:
        return self.vertex.d

    def ranks(self) -> Tuple[int, ...]:
        return tuple(rank_over_field(A, self.residue_field) for A in self.maps)

    def to_json(self) -> dict:
        return {
            'vertex': self.vertex.to_json(),
            'residue_field': str(self.residue_field),
            'maps': [[[str(x) for x in row] for row in A] for A in self.maps],
        }


def _as_matrix(L: LatticeLike) -> ValuedMatrix:
    return L.canonical if isinstance(L, LatticeClass) else L


def reduced_maps(gamma: Sequence[LatticeLike], vertex: LatticeLike) -> ReducedMapFamily:
    """
    Reduce the maps Λ -> Λ_i at a vertex.

    With Λ_i = M_i O^d and Λ = G O^d, A_i = M_i^(-1) G expresses a point of
    Λ in the coordinates of Λ_i. Each A_i is scaled by π^(-s), s its minimal
    entry valuation, and reduced modulo π.

    Raises:
        SingularMatrix: if some M_i is not invertible
    """
    G = _as_matrix(vertex)
    field = G.field
    residue = residue_field_of(field)
    maps = []
    for L in gamma:
        M = _as_matrix(L)
        same_field(field, M.field)
        _, A = saturate_matrix(M.inverse() @ G)
        maps.append(tuple(tuple(residue.normalize(x) for x in row) for row in A.residue_rows()))
    node = vertex if isinstance(vertex, LatticeClass) else lattice_class(vertex)
    return ReducedMapFamily(node, tuple(maps), residue)


def kernel_profile(maps: Sequence[Sequence[Sequence]], d: int, field) -> DTable:
    """
    d_I = dim of the common kernel of Ā_i, i ∈ I, for every subset I.

    Indices are 0-based; d_∅ = d.
    """
    n = len(maps)
    if n > MAX_FACTORS:
        raise TooManyFactors(f"{n} maps give 2^{n} subsets; at most {MAX_FACTORS} are supported", n=n)
    table: DTable = {frozenset(): d}
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            stacked = [list(row) for i in subset for row in maps[i]]
            table[frozenset(subset)] = len(kernel_basis(stacked, field, d))
    return table


def m_set(d_table: DTable, h: int, d: int, n: int) -> List[Tuple[int, ...]]:
    """
    All m in N^n with |m| = h and sum_{i in I} m_i < d - d_I for every nonempty I.

    Returned in lexicographic order.
    """
    subsets = [I for I in d_table if I]
    caps = [d - d_table[frozenset((i,))] - 1 for i in range(n)]
    found = []

    def extend(prefix: List[int], remaining: int):
        i = len(prefix)
        if i == n:
            if remaining == 0:
                m = tuple(prefix)
                if all(sum(m[j] for j in I) < d - d_table[I] for I in subsets):
                    found.append(m)
            return
        for value in range(min(caps[i], remaining) + 1):
            extend(prefix + [value], remaining - value)

    if h >= 0 and all(c >= 0 for c in caps):
        extend([], h)
    return sorted(found)


def image_dimension(d_table: DTable, d: int, n: int) -> int:
    """Largest h in [0, d-1] with M(h) nonempty; 0 when M(0) is already empty."""
    dimension = 0
    gap = None
    for h in range(d):
        if m_set(d_table, h, d, n):
            if gap is not None:
                raise MonotonicityViolation(f"M({h}) is nonempty but M({gap}) is empty", h=h, gap=gap)
            dimension = h
        elif gap is None:
            gap = h
    return dimension


def signature_kind(top_multidegrees: Sequence[Tuple[int, ...]]) -> str:
    """'concentrated' when every multidegree has a single nonzero part, else 'mixed'."""
    if all(sum(1 for x in m if x) <= 1 for m in top_multidegrees):
        return 'concentrated'
    return 'mixed'


def d_table_to_json(d_table: DTable) -> Dict[str, int]:
    def key(I):
        return ','.join(str(i + 1) for i in sorted(I)) or '-'
    return {key(I): v for I, v in sorted(d_table.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))}


@dataclass(frozen=True)
class VertexReport:
    vertex: LatticeClass
    rank_vector: Tuple[int, ...]
    d_table: DTable
    dimension: int
    top_multidegrees: Tuple[Tuple[int, ...], ...]
    is_component: bool
    finite_residue_field: bool
    signature_kind: Optional[str] = None
    in_hull: bool = True

    def to_json(self) -> dict:
        return {
            'vertex': self.vertex.to_json(),
            'rank_vector': list(self.rank_vector),
            'd_table': d_table_to_json(self.d_table),
            'dimension': self.dimension,
            'top_multidegrees': [list(m) for m in self.top_multidegrees],
            'is_component': self.is_component,
            'finite_residue_field': self.finite_residue_field,
            'signature_kind': self.signature_kind,
            'in_hull': self.in_hull,
        }


def vertex_report(reps: Sequence[ValuedMatrix], vertex: LatticeClass, in_hull: bool = True) -> VertexReport:
    family = reduced_maps(reps, vertex)
    d, n = vertex.d, len(reps)
    table = kernel_profile(family.maps, d, family.residue_field)
    dimension = image_dimension(table, d, n)
    top = tuple(m_set(table, dimension, d, n))
    is_component = dimension == d - 1
    return VertexReport(
        vertex=vertex,
        rank_vector=family.ranks(),
        d_table=table,
        dimension=dimension,
        top_multidegrees=top,
        is_component=is_component,
        finite_residue_field=vertex.field.finite_residue_field,
        signature_kind=signature_kind(top) if is_component else None,
        in_hull=in_hull,
    )


def _classes(gamma: Sequence[LatticeLike]) -> List[LatticeClass]:
    return [g if isinstance(g, LatticeClass) else lattice_class(g) for g in gamma]


def special_fiber_components(gamma: Sequence[LatticeLike], hull: Optional[ConvexHull] = None) -> List[VertexReport]:
    """One report per vertex of conv(Γ); the components are the reports with is_component set."""
    classes = _classes(gamma)
    hull = hull or convex_hull(classes)
    reps = [c.canonical for c in classes]
    if classes[0].field.finite_residue_field:
        logger.warning("residue field %s is finite; component classification is reported, not guaranteed",
                       residue_field_of(classes[0].field))
    reports = [vertex_report(reps, v) for v in hull.vertices]
    logger.info("scanned %d hull vertices, %d components",
                len(reports), sum(r.is_component for r in reports))
    return reports


def neighbourhood_components(gamma: Sequence[LatticeLike], radius: int) -> List[VertexReport]:
    """Reports for every vertex within ``radius`` steps of conv(Γ), flagged by hull membership."""
    classes = _classes(gamma)
    hull = convex_hull(classes)
    reps = [c.canonical for c in classes]
    return [vertex_report(reps, v, in_hull=v in hull) for v in ball(hull.vertices, radius)]


# ---------------------------------------------------------------------------
# matrix codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MPReport:
    saturated: bool
    mp_dimension: int
    b_matrices: Tuple[ValuedMatrix, ...]
    rank_vector: Tuple[int, ...]
    d_table: DTable
    gamma: Tuple[LatticeClass, ...] = ()
    hull: Optional[ConvexHull] = None
    hull_contains_standard: Optional[bool] = None

    def to_json(self) -> dict:
        out = {
            'saturated': self.saturated,
            'mp_dimension': self.mp_dimension,
            'b_matrices': [B.to_text_rows() for B in self.b_matrices],
            'rank_vector': list(self.rank_vector),
            'd_table': d_table_to_json(self.d_table),
        }
        if self.hull is not None:
            out['gamma'] = [g.to_json() for g in self.gamma]
            out['hull'] = [v.to_json() for v in self.hull.vertices]
            out['hull_contains_standard'] = self.hull_contains_standard
        return out


def assemble_b(A: Sequence[ValuedMatrix]) -> List[ValuedMatrix]:
    """
    B_i = (i-th column of A_1 | ... | i-th column of A_n), i = 1..e.

    Raises:
        RectangularityViolation: unless n = d
        SingularB: if some B_i is not invertible
    """
    if not A:
        raise InvalidArgument("a matrix code needs at least one generator")
    field = A[0].field
    d, e = A[0].shape
    if any(a.shape != (d, e) for a in A):
        raise InvalidArgument("generators of a matrix code must share one shape")
    same_field(*(a.field for a in A))
    if len(A) != d:
        raise RectangularityViolation(f"{len(A)} generators of {d}×{e} matrices; the criterion needs n = d",
                                      n=len(A), d=d)
    Bs = []
    for i in range(e):
        B = ValuedMatrix.from_rows(field, [[a[r, i] for a in A] for r in range(d)])
        if B.det().is_zero():
            raise SingularB(f"B_{i + 1} is singular", index=i + 1)
        Bs.append(B)
    return Bs


def is_module_basis(A: Sequence[ValuedMatrix]) -> bool:
    """Whether the A_i are an O-basis of the integral part of their span."""
    if not all(a.is_integral() for a in A):
        return False
    coords = ValuedMatrix.from_rows(A[0].field, [list(a.entries()) for a in A])
    return all(v == 0 for v in elementary_divisor_valuations(coords))


def mp_dimension(A: Sequence[ValuedMatrix]) -> MPReport:
    """
    Dimension of the multi-projective closure of the reduced code.

    Uses the image dimension of (B̄_1, ..., B̄_e) at the standard lattice.
    An integral family with some B_i ≡ 0 mod π has no point with all
    columns nonzero; its closure is empty and reported as -1.
    """
    Bs = assemble_b(A)
    field = Bs[0].field
    d = Bs[0].nrows
    saturated = is_module_basis(A)
    standard = standard_class(field, d)
    # B_i = (B_i^(-1))^(-1) · I
    family = reduced_maps([B.inverse() for B in Bs], standard)
    table = kernel_profile(family.maps, d, family.residue_field)
    integral = all(B.is_integral() for B in Bs)
    if integral and any(B.min_valuation() > 0 for B in Bs):
        dimension = -1
    else:
        dimension = image_dimension(table, d, len(Bs))
    logger.debug("matrix code with d=%d, e=%d: saturated=%s, mp dimension %d", d, len(Bs), saturated, dimension)
    return MPReport(saturated, dimension, tuple(Bs), family.ranks(), table)


def basis_criterion(A: Sequence[ValuedMatrix]) -> MPReport:
    """
    Check [O^d] ∈ conv(Γ), Γ = {[B_i^(-1) O^d]}, for an O-basis of full closure dimension.

    Membership is always reported; it is asserted only when the family is a
    module basis and the closure has dimension d-1.

    Raises:
        CriterionViolation: if the hypotheses hold but [O^d] lies outside the hull
    """
    report = mp_dimension(A)
    field = report.b_matrices[0].field
    d = report.b_matrices[0].nrows
    gamma = tuple(lattice_class(B.inverse()) for B in report.b_matrices)
    hull = convex_hull(gamma)
    member = hull_member(standard_class(field, d), hull)
    if report.saturated and report.mp_dimension == d - 1 and not member:
        logger.error("standard lattice outside the hull of %d classes for a saturated code", len(gamma))
        raise CriterionViolation("hypotheses hold but [O^d] is not in conv(Γ)",
                                 gamma=[g.to_json() for g in gamma])
    return replace(report, gamma=gamma, hull=hull, hull_contains_standard=member)
