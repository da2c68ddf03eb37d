import logging

import pytest

from algebra.buildings import lattice_class, standard_class
from algebra.exceptions import InvalidArgument, RectangularityViolation, SingularB
from algebra.mustafin import (
    assemble_b,
    basis_criterion,
    d_table_to_json,
    image_dimension,
    is_module_basis,
    kernel_profile,
    m_set,
    mp_dimension,
    neighbourhood_components,
    reduced_maps,
    signature_kind,
    special_fiber_components,
)
from algebra.valued_scalars import ValuedMatrix

Q2_GAMMA = [
    [[3008, 1088, 304], [432, 40, 416], [36, 344, 100]],
    [[94, 5376, 3328], [6, 1792, 192], [48, 160, 196]],
    [[3, 592, 16], [376, 18, 656], [256, 40, 3072]],
]


@pytest.fixture
def tadic_gamma(tadic):
    return [ValuedMatrix.identity(tadic, 3),
            ValuedMatrix.diagonal(tadic, [tadic(1), tadic.parse('t'), tadic.parse('t^2')])]


def vertex(tadic, *entries):
    return lattice_class(ValuedMatrix.diagonal(tadic, [tadic.parse(x) for x in entries]))


class TestReducedMaps:
    def test_standard_vertex(self, tadic, tadic_gamma):
        family = reduced_maps(tadic_gamma, standard_class(tadic, 3))
        assert family.maps[0] == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        assert family.maps[1] == ((0, 0, 0), (0, 0, 0), (0, 0, 1))
        assert family.ranks() == (3, 1)

    def test_middle_vertex(self, tadic, tadic_gamma):
        family = reduced_maps(tadic_gamma, vertex(tadic, '1', '1', 't'))
        assert family.maps[0] == ((1, 0, 0), (0, 1, 0), (0, 0, 0))
        assert family.maps[1] == ((0, 0, 0), (0, 1, 0), (0, 0, 1))


class TestKernelProfile:
    def test_tables(self, tadic, tadic_gamma):
        family = reduced_maps(tadic_gamma, standard_class(tadic, 3))
        table = kernel_profile(family.maps, 3, family.residue_field)
        assert d_table_to_json(table) == {'-': 3, '1': 0, '2': 2, '1,2': 0}
        assert m_set(table, 2, 3, 2) == [(2, 0)]
        assert image_dimension(table, 3, 2) == 2

    def test_mixed_vertex(self, tadic, tadic_gamma):
        family = reduced_maps(tadic_gamma, vertex(tadic, '1', '1', 't'))
        table = kernel_profile(family.maps, 3, family.residue_field)
        assert m_set(table, 2, 3, 2) == [(1, 1)]

    def test_single_invertible_map(self):
        table = {frozenset(): 3, frozenset({0}): 0}
        assert image_dimension(table, 3, 1) == 2

    def test_equal_rank_one_maps(self):
        table = {frozenset(): 3, frozenset({0}): 2, frozenset({1}): 2, frozenset({0, 1}): 2}
        assert image_dimension(table, 3, 2) == 0

    def test_signature_kind(self):
        assert signature_kind([(2, 0), (0, 2)]) == 'concentrated'
        assert signature_kind([(2, 0), (1, 1)]) == 'mixed'


class TestSpecialFiber:
    def test_tadic_components(self, tadic_gamma):
        reports = special_fiber_components(tadic_gamma)
        assert len(reports) == 3
        assert all(r.is_component for r in reports)
        kinds = sorted(r.signature_kind for r in reports)
        assert kinds == ['concentrated', 'concentrated', 'mixed']
        assert not any(r.finite_residue_field for r in reports)

    def test_tree_edge(self, tree):
        reports = special_fiber_components([tree['o'], tree['a']])
        assert [r.is_component for r in reports] == [True, True]
        assert all(r.signature_kind == 'concentrated' for r in reports)

    def test_components_stay_in_the_hull(self, tree):
        reports = neighbourhood_components([tree['o'], tree['a']], 1)
        assert len(reports) == 6
        assert sum(r.in_hull for r in reports) == 2
        assert all(r.in_hull for r in reports if r.is_component)

    def test_q2_three_lattices(self, q2, caplog):
        gamma = [ValuedMatrix.from_rows(q2, rows) for rows in Q2_GAMMA]
        with caplog.at_level(logging.WARNING, logger='algebra.mustafin'):
            reports = special_fiber_components(gamma)
        components = [r for r in reports if r.is_component]
        assert len(components) == 6
        assert sum(r.signature_kind == 'concentrated' for r in components) == 3
        assert sum(r.signature_kind == 'mixed' for r in components) == 3
        assert 'finite' in caplog.text


class TestMatrixCodes:
    def test_assembles_columns(self, q2, matrix):
        A = [matrix(q2, [[1, 1], [0, 0]]), matrix(q2, [[0, 0], [1, 2]])]
        B1, B2 = assemble_b(A)
        assert B1 == ValuedMatrix.identity(q2, 2)
        assert B2 == matrix(q2, [[1, 0], [0, 2]])

    def test_trivial_pair(self, q2, matrix):
        A = [ValuedMatrix.identity(q2, 2), matrix(q2, [[0, 1], [1, 0]])]
        report = basis_criterion(A)
        assert report.saturated
        assert report.mp_dimension == 1
        assert len(report.hull) == 1
        assert report.hull_contains_standard

    def test_two_vertex_hull(self, q2, matrix):
        A = [matrix(q2, [[1, 1], [0, 0]]), matrix(q2, [[0, 0], [1, 2]])]
        report = basis_criterion(A)
        assert report.saturated and report.mp_dimension == 1
        assert set(report.hull.vertices) == {standard_class(q2, 2),
                                             lattice_class(matrix(q2, [[2, 0], [0, 1]]))}
        assert report.hull_contains_standard

    def test_non_saturated_family(self, q2, matrix):
        A = [ValuedMatrix.identity(q2, 2), matrix(q2, [[1, 2], [2, 1]])]
        assert not is_module_basis(A)
        report = mp_dimension(A)
        assert not report.saturated
        assert report.mp_dimension == 0
        assert basis_criterion(A).hull_contains_standard is not None

    def test_empty_closure(self, q2, matrix):
        A = [matrix(q2, [[2, 0], [0, 2]]), matrix(q2, [[0, 2], [2, 0]])]
        assert mp_dimension(A).mp_dimension == -1

    def test_singular_b(self, q2, matrix):
        with pytest.raises(SingularB):
            assemble_b([ValuedMatrix.identity(q2, 2), matrix(q2, [[1, 0], [0, 0]])])

    def test_needs_square_family(self, q2):
        with pytest.raises(RectangularityViolation):
            assemble_b([ValuedMatrix.identity(q2, 2)] * 3)
        with pytest.raises(InvalidArgument):
            assemble_b([])
