import itertools

import pytest

from algebra.buildings import (
    adjacent,
    ball,
    contains,
    convex_hull,
    distance,
    hull_member,
    intersect,
    lattice_class,
    neighbors,
    standard_class,
)
from algebra.exceptions import InvalidArgument, SingularMatrix
from algebra.tests.conftest import TREE_EDGES
from algebra.valued_scalars import ValuedMatrix


def diag(field, *entries):
    return ValuedMatrix.diagonal(field, [field(x) for x in entries])


class TestCanonicalForms:
    def test_homothety_and_reduction(self, q2, matrix):
        assert lattice_class(matrix(q2, [[4, 0], [2, 4]])).canonical == matrix(q2, [[2, 0], [1, 2]])
        assert lattice_class(matrix(q2, [[1, 0], [5, 4]])).canonical == matrix(q2, [[1, 0], [1, 4]])

    def test_invariant_under_column_operations(self, q2, matrix):
        M = matrix(q2, [[3, 1], [2, 6]])
        U = matrix(q2, [[1, 5], [0, 3]])
        assert lattice_class(M @ U) == lattice_class(M.scale(q2(12)))

    def test_tree_vertices_are_canonical(self, tree):
        for M in tree.values():
            assert lattice_class(M).canonical == M

    def test_zero_matrix(self, q2):
        with pytest.raises(SingularMatrix):
            lattice_class(diag(q2, 0, 0))

    def test_json_round_trip(self, tadic):
        L = lattice_class(diag(tadic, 't', 1, 't^3'))
        assert type(L).from_json(L.to_json()) == L


class TestTreeOfQ2:
    def test_edges(self, tree):
        for a, b in TREE_EDGES:
            assert adjacent(tree[a], tree[b]), (a, b)
            assert distance(tree[a], tree[b]) == 1

    def test_non_edges(self, tree):
        edges = {frozenset(e) for e in TREE_EDGES}
        for a, b in itertools.combinations(tree, 2):
            if frozenset((a, b)) not in edges:
                assert not adjacent(tree[a], tree[b]), (a, b)
        assert distance(tree['o'], tree['b2']) == 2

    def test_neighbors_of_the_standard_vertex(self, q2, tree):
        found = set(neighbors(standard_class(q2, 2)))
        assert found == {lattice_class(tree[name]) for name in ('a', 'b', 'c')}

    def test_every_vertex_has_p_plus_one_neighbours(self, tree):
        for M in tree.values():
            assert len(neighbors(M)) == 3

    def test_ball_of_radius_two(self, q2, tree):
        reached = set(ball([standard_class(q2, 2)], 2))
        assert reached == {lattice_class(M) for M in tree.values()}

    def test_neighbours_need_a_finite_residue_field(self, tadic):
        with pytest.raises(InvalidArgument):
            neighbors(standard_class(tadic, 2))


class TestIntersections:
    def test_standard_and_shifted(self, q2):
        meet = intersect(ValuedMatrix.identity(q2, 2), diag(q2, 1, 2))
        assert meet == diag(q2, 1, 2)

    def test_meet_is_contained_in_both(self, q2, tree):
        for a, b in itertools.combinations(tree.values(), 2):
            meet = intersect(a, b)
            assert contains(a, meet) and contains(b, meet)


class TestConvexHull:
    def test_tadic_example(self, tadic):
        hull = convex_hull([ValuedMatrix.identity(tadic, 3), diag(tadic, 1, 't', 't^2')])
        expected = {lattice_class(ValuedMatrix.identity(tadic, 3)),
                    lattice_class(diag(tadic, 1, 1, 't')),
                    lattice_class(diag(tadic, 1, 't', 't^2'))}
        assert set(hull.vertices) == expected
        assert not hull_member(diag(tadic, 1, 1, 't^3'), hull)

    def test_padic_mirror(self, q2):
        hull = convex_hull([ValuedMatrix.identity(q2, 3), diag(q2, 1, 2, 4)])
        assert len(hull) == 3
        assert hull_member(diag(q2, 1, 1, 2), hull)

    def test_adjacent_pair(self, tree):
        hull = convex_hull([tree['o'], tree['a']])
        assert set(hull.vertices) == {lattice_class(tree['o']), lattice_class(tree['a'])}

    def test_path_in_the_tree(self, tree):
        hull = convex_hull([tree['a1'], tree['c2']])
        assert set(hull.vertices) == {lattice_class(tree[n]) for n in ('a1', 'a', 'o', 'c', 'c2')}

    def test_spanning_subtree(self, tree):
        hull = convex_hull([tree['a1'], tree['b2'], tree['c2']])
        names = ('o', 'a', 'a1', 'b', 'b2', 'c', 'c2')
        assert set(hull.vertices) == {lattice_class(tree[n]) for n in names}

    def test_empty_input(self):
        with pytest.raises(InvalidArgument):
            convex_hull([])
