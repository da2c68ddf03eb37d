from fractions import Fraction

import pytest

from algebra.chain_rings import ResidueRing
from algebra.exceptions import InvalidArgument, SingularMatrix
from algebra.local_linalg import (
    PrimeField,
    RationalField,
    elementary_divisor_valuations,
    hermite_form,
    inner_rank,
    invert_matrix,
    kernel_basis,
    rank_over_field,
    rank_profile,
    smith_form,
)
from algebra.valued_scalars import INFINITY, ValuedMatrix

Z9 = ResidueRing(3, 2)


class TestSmithForm:
    def test_residue_ring_divisors(self):
        assert smith_form([[2, 3], [3, 0]], Z9).divisor_valuations == (0, INFINITY)
        assert elementary_divisor_valuations([[3, 0], [0, 6]], Z9) == (1, 1)
        assert elementary_divisor_valuations([[0, 0], [0, 0]], Z9) == (INFINITY, INFINITY)

    def test_transforms_diagonalize(self):
        M = [[6, 3, 1], [3, 0, 4]]
        snf = smith_form(M, Z9)
        q = Z9.modulus
        L, R = snf.left, snf.right
        product = [[sum(L[i][a] * M[a][b] * R[b][j] for a in range(2) for b in range(3)) % q
                    for j in range(3)] for i in range(2)]
        for i in range(2):
            for j in range(3):
                expected = 3 ** snf.divisor_valuations[i] if i == j else 0
                assert product[i][j] == expected % q
        assert invert_matrix(Z9, L) is not None
        assert invert_matrix(Z9, R) is not None

    def test_valued_matrix_transforms(self, q2):
        M = ValuedMatrix.from_rows(q2, [[2, 4], [6, 12 + 8]])
        snf = smith_form(M)
        D = snf.left @ M @ snf.right
        assert D == ValuedMatrix.diagonal(q2, [q2.pi_power(v) for v in snf.divisor_valuations])
        assert snf.divisor_valuations == (1, 3)

    def test_plain_matrix_needs_a_ring(self):
        with pytest.raises(InvalidArgument):
            smith_form([[1]])


class TestRanks:
    def test_cokernel_matrix(self):
        profile = rank_profile([[2, 3], [3, 0]], Z9)
        assert profile.inner_rank == 1
        assert profile.free_rank_kernel == 1

    def test_non_free_image(self):
        assert inner_rank([[3, 0], [0, 1]], Z9) == 2
        assert rank_profile([[3, 0], [0, 1]], Z9).free_rank_kernel == 0

    def test_field_ranks_and_kernels(self):
        F3 = PrimeField(3)
        assert rank_over_field([[1, 2], [2, 1]], F3) == 1
        assert kernel_basis([[1, 2], [2, 1]], F3) == [[1, 1]]
        assert kernel_basis([], F3, 2) == [[1, 0], [0, 1]]
        assert kernel_basis([[Fraction(1), Fraction(2)]], RationalField()) == [[Fraction(-2), Fraction(1)]]


class TestInverse:
    def test_unimodular(self):
        assert invert_matrix(Z9, [[1, 1], [0, 1]]) == [[1, 8], [0, 1]]

    def test_non_invertible(self):
        assert invert_matrix(Z9, [[2, 3], [3, 0]]) is None


class TestHermiteForm:
    def test_reduces_below_diagonal(self, q2):
        H = hermite_form(ValuedMatrix.from_rows(q2, [[1, 0], [5, 4]]))
        assert H == ValuedMatrix.from_rows(q2, [[1, 0], [1, 4]])

    def test_accepts_extra_generators(self, q2):
        gens = ValuedMatrix.from_rows(q2, [[1, 2, 0], [1, 0, 2]])
        assert hermite_form(gens) == ValuedMatrix.from_rows(q2, [[1, 0], [1, 2]])

    def test_tadic_representatives_are_polynomials(self, tadic):
        M = ValuedMatrix.from_rows(tadic, [[1, 0], ['1/(1-t)', 't^2']])
        assert hermite_form(M) == ValuedMatrix.from_rows(tadic, [[1, 0], ['1+t', 't^2']])

    def test_rank_deficient(self, q2):
        with pytest.raises(SingularMatrix):
            hermite_form(ValuedMatrix.from_rows(q2, [[1, 2], [2, 4]]))
