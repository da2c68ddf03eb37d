import itertools

import pytest

from algebra.chain_rings import build_galois_ring
from algebra.exceptions import (
    DependentReduction,
    InvalidArgument,
    NonUnitCoefficient,
    NotIntegralBasis,
    NotMonic,
    SingularTruncatedMoore,
)
from algebra.sampling import random_free_family, random_sigma_poly
from algebra.skew_algebra import (
    SigmaPoly,
    annihilator_determinant,
    annihilator_recursive,
    depth_rank_profile,
    evaluate,
    inner_rank_of,
    matrix_rep,
    moore_factorization,
    norm_condition_check,
    parse_sigma_poly,
    right_divide,
    truncate,
)


@pytest.fixture
def gr4_3():
    return build_galois_ring(2, 2, 3)


class TestArithmetic:
    def test_twisted_multiplication(self, gr9_2):
        x = SigmaPoly.monomial(gr9_2, gr9_2.xi, 1)
        assert x * x == SigmaPoly.identity(gr9_2)

    def test_sigma_power_wraps(self, gr9_2):
        assert SigmaPoly.sigma(gr9_2, 2) == SigmaPoly.identity(gr9_2)

    def test_composition_matches_evaluation(self, gr9_2, rng):
        for _ in range(10):
            f, g = random_sigma_poly(rng, gr9_2), random_sigma_poly(rng, gr9_2)
            for x in gr9_2.power_basis():
                assert evaluate(f * g, x) == evaluate(f, evaluate(g, x))

    def test_parse_and_text(self, gr9_2):
        f = parse_sigma_poly(gr9_2, 'id + (1+3*xi)*sigma')
        assert f.coeffs == (gr9_2.one, gr9_2.element([1, 3]))
        assert f.to_text() == 'id + (1+3*xi)*sigma'
        assert parse_sigma_poly(gr9_2, f.to_text()) == f
        assert parse_sigma_poly(gr9_2, 'sigma^2 - id').is_zero()


class TestMatrixRepresentation:
    def test_cokernel_example(self, gr9_2):
        f = parse_sigma_poly(gr9_2, 'id + (1+3*xi)*sigma')
        assert matrix_rep(f) == [[2, 3], [3, 0]]
        assert inner_rank_of(f) == 1

    def test_rank_is_basis_independent(self, gr9_2, rng):
        alpha = [gr9_2.one + gr9_2.xi, gr9_2.xi]
        for _ in range(10):
            f = random_sigma_poly(rng, gr9_2)
            assert inner_rank_of(f, alpha) == inner_rank_of(f)

    def test_rejects_non_integral_basis(self, gr9_2):
        with pytest.raises(NotIntegralBasis):
            matrix_rep(SigmaPoly.identity(gr9_2), [gr9_2.one, gr9_2.xi * 3])

    def test_depth_profile(self, gr9_2):
        f = parse_sigma_poly(gr9_2, 'id + (1+3*xi)*sigma')
        profile = depth_rank_profile(f)
        assert [row['depth'] for row in profile] == [1, 2]
        assert [row['inner_rank'] for row in profile] == [1, 1]

    def test_truncate_keeps_leading_digits(self, gr9_2):
        f = parse_sigma_poly(gr9_2, 'id + (1+3*xi)*sigma')
        assert truncate(f, 0) == parse_sigma_poly(gr9_2, 'id + sigma')
        assert truncate(f, 1) == f


class TestDivision:
    def test_right_division(self, gr9_2, rng):
        g = parse_sigma_poly(gr9_2, 'sigma + xi*id')
        for _ in range(20):
            f = random_sigma_poly(rng, gr9_2)
            q, r = right_divide(f, g)
            assert q * g + r == f
            assert r.is_zero() or r.degree < g.degree

    def test_divisor_must_be_monic(self, gr9_2):
        with pytest.raises(NotMonic):
            right_divide(SigmaPoly.identity(gr9_2), parse_sigma_poly(gr9_2, '2*sigma'))


class TestAnnihilators:
    def test_single_unit(self, gr9_2):
        expected = parse_sigma_poly(gr9_2, 'sigma - id')
        assert annihilator_recursive([gr9_2.one]) == expected
        assert annihilator_determinant([gr9_2.one]) == expected

    def test_constructions_agree_and_annihilate(self, gr4_3, rng):
        for r in (1, 2):
            for _ in range(10):
                beta = random_free_family(rng, gr4_3, r)
                f = annihilator_recursive(beta)
                assert f == annihilator_determinant(beta)
                assert f.is_monic() and f.degree == r
                assert all(evaluate(f, b).is_zero() for b in beta)

    def test_dependent_reductions(self, gr4_3):
        beta = [gr4_3.one, gr4_3.one + gr4_3.xi * 2]
        with pytest.raises(DependentReduction):
            annihilator_recursive(beta)
        with pytest.raises(SingularTruncatedMoore):
            annihilator_determinant(beta)

    def test_family_must_be_proper(self, gr9_2):
        with pytest.raises(InvalidArgument):
            annihilator_recursive([gr9_2.one, gr9_2.xi])


class TestMooreFactorization:
    def test_divisors(self, gr9_2):
        result = moore_factorization([gr9_2.xi, gr9_2(3)])
        assert result.divisors == (1, 3)
        assert result.verify()

    def test_random_families(self, gr9_2, rng):
        for _ in range(10):
            alpha = [random_sigma_poly(rng, gr9_2).coeffs[0] for _ in range(2)]
            assert moore_factorization(alpha).verify()


class TestNormCondition:
    def test_holds_for_fixed_field_kernel(self, gr9_2):
        f = parse_sigma_poly(gr9_2, 'id - sigma')
        assert norm_condition_check(f, 1).holds
        assert inner_rank_of(f) == 1

    def test_failure_certifies_full_rank(self, gr9_2):
        f = parse_sigma_poly(gr9_2, 'id + (1+xi)*sigma')
        report = norm_condition_check(f, 1)
        assert not report.holds
        assert report.norm_value == gr9_2(5)
        assert inner_rank_of(f) == 2

    def test_errors(self, gr9_2):
        with pytest.raises(InvalidArgument):
            norm_condition_check(SigmaPoly.identity(gr9_2), 1)
        with pytest.raises(NonUnitCoefficient):
            norm_condition_check(parse_sigma_poly(gr9_2, '3*id + sigma'), 1)

    @pytest.mark.parametrize('k', [1, 2])
    def test_every_unit_pair_of_degree_one(self, k):
        ring = build_galois_ring(3, k, 2)
        units = list(ring.units())
        full_rank_failures = 0
        for f0, f1 in itertools.product(units, repeat=2):
            f = SigmaPoly(ring, [f0, f1])
            rank = inner_rank_of(f)
            holds = norm_condition_check(f, 1).holds
            if rank == 1:
                assert holds, f.to_text()
            if not holds:
                assert rank == 2, f.to_text()
                full_rank_failures += 1
        assert full_rank_failures > 0


@pytest.mark.parametrize('p,k', [(3, 1), (2, 2)])
def test_degree_lower_bound_over_every_polynomial(p, k):
    ring = build_galois_ring(p, k, 2)
    elements = list(ring.elements())
    checked = 0
    for coeffs in itertools.product(elements, repeat=ring.n):
        f = SigmaPoly(ring, coeffs)
        if f.is_zero():
            continue
        checked += 1
        assert inner_rank_of(f) >= ring.n - f.degree, f.to_text()
    assert checked == len(elements) ** ring.n - 1
