from fractions import Fraction

import pytest

from algebra.chain_rings import build_galois_ring, parse_element
from algebra.exceptions import BudgetExceeded, DepthExceeded, InvalidArgument
from algebra.rank_codes import (
    CodeSpec,
    code_divisor_valuations,
    codewords_of_rank,
    enumerate_codewords,
    filtration_report,
    k_sequence,
    min_distance,
    norm_certificate,
    singleton_check,
)
from algebra.skew_algebra import SigmaPoly, inner_rank_of
from algebra.valued_scalars import INFINITY


def twisted(p, k, n, ell, eta, h=0):
    ring = build_galois_ring(p, k, n)
    return CodeSpec(ring, 'twisted', ell=ell, eta=parse_element(ring, eta), h=h)


@pytest.mark.parametrize('p,n,ell', [(2, 2, 1), (3, 2, 1), (2, 3, 2), (3, 3, 1)])
def test_gabidulin_filtration(p, n, ell):
    spec = CodeSpec(build_galois_ring(p, 2, n), 'gabidulin', ell=ell)
    report = filtration_report(spec, 2)
    assert report.d_values == (n - ell + 1,) * 2
    assert report.k_values == (Fraction(ell * n),) * 2
    assert all(report.mrd_flags)


class TestTwistedCodes:
    def test_unit_twist_drops_distance_at_low_depth(self):
        report = filtration_report(twisted(3, 2, 2, 1, '-1+pi^1'), 2)
        assert report.d_values == (1, 2)
        assert report.k_values == (2, 2)

    def test_twist_congruent_to_minus_one_everywhere(self):
        report = filtration_report(twisted(3, 2, 2, 1, '-1+pi^2'), 2)
        assert report.d_values == (1, 1)

    def test_twist_recovers_distance_one_step_past_its_congruence(self):
        report = filtration_report(twisted(3, 3, 2, 1, '-1+pi^2'), 3)
        assert report.d_values == (1, 1, 2)
        assert report.k_values == (2, 2, 2)
        assert report.mrd_flags == (False, False, True)

    def test_multiples_of_pi_do_not_lower_the_distance(self):
        spec = twisted(3, 2, 2, 1, '-1+pi^1')
        assert min_distance(spec, 2) == 2
        assert min(inner_rank_of(c) for c in enumerate_codewords(spec, 2) if not c.is_zero()) == 1

    def test_degree_four_residue_twist(self):
        assert min_distance(twisted(3, 1, 4, 2, '-1'), 1) == 2

    def test_norm_certificate(self):
        ring = build_galois_ring(3, 2, 2)
        assert not norm_certificate(ring, ring(-1), 1)['mrd_guaranteed']
        assert norm_certificate(ring, ring(2), 1)['mrd_guaranteed']

    def test_singleton_reports_certificate(self):
        report = singleton_check(twisted(3, 2, 2, 1, '-1+pi^1'), 2)
        assert report.is_mrd
        assert report.norm_certificate['mrd_guaranteed']

    def test_invalid_parameters(self):
        ring = build_galois_ring(3, 2, 2)
        with pytest.raises(InvalidArgument):
            CodeSpec(ring, 'twisted', ell=2, eta=ring.one)
        with pytest.raises(InvalidArgument):
            CodeSpec(ring, 'twisted', ell=1)
        with pytest.raises(InvalidArgument):
            CodeSpec(ring, 'reed-solomon')


class TestCustomCodes:
    def test_non_free_code(self, gr9_2):
        spec = CodeSpec(gr9_2, 'custom', generators=(SigmaPoly.identity(gr9_2).scale(3),))
        assert code_divisor_valuations(spec) == (1,)
        assert len(list(enumerate_codewords(spec, 2))) == 3
        assert len(list(enumerate_codewords(spec, 1))) == 1
        assert min_distance(spec, 1) == 0
        assert min_distance(spec, 2) == 2
        report = singleton_check(spec, 2)
        assert not report.is_free
        assert report.log_size == Fraction(1, 2)

    def test_non_saturated_code_may_lose_distance(self, gr9_2, caplog):
        gens = (SigmaPoly.identity(gr9_2), SigmaPoly.monomial(gr9_2, 3, 1))
        spec = CodeSpec(gr9_2, 'custom', generators=gens)
        report = filtration_report(spec, 2)
        assert report.divisor_valuations == (0, 1)
        assert report.d_values == (2, 1)
        assert report.k_values == (1, Fraction(3, 2))
        assert 'non-saturated' in caplog.text

    def test_codewords_of_rank(self, gr9_2):
        f = SigmaPoly(gr9_2, [gr9_2.one, gr9_2.element([1, 3])])
        spec = CodeSpec(gr9_2, 'custom', generators=(f,))
        found = codewords_of_rank(spec, 2, 1, limit=3)
        assert found
        assert all(inner_rank_of(c) == 1 for c in found)


class TestSequences:
    def test_k_sequence(self):
        assert k_sequence((0, 1), 1) == 1
        assert k_sequence((0, 1), 2) == Fraction(3, 2)
        assert k_sequence((0, INFINITY), 3) == 1
        with pytest.raises(InvalidArgument):
            k_sequence((0,), 0)

    def test_depth_limit(self):
        spec = CodeSpec(build_galois_ring(3, 2, 2), 'gabidulin')
        with pytest.raises(DepthExceeded):
            filtration_report(spec, 3)

    def test_budget_is_checked_before_streaming(self):
        spec = CodeSpec(build_galois_ring(3, 2, 2), 'gabidulin')
        with pytest.raises(BudgetExceeded):
            enumerate_codewords(spec, 2, budget=10)
