import pytest

from algebra.chain_rings import (
    build_galois_ring,
    dual_basis,
    integral_basis_conditions,
    integral_basis_test,
    moore_matrix,
    parse_element,
    pi_assemble,
    pi_digits,
    teichmuller_lift,
)
from algebra.exceptions import DepthMismatch, InvalidArgument, NotPrime, RingMismatch, SingularMooreMatrix
from algebra.sampling import random_element


class TestConstruction:
    def test_gr9_2_modulus(self, gr9_2):
        assert gr9_2.modulus == (1, 0, 1)
        assert gr9_2.size == 81
        assert gr9_2.residue_size == 9
        assert gr9_2.unit_group_order == 72
        assert gr9_2.xi * gr9_2.xi == gr9_2(-1)

    def test_xi_is_a_teichmuller_root_of_unity(self):
        for p, k, n in ((2, 3, 2), (2, 2, 3), (3, 2, 3), (5, 2, 2)):
            ring = build_galois_ring(p, k, n)
            assert ring.xi ** (p ** n - 1) == ring.one

    def test_degree_one_is_the_integers_mod_q(self):
        ring = build_galois_ring(3, 2, 1)
        assert ring.modulus == (8, 1)
        assert ring.xi == ring.one

    def test_invalid_parameters(self):
        with pytest.raises(NotPrime):
            build_galois_ring(6, 2, 2)
        with pytest.raises(InvalidArgument):
            build_galois_ring(3, 0, 2)

    def test_reduction_is_compatible(self, gr9_2):
        r1 = gr9_2.reduce(1)
        assert r1.modulus == (1, 0, 1)
        assert r1.reduce_element(gr9_2.element([4, 7])) == r1.element([1, 1])
        with pytest.raises(DepthMismatch):
            gr9_2.reduce(3)


class TestFrobenius:
    def test_frobenius_on_xi(self, gr9_2):
        assert gr9_2.frobenius(gr9_2.xi) == -gr9_2.xi
        assert gr9_2.frobenius(gr9_2.xi, 2) == gr9_2.xi

    def test_norm_and_trace(self, gr9_2):
        xi = gr9_2.xi
        assert gr9_2.norm(xi) == gr9_2.one
        assert gr9_2.norm(1 + xi) == gr9_2(2)
        assert gr9_2.trace(xi) == gr9_2.zero
        assert gr9_2.trace(gr9_2.one) == gr9_2(2)

    def test_frobenius_is_a_ring_map(self, gr9_2, rng):
        for _ in range(20):
            a, b = random_element(rng, gr9_2), random_element(rng, gr9_2)
            assert (a * b).frobenius() == a.frobenius() * b.frobenius()
            assert (a + b).frobenius() == a.frobenius() + b.frobenius()


class TestTeichmuller:
    def test_lift_in_z9(self):
        ring = build_galois_ring(3, 2, 1)
        assert teichmuller_lift(ring, 2).to_int() == 8
        assert teichmuller_lift(ring, 1).to_int() == 1
        assert teichmuller_lift(ring, 0).is_zero()

    def test_lift_is_fixed_by_q_power(self, gr9_2):
        for residue in gr9_2.residue_field_elements():
            y = teichmuller_lift(gr9_2, list(residue))
            assert y ** gr9_2.residue_size == y
            assert y.residue() == residue

    def test_digits(self):
        ring = build_galois_ring(3, 2, 1)
        digits = pi_digits(ring(5))
        assert [d.to_int() for d in digits] == [8, 8]
        assert pi_assemble(digits) == ring(5)

    def test_digits_reassemble(self, gr9_2):
        for x in gr9_2.elements():
            assert pi_assemble(pi_digits(x)) == x


class TestBases:
    def test_power_basis_is_integral(self, gr9_2):
        basis = gr9_2.standard_basis
        for i, a in enumerate(basis.alpha):
            for j, b in enumerate(basis.alpha_star):
                assert gr9_2.trace(a * b) == (gr9_2.one if i == j else gr9_2.zero)
        x = gr9_2.element([5, 7])
        assert basis.combine(basis.coordinates(x)) == x

    def test_conditions_agree(self, gr9_2):
        good = integral_basis_conditions(list(gr9_2.power_basis()))
        assert all(good.values())
        bad = integral_basis_conditions([gr9_2.one, gr9_2.xi * 3])
        assert bad == {'residue_basis': False, 'moore_unit_det': False, 'moore_invertible': False,
                       'dual_units': None, 'module_basis': False}

    def test_non_basis_has_no_dual(self, gr9_2):
        alpha = [gr9_2.one, gr9_2(4)]
        assert not integral_basis_test(alpha)
        with pytest.raises(SingularMooreMatrix):
            dual_basis(alpha)

    def test_moore_matrix(self, gr9_2):
        xi = gr9_2.xi
        assert moore_matrix([gr9_2.one, xi], 2) == [[gr9_2.one, xi], [gr9_2.one, -xi]]
        with pytest.raises(RingMismatch):
            moore_matrix([gr9_2.one, build_galois_ring(3, 1, 2).one], 2)


def test_parse_element(gr9_2):
    assert parse_element(gr9_2, '1+3*xi') == gr9_2.element([1, 3])
    assert parse_element(gr9_2, '-1+pi^1') == gr9_2(2)
    assert parse_element(gr9_2, 'xi^2') == gr9_2(-1)
    with pytest.raises(InvalidArgument):
        parse_element(gr9_2, 'sigma(')
