"""
Random Instances
================
Seeded generators of rings elements, sigma-polynomials, lattices and matrix
codes for the randomized property suites.

Location: algebra/sampling.py
"""

from typing import List, Optional

import numpy as np

from .chain_rings import GaloisRing, GaloisRingElement
from .conf import get_setting
from .exceptions import SingularB
from .local_linalg import PrimeField, rank_over_field
from .mustafin import assemble_b
from .skew_algebra import SigmaPoly
from .valued_scalars import ValuedMatrix


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(get_setting('ALGEBRA_DEFAULT_SEED') if seed is None else seed)


def random_element(rng: np.random.Generator, ring: GaloisRing) -> GaloisRingElement:
    return ring.element(rng.integers(0, ring.base_modulus, size=ring.n).tolist())


def random_unit(rng: np.random.Generator, ring: GaloisRing) -> GaloisRingElement:
    while True:
        x = random_element(rng, ring)
        if x.is_unit():
            return x


def random_sigma_poly(rng: np.random.Generator, ring: GaloisRing) -> SigmaPoly:
    return SigmaPoly(ring, [random_element(rng, ring) for _ in range(ring.n)])


def random_free_family(rng: np.random.Generator, ring: GaloisRing, r: int) -> List[GaloisRingElement]:
    """r elements whose reductions are independent over F_p, i.e. a basis of a free submodule."""
    while True:
        beta = [random_element(rng, ring) for _ in range(r)]
        rows = [list(b.residue()) for b in beta]
        if rank_over_field(rows, PrimeField(ring.p)) == r:
            return beta


def random_int_matrix(rng: np.random.Generator, field, rows: int, cols: int,
                      low: int = -4, high: int = 5) -> ValuedMatrix:
    return ValuedMatrix.from_rows(field, rng.integers(low, high, size=(rows, cols)).tolist())


def random_invertible(rng: np.random.Generator, field, d: int, low: int = -4, high: int = 5) -> ValuedMatrix:
    while True:
        M = random_int_matrix(rng, field, d, d, low, high)
        if not M.det().is_zero():
            return M


def random_lattice_matrix(rng: np.random.Generator, field, d: int, max_shift: int = 2) -> ValuedMatrix:
    """An invertible integer matrix times a diagonal of uniformizer powers."""
    shifts = rng.integers(0, max_shift + 1, size=d).tolist()
    diagonal = ValuedMatrix.diagonal(field, [field.pi_power(s) for s in shifts])
    return random_invertible(rng, field, d) @ diagonal


def random_matrix_code(rng: np.random.Generator, field, d: int, e: int,
                       low: int = -3, high: int = 4) -> List[ValuedMatrix]:
    """d integer d×e matrices whose assembled B_i are all invertible."""
    while True:
        A = [random_int_matrix(rng, field, d, e, low, high) for _ in range(d)]
        try:
            assemble_b(A)
        except SingularB:
            continue
        return A
