import pytest

from algebra.chain_rings import build_galois_ring
from algebra.sampling import make_rng
from algebra.valued_scalars import PAdicField, TAdicField, ValuedMatrix


@pytest.fixture
def rng():
    return make_rng(7)


@pytest.fixture
def gr9_2():
    """GR(9, 2) = Z/9[x]/(x^2 + 1)."""
    return build_galois_ring(3, 2, 2)


@pytest.fixture
def q2():
    return PAdicField(2)


@pytest.fixture
def tadic():
    return TAdicField()


@pytest.fixture
def matrix():
    def build(field, rows):
        return ValuedMatrix.from_rows(field, rows)
    return build


# Ball of radius 2 around [Z_2^2] in the tree of PGL_2(Q_2).
TREE_VERTICES = {
    'o': [[1, 0], [0, 1]],
    'a': [[1, 0], [1, 2]],
    'a1': [[1, 0], [3, 4]],
    'a2': [[1, 0], [1, 4]],
    'b': [[1, 0], [0, 2]],
    'b1': [[1, 0], [2, 4]],
    'b2': [[1, 0], [0, 4]],
    'c': [[2, 0], [0, 1]],
    'c1': [[4, 0], [0, 1]],
    'c2': [[2, 0], [1, 2]],
}

TREE_EDGES = [
    ('o', 'a'), ('o', 'b'), ('o', 'c'),
    ('a', 'a1'), ('a', 'a2'),
    ('b', 'b1'), ('b', 'b2'),
    ('c', 'c1'), ('c', 'c2'),
]


@pytest.fixture
def tree(q2):
    return {name: ValuedMatrix.from_rows(q2, rows) for name, rows in TREE_VERTICES.items()}
