import itertools

import numpy as np
import pytest

from pontryagin.errors import AxiomViolation, InvalidOrderError, RangeError, ShapeError
from pontryagin.groups import (
    direct_product,
    find_isomorphism,
    from_table,
    is_isomorphic,
    make_cyclic,
    trivial_group,
)

S3 = [
    [0, 1, 2, 3, 4, 5],
    [1, 2, 0, 4, 5, 3],
    [2, 0, 1, 5, 3, 4],
    [3, 5, 4, 0, 2, 1],
    [4, 3, 5, 1, 0, 2],
    [5, 4, 3, 2, 1, 0],
]


def axioms_hold(G):
    m = G.mult
    n = G.order
    for a, b, c in itertools.product(range(n), repeat=3):
        if m[m[a, b], c] != m[a, m[b, c]]:
            return False
    for a in range(n):
        if m[0, a] != a or m[a, 0] != a:
            return False
        if m[a, G.inv[a]] != 0 or m[G.inv[a], a] != 0:
            return False
    return True


def test_make_cyclic_small():
    assert make_cyclic(1).order == 1
    assert make_cyclic(2).mult.tolist() == [[0, 1], [1, 0]]
    assert make_cyclic(4).inverse(3) == 1


@pytest.mark.parametrize("bad", [0, -3])
def test_make_cyclic_rejects(bad):
    with pytest.raises(InvalidOrderError):
        make_cyclic(bad)


@pytest.mark.parametrize("n", range(1, 13))
def test_cyclic_axioms_and_abelian(n):
    G = make_cyclic(n)
    assert axioms_hold(G)
    assert G.is_abelian()


def test_direct_product_cases():
    G = from_table(S3)
    P = direct_product(make_cyclic(1), G)
    assert np.array_equal(P.mult, G.mult)
    V = direct_product(make_cyclic(2), make_cyclic(2))
    assert all(V.multiply(g, g) == 0 for g in V.elements())
    Z6 = direct_product(make_cyclic(2), make_cyclic(3))
    # (1, 1) is encoded as 1*3 + 1 = 4
    assert Z6.element_order(4) == 6
    assert axioms_hold(Z6)


def test_from_table_cases():
    assert from_table([[0, 1], [1, 0]]).same_as(make_cyclic(2))
    with pytest.raises(AxiomViolation, match="no inverse for element 1"):
        from_table([[0, 1], [1, 1]])
    G = from_table(S3)
    assert not G.is_abelian()
    assert axioms_hold(G)


def test_from_table_non_associative_witness():
    # a loop that is not associative: a Latin square with identity 0
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(AxiomViolation) as info:
        from_table(table)
    a, b, c = info.value.witness
    t = table
    assert t[t[a][b]][c] != t[a][t[b][c]]


def test_from_table_shape_and_range():
    with pytest.raises(ShapeError):
        from_table([[0, 1]])
    with pytest.raises(RangeError):
        from_table([[0, 5], [5, 0]])
    with pytest.raises(AxiomViolation, match="identity"):
        from_table([[1, 1], [1, 1]])


def test_from_table_renumbers_identity():
    # Z/2 with the identity stored at label 1
    G = from_table([[1, 0], [0, 1]])
    assert G.identity == 0
    assert G.multiply(1, 1) == 0


def test_isomorphism_search():
    V = direct_product(make_cyclic(2), make_cyclic(2))
    assert not is_isomorphic(V, make_cyclic(4))
    assert is_isomorphic(direct_product(make_cyclic(2), make_cyclic(3)), make_cyclic(6))
    phi = find_isomorphism(make_cyclic(4), make_cyclic(4))
    assert phi is not None and sorted(phi) == [0, 1, 2, 3]


def test_tuples_lexicographic():
    G = make_cyclic(3)
    assert list(G.tuples(2, normalized=True)) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert trivial_group().order == 1
