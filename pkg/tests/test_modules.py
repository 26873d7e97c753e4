import numpy as np
import pytest

from pontryagin.errors import RangeError, ShapeError
from pontryagin.groups import direct_product, from_table, make_cyclic
from pontryagin.modules import (
    FinAbModule,
    GAction,
    ModuleAutomorphism,
    act,
    automorphisms,
    cyclic_module,
    enumerate_actions,
    validate_action,
)

Z2, Z3, Z4 = make_cyclic(2), make_cyclic(3), make_cyclic(4)


def negation(G, M, g=1):
    return GAction.from_matrices(G, M, {g: [[M.factors[0] - 1]]})


def test_module_basics():
    M = FinAbModule((2, 4))
    assert M.order == 8 and M.exponent == 4
    assert M.elements()[:3] == [(0, 0), (0, 1), (0, 2)]
    assert M.add((1, 3), (1, 2)) == (0, 1)
    assert M.neg((1, 1)) == (1, 3)
    assert M.index(M.element(5)) == 5
    with pytest.raises(ShapeError):
        FinAbModule((1, 3))
    with pytest.raises(ShapeError):
        M.coerce((1,))


def test_act_examples():
    M = cyclic_module(4)
    assert act(GAction.trivial(Z2, M), 1, 3) == (3,)
    neg = negation(Z2, M)
    assert act(neg, 1, 1) == (3,)
    assert act(neg, 1, 2) == (2,)
    with pytest.raises(RangeError):
        act(neg, 5, 1)


def test_validate_action_examples():
    M = cyclic_module(4)
    assert validate_action(GAction.trivial(from_table([[0, 1], [1, 0]]), M)).ok
    doubling = GAction.from_matrices(Z2, M, {1: [[2]]})
    rep = validate_action(doubling)
    assert "invertible" in rep.failed_checks()
    rep = validate_action(negation(Z3, M))
    assert not rep.ok
    assert "homomorphism" in rep.failed_checks()
    assert rep.violations[0].witness  # a pair (g1, g2)


def test_ill_defined_matrix_is_reported():
    M = FinAbModule((2, 4))
    bad = ModuleAutomorphism(M, [[1, 0], [1, 1]])  # sends an order-2 generator to order 4
    assert bad.ill_defined_entries() == [(1, 0)]
    rep = validate_action(GAction.from_matrices(Z2, M, {1: [[1, 0], [1, 1]]}))
    assert "well-defined" in rep.failed_checks()


def test_automorphism_counts():
    assert len(automorphisms(cyclic_module(8))) == 4
    assert len(automorphisms(FinAbModule((2, 2)))) == 6
    assert len(automorphisms(FinAbModule((2, 4)))) == 8


@pytest.mark.parametrize(
    "G, M",
    [
        (Z2, cyclic_module(4)),
        (Z3, cyclic_module(7)),
        (Z4, FinAbModule((2, 2))),
        (direct_product(Z2, Z2), FinAbModule((2, 2))),
        (from_table([[0, 1, 2, 3, 4, 5], [1, 2, 0, 4, 5, 3], [2, 0, 1, 5, 3, 4],
                     [3, 5, 4, 0, 2, 1], [4, 3, 5, 1, 0, 2], [5, 4, 3, 2, 1, 0]]),
         FinAbModule((2, 2))),
    ],
)
def test_every_enumerated_action_is_valid_and_bijective(G, M):
    actions = enumerate_actions(G, M)
    assert actions
    for a in actions:
        assert validate_action(a).ok
        perms = a.perm_table()
        for g in G.elements():
            assert sorted(perms[g]) == list(range(M.order))
            # act(inv g) is the inverse permutation of act(g)
            inv = perms[int(G.inv[g])]
            assert np.array_equal(inv[perms[g]], np.arange(M.order))


def test_inverse_automorphism():
    M = FinAbModule((4, 4))
    f = ModuleAutomorphism(M, [[1, 1], [0, 3]])
    assert (f @ f.inverse()).is_identity()
    assert (f.inverse() @ f).is_identity()
