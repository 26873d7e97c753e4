import itertools

import numpy as np
import pytest

import oracles
from pontryagin.action_data import (
    BraidedActionData,
    action_data_space,
    action_isomorphic,
    gauge_transform,
    iter_gauge_families,
)
from pontryagin.braided import AbelianThreeCocycle, standard_cyclic
from pontryagin.cochains import Cochain, differential, is_cocycle, shift_by_coboundary
from pontryagin.cohomology import classes_equal, enumerate_cocycles, is_coboundary
from pontryagin.errors import PreconditionError, ShapeError
from pontryagin.groups import direct_product, is_isomorphic, make_cyclic
from pontryagin.modules import FinAbModule, GAction, cyclic_module, enumerate_actions
from pontryagin.obstruction import (
    THETA_SIGN,
    ExtensionDatum,
    build_extension,
    classical_pontryagin,
    classify,
    compatibility_report,
    extension_diagnostic,
    pi_values,
    pontryagin_square,
    pontryagin_squares,
)

Z2G, Z3G, Z4G = make_cyclic(2), make_cyclic(3), make_cyclic(4)
V4 = direct_product(Z2G, Z2G)
Z2, Z3, Z4 = cyclic_module(2), cyclic_module(3), cyclic_module(4)


def walker_tables(B, D, omega):
    """Translate package objects into the plain dicts the term walker reads."""
    nA = B.A.order
    h = {t: int(B.h.values[t][0]) for t in itertools.product(range(nA), repeat=3)}
    c = {t: int(B.c.values[t][0]) for t in itertools.product(range(nA), repeat=2)}
    k = {g: {t: int(D.k[(g,) + t][0]) for t in itertools.product(range(nA), repeat=2)} for g in D.G.elements()}
    theta = {
        (g1, g2): {a: int(D.theta[g1, g2, a][0]) for a in range(nA)}
        for g1, g2 in itertools.product(D.G.elements(), repeat=2)
    }
    P = D.phi.perm_table()
    W = omega.index_values()
    om = {(x, y): int(W[x, y]) for x, y in itertools.product(D.G.elements(), repeat=2)}
    mult = D.G.mult.tolist()
    return mult, om, (lambda g, a: int(P[g, a])), h, c, k, theta, B.H.moduli[0]


def walked(B, D, omega, theta_sign=-1):
    return oracles.walk_pi(*walker_tables(B, D, omega), theta_sign=theta_sign)


def as_dict(pi: Cochain):
    return {t: int(pi.values[t][0]) for t in pi.group.tuples(4)}


def omega_gg(A, value=1):
    return ExtensionDatum.from_dict(GAction.trivial(Z2G, A), {(1, 1): value})


# -- landmarks ---------------------------------------------------------------------


def test_landmark_z2_z4():
    B = standard_cyclic(2, Z4, 1)
    D = BraidedActionData.trivial(Z2G, B)
    om = omega_gg(Z2)
    pi = pontryagin_square(B, D, om)
    assert pi.nonzero_items() == [((1, 1, 1, 1), (1,))]
    assert as_dict(pi) == walked(B, D, om.omega)


def test_landmark_classification():
    B = standard_cyclic(2, Z4, 1)
    D = BraidedActionData.trivial(Z2G, B)
    rep = classify(B, D, omega_gg(Z2))
    assert not rep.liftable and rep.preimage is None
    assert rep.torsor_factors == (2,) and rep.torsor_order == 2
    assert rep.obstruction_order == 2  # H^4(Z/2, Z/4) = Z/2
    # the normalized 3-cochains on Z/2 are determined by lambda(g,g,g) in Z/4;
    # their coboundaries take the values {0, 2} at (g,g,g,g)
    image = set()
    for v in range(4):
        lam = Cochain.from_dict(Z2G, Z4, 3, {(1, 1, 1): v})
        image.add(differential(lam)(1, 1, 1, 1)[0])
    assert image == {0, 2}


def test_zero_omega_lifts():
    B = standard_cyclic(2, Z4, 1)
    rep = classify(B, BraidedActionData.trivial(Z2G, B), ExtensionDatum.zero(GAction.trivial(Z2G, Z2)))
    assert rep.liftable and rep.preimage.is_zero()
    assert rep.torsor_order == 2


def test_classical_landmark_z2_z2():
    B = standard_cyclic(2, Z2, 1)
    assert B.h.is_zero() and B.c((1,), (1,)) == (1,)
    pi = classical_pontryagin(B, Z2G, omega_gg(Z2))
    assert pi.nonzero_items() == [((1, 1, 1, 1), (1,))]
    assert as_dict(pi) == walked(B, BraidedActionData.trivial(Z2G, B), omega_gg(Z2).omega)
    assert is_coboundary(pi) is None


@pytest.mark.parametrize("G", [Z2G, Z3G, Z4G, V4])
def test_trivial_b_gives_zero(G):
    B = AbelianThreeCocycle.trivial(Z2, Z4)
    phi = GAction.trivial(G, Z2)
    for om in enumerate_cocycles(G, Z2, 2, phi):
        assert classical_pontryagin(B, G, om).is_zero()
    rep = classify(B, BraidedActionData.trivial(G, B), ExtensionDatum.zero(phi))
    assert rep.liftable and rep.preimage.is_zero()


def test_zero_omega_gives_zero_for_every_datum():
    B = standard_cyclic(2, Z4, 1)
    for phi in enumerate_actions(Z4G, Z2):
        for psi in enumerate_actions(Z4G, Z4):
            for D in action_data_space(Z4G, B, phi, psi).data():
                assert pontryagin_square(B, D, ExtensionDatum.zero(phi)).is_zero()


# -- agreement with the term walker -----------------------------------------------------


def _instances():
    specs = [
        (Z2G, standard_cyclic(2, Z4, 1)),
        (Z2G, standard_cyclic(4, cyclic_module(8), 2)),
        (Z3G, AbelianThreeCocycle.trivial(Z2, Z3)),
        (Z3G, standard_cyclic(3, Z3, 1)),
        (Z4G, standard_cyclic(2, Z2, 1)),
        (V4, standard_cyclic(2, Z4, 3)),
    ]
    for G, B in specs:
        for phi in enumerate_actions(G, B.A):
            for psi in enumerate_actions(G, B.H):
                data = action_data_space(G, B, phi, psi).data(limit=10_000)
                for D in data[:6]:
                    yield G, B, D


@pytest.mark.parametrize("G,B,D", list(_instances()))
def test_pi_matches_walker(G, B, D):
    for om in enumerate_cocycles(G, B.A, 2, D.phi)[:6]:
        pi = pontryagin_square(B, D, om)
        assert as_dict(pi) == walked(B, D, om)
        assert is_cocycle(pi, D.psi)
        assert pi.is_normalized()


def test_literal_theta_sign_is_not_a_cocycle():
    # pure-gauge datum over trivial B: k = d eta, theta from eta; with +theta the
    # ten terms no longer sum to a cocycle
    G, B = Z3G, AbelianThreeCocycle.trivial(Z2, Z3)
    phi, psi = GAction.trivial(G, Z2), GAction.trivial(G, Z3)
    space = action_data_space(G, B, phi, psi)
    bad = 0
    for D in space.data():
        for om in enumerate_cocycles(G, Z2, 2, phi):
            W = om.index_values()
            lit = B.H.reduce(pi_values(B, D, W, theta_sign=+1))
            ok = B.H.reduce(pi_values(B, D, W))
            assert not differential(Cochain(4, G, B.H, ok)).values.any()
            bad += bool(differential(Cochain(4, G, B.H, lit, normalized=False)).values.any())
    assert THETA_SIGN == -1
    assert bad > 0


def test_theta_sign_irrelevant_when_2h_vanishes():
    B = standard_cyclic(2, Z2, 1)
    for phi in enumerate_actions(V4, Z2):
        for D in action_data_space(V4, B, phi, GAction.trivial(V4, Z2)).data()[:4]:
            for om in enumerate_cocycles(V4, Z2, 2, phi)[:8]:
                W = om.index_values()
                assert np.array_equal(
                    B.H.reduce(pi_values(B, D, W, theta_sign=+1)), B.H.reduce(pi_values(B, D, W))
                )


# -- gauge independence ----------------------------------------------------------------


def test_omega_gauge_independence():
    rng = np.random.default_rng(7)
    B = standard_cyclic(4, cyclic_module(8), 2)
    for phi in enumerate_actions(Z2G, B.A):
        for D in action_data_space(Z2G, B, phi, GAction.trivial(Z2G, B.H)).data()[:4]:
            for om in enumerate_cocycles(Z2G, B.A, 2, phi):
                for _ in range(3):
                    lam = Cochain.from_dict(Z2G, B.A, 1, {(1,): int(rng.integers(4))})
                    om2 = shift_by_coboundary(om, lam, phi)
                    assert classes_equal(pontryagin_square(B, D, om), pontryagin_square(B, D, om2), D.psi)


def test_action_data_gauge_independence():
    B = standard_cyclic(2, Z4, 1)
    phi = GAction.trivial(Z2G, Z2)
    D = action_data_space(Z2G, B, phi, GAction.trivial(Z2G, Z4)).data()[3]
    om = omega_gg(Z2)
    base = pontryagin_square(B, D, om)
    for eta in iter_gauge_families(D):
        D2 = gauge_transform(D, eta)
        assert action_isomorphic(D, D2) is not None
        assert classes_equal(base, pontryagin_square(B, D2, om), D.psi)


def test_upsilon_shift():
    B = standard_cyclic(2, Z4, 1)
    D = BraidedActionData.trivial(Z4G, B)
    om = ExtensionDatum(enumerate_cocycles(Z4G, Z2, 2)[1], GAction.trivial(Z4G, Z2))
    ups = Cochain.from_dict(Z4G, Z4, 3, {(1, 2, 3): 1, (3, 3, 3): 2})
    shifted = pontryagin_square(B, D, om, upsilon=ups)
    assert shifted == pontryagin_square(B, D, om) + differential(ups)
    assert classes_equal(shifted, pontryagin_square(B, D, om))


def test_batched_matches_single():
    B = standard_cyclic(3, cyclic_module(9), 3)
    phi = enumerate_actions(Z3G, B.A)[0]
    D = action_data_space(Z3G, B, phi, GAction.trivial(Z3G, B.H)).data()[-1]
    oms = enumerate_cocycles(Z3G, B.A, 2, phi)
    assert pontryagin_squares(B, D, oms) == [pontryagin_square(B, D, o) for o in oms]


def test_classical_equals_trivial_datum():
    for G in (Z2G, Z4G, V4):
        for B in (standard_cyclic(2, Z4, 1), standard_cyclic(4, cyclic_module(8), 2)):
            D = BraidedActionData.trivial(G, B)
            for om in enumerate_cocycles(G, B.A, 2)[:10]:
                assert classical_pontryagin(B, G, om) == pontryagin_square(B, D, om)


# -- preconditions and shapes ------------------------------------------------------------------


def test_compatibility_is_reported_together():
    B = standard_cyclic(2, Z4, 1)
    D = BraidedActionData.trivial(Z2G, B)
    wrong = ExtensionDatum.zero(GAction.trivial(Z3G, Z3))
    problems = compatibility_report(B, D, wrong)
    assert len(problems) >= 2
    with pytest.raises(ShapeError, match="incompatible inputs"):
        pontryagin_square(B, D, wrong)


def test_mismatched_action_data_rejected():
    B = standard_cyclic(2, Z4, 1)
    D = BraidedActionData.trivial(Z2G, standard_cyclic(2, Z4, 3))
    with pytest.raises(ShapeError, match="different braided"):
        pontryagin_square(B, D, omega_gg(Z2))


def test_non_cocycle_omega_rejected():
    phi = GAction.trivial(Z3G, Z3)
    with pytest.raises(PreconditionError, match="2-cocycle"):
        ExtensionDatum.from_dict(phi, {(1, 1): 1})
    with pytest.raises(PreconditionError, match="normalized"):
        ExtensionDatum(Cochain.from_dict(Z3G, Z3, 2, {(0, 1): 1}, normalized=False), phi)


def test_invalid_b_rejected():
    B = AbelianThreeCocycle(Z2, Z4, Cochain.on_module(Z2, Z4, 3), Cochain.on_module(Z2, Z4, 2, {(1, 1): 1}))
    assert not B.is_valid()
    with pytest.raises(PreconditionError):
        pontryagin_square(B, BraidedActionData.trivial(Z2G, B), omega_gg(Z2))


def test_degenerate_instances():
    B = AbelianThreeCocycle.trivial(FinAbModule(()), Z4)
    G1 = make_cyclic(1)
    rep = classify(B, BraidedActionData.trivial(Z3G, B), ExtensionDatum.zero(GAction.trivial(Z3G, B.A)))
    assert rep.liftable and rep.obstruction.is_zero()
    B2 = standard_cyclic(2, Z4, 1)
    rep = classify(B2, BraidedActionData.trivial(G1, B2), ExtensionDatum.zero(GAction.trivial(G1, Z2)))
    assert rep.liftable and rep.torsor_order == 1
    assert rep.notes


# -- extension with section -------------------------------------------------------------------


def test_extension_cyclic_four():
    E = build_extension(Z2G, Z2, GAction.trivial(Z2G, Z2), omega_gg(Z2))
    assert E.group.order == 4
    assert sorted(E.group.element_order(e) for e in E.group.elements()) == [1, 2, 4, 4]
    assert is_isomorphic(E.group, Z4G)


def test_extension_klein():
    E = build_extension(Z2G, Z2, GAction.trivial(Z2G, Z2), ExtensionDatum.zero(GAction.trivial(Z2G, Z2)))
    assert E.group.exponent() == 2
    assert all(E.group.multiply(e, e) == 0 for e in E.group.elements())


def test_extension_bookkeeping():
    phi = enumerate_actions(Z2G, Z4)[-1]
    om = enumerate_cocycles(Z2G, Z4, 2, phi)[-1]
    E = build_extension(Z2G, Z4, phi, om)
    assert E.group.order == 8
    for g in Z2G.elements():
        assert E.projection[E.section[g]] == g
    for a in range(4):
        assert E.projection[E.inclusion[a]] == 0
    for e1, e2 in itertools.product(E.group.elements(), repeat=2):
        assert E.projection[E.group.multiply(e1, e2)] == Z2G.multiply(E.projection[e1], E.projection[e2])


def test_extension_direct_product_for_zero_omega():
    for G, A in ((Z2G, Z4), (Z4G, Z2), (Z2G, FinAbModule((2, 2)))):
        E = build_extension(G, A, GAction.trivial(G, A), ExtensionDatum.zero(GAction.trivial(G, A)))
        assert is_isomorphic(E.group, direct_product(A.as_group(), G))


def test_cohomologous_omegas_give_isomorphic_extensions():
    phi = GAction.trivial(Z4G, Z2)
    for om in enumerate_cocycles(Z4G, Z2, 2, phi):
        lam = Cochain.from_dict(Z4G, Z2, 1, {(1,): 1, (3,): 1})
        om2 = shift_by_coboundary(om, lam, phi)
        assert is_isomorphic(build_extension(Z4G, Z2, phi, om).group, build_extension(Z4G, Z2, phi, om2).group)


def test_diagnostic_reports_non_associativity():
    phi = GAction.trivial(Z3G, Z3)
    bad = Cochain.from_dict(Z3G, Z3, 2, {(1, 1): 1})
    diag = extension_diagnostic(Z3G, Z3, phi, bad)
    assert not diag.associative and diag.witness is not None
    x, y, z = diag.witness
    T = diag.table
    assert T[T[x, y], z] != T[x, T[y, z]]
    good = extension_diagnostic(Z3G, Z3, phi, Cochain.from_dict(Z3G, Z3, 2, {(1, 2): 1, (2, 1): 1, (2, 2): 1}))
    assert good.associative
