import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ab3_defects_scalar, standard_cyclic_tables
from pontryagin.braided import (
    AbelianThreeCocycle,
    ab3_equivalent,
    quadratic_trace,
    standard_cyclic,
    symmetric_bilinear,
    validate_ab3,
)
from pontryagin.cochains import Cochain, differential
from pontryagin.errors import ConstructionError, PreconditionError, ShapeError
from pontryagin.modules import FinAbModule, cyclic_module

Z2, Z3, Z4, Z8, Z9 = (cyclic_module(m) for m in (2, 3, 4, 8, 9))


def gauge(B, k):
    """(h + dk, c + k o tau - k): an equivalent cocycle."""
    return AbelianThreeCocycle(B.A, B.H, B.h + differential(k), B.c + k.swap() - k)


def random_k(rng, A, H):
    vals = rng.integers(0, 1000, size=(A.order, A.order, H.rank))
    vals[0, :] = 0
    vals[:, 0] = 0
    return Cochain(2, A.as_group(), H, vals, True, A)


# -- validate_ab3 ----------------------------------------------------------------


def test_trivial_and_bilinear_are_valid():
    assert validate_ab3(AbelianThreeCocycle.trivial(FinAbModule((2, 2)), Z4)).ok
    assert validate_ab3(symmetric_bilinear(FinAbModule((2, 4)), Z4, [[2, 2], [2, 1]])).ok


def test_explicit_z2_z4_table():
    B = AbelianThreeCocycle.from_tables(Z2, Z4, {(1, 1, 1): 2}, {(1, 1): 1})
    assert validate_ab3(B).ok
    assert B == standard_cyclic(2, Z4, 1)


def test_broken_hexagon_is_reported():
    B = AbelianThreeCocycle.from_tables(Z2, Z4, {}, {(1, 1): 1})
    rep = validate_ab3(B)
    assert not rep.ok
    assert any("hexagon" in check for check in rep.failed_checks())
    assert ab3_defects_scalar(2, 4, {t: 0 for t in itertools.product(range(2), repeat=3)},
                              {(a, b): a * b for a in range(2) for b in range(2)}) > 0


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        AbelianThreeCocycle(Z2, Z4, Cochain.on_module(Z2, Z4, 2), Cochain.on_module(Z2, Z4, 2))
    with pytest.raises(ShapeError):
        AbelianThreeCocycle(Z2, Z4, Cochain.on_module(Z2, Z2, 3), Cochain.on_module(Z2, Z4, 2))


# -- standard_cyclic -------------------------------------------------------------


def test_standard_cyclic_examples():
    assert standard_cyclic(3, Z9, 0) == AbelianThreeCocycle.trivial(Z3, Z9)
    B = standard_cyclic(2, Z4, 1)
    assert B.h(1, 1, 1) == (2,) and B.c(1, 1) == (1,)
    B = standard_cyclic(2, Z2, 1)
    assert B.h.is_zero() and B.c(1, 1) == (1,)
    with pytest.raises(ConstructionError):
        standard_cyclic(2, Z8, 1)


def test_standard_cyclic_needs_both_conditions():
    # 3^2 * 1 = 0 in Z/9, but 2*3*1 = 6 != 0: no hexagon-compatible h exists
    with pytest.raises(ConstructionError):
        standard_cyclic(3, Z9, 1)
    h, c = standard_cyclic_tables(3, 9, 1)
    assert ab3_defects_scalar(3, 9, h, c) > 0


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("H", [Z2, Z4, Z8, Z3, Z9], ids=repr)
def test_standard_cyclic_exhaustive(n, H):
    m = H.factors[0]
    admissible = 0
    for t in range(m):
        h, c = standard_cyclic_tables(n, m, t)
        scalar_ok = ab3_defects_scalar(n, m, h, c) == 0
        try:
            B = standard_cyclic(n, H, t)
        except ConstructionError:
            assert (n * n * t) % m or (2 * n * t) % m
            continue
        admissible += 1
        assert scalar_ok and validate_ab3(B).ok
        for key, v in c.items():
            assert B.c(*key) == (v,)
        for key, v in h.items():
            assert B.h(*key) == (v,)
    assert admissible >= 1


# -- quadratic_trace -------------------------------------------------------------


def test_trace_examples():
    q = quadratic_trace(AbelianThreeCocycle.trivial(Z4, Z8))
    assert not q.table.any()
    q = quadratic_trace(standard_cyclic(2, Z4, 1))
    assert q(1) == (1,) and q(0) == (0,)
    q = quadratic_trace(standard_cyclic(3, Z3, 1))
    assert q(2) == (1,)


def test_trace_requires_valid_input():
    with pytest.raises(PreconditionError):
        quadratic_trace(AbelianThreeCocycle.from_tables(Z2, Z4, {}, {(1, 1): 1}))


@pytest.mark.parametrize("A", [Z2, Z3, Z4, FinAbModule((2, 2))], ids=repr)
@pytest.mark.parametrize("H", [Z2, Z4, Z8], ids=repr)
def test_polarization_for_symmetric_forms(A, H):
    rng = np.random.default_rng(A.order * 10 + H.order)
    r = A.rank
    for _ in range(5):
        upper = rng.integers(0, H.order, size=(r, r))
        form = np.triu(upper) + np.triu(upper, 1).T
        try:
            B = symmetric_bilinear(A, H, form.tolist())
        except ConstructionError:
            continue
        q = quadratic_trace(B)
        c = B.c.values
        assert np.array_equal(q.polar(), H.reduce(2 * c))


# -- ab3_equivalent --------------------------------------------------------------


def test_opposite_c_sign_breaks_validity():
    B = standard_cyclic(3, Z9, 3)
    k = random_k(np.random.default_rng(0), B.A, Z9)
    wrong = AbelianThreeCocycle(B.A, B.H, B.h + differential(k), B.c + k - k.swap())
    assert not validate_ab3(wrong).ok
    assert validate_ab3(gauge(B, k)).ok


def test_equivalence_examples():
    B = standard_cyclic(2, Z4, 1)
    assert ab3_equivalent(B, B).is_zero()
    T = AbelianThreeCocycle.trivial(Z2, Z4)
    assert ab3_equivalent(B, T) is None
    assert ab3_equivalent(B, T, method="linear") is None
    with pytest.raises(ShapeError):
        ab3_equivalent(B, AbelianThreeCocycle.trivial(Z2, Z8))


@settings(max_examples=40, deadline=None)
@given(
    case=st.sampled_from([(2, Z4, 1), (2, Z2, 1), (3, Z3, 1), (4, Z8, 2), (2, Z8, 4), (3, Z9, 3)]),
    seed=st.integers(0, 2**32 - 1),
)
def test_trace_is_gauge_invariant(case, seed):
    n, H, t = case
    B = standard_cyclic(n, H, t)
    k = random_k(np.random.default_rng(seed), B.A, H)
    B2 = gauge(B, k)
    assert validate_ab3(B2).ok
    assert quadratic_trace(B2) == quadratic_trace(B)
    for method in ("linear", "auto"):
        w = ab3_equivalent(B2, B, method=method)
        assert w is not None
        assert differential(w) == B2.h - B.h
        assert w.swap() - w == B2.c - B.c


@pytest.mark.parametrize("n, H", [(2, Z4), (3, Z3), (2, Z8)], ids=str)
def test_brute_and_linear_agree_on_all_pairs(n, H):
    m = H.factors[0]
    Bs = []
    for t in range(m):
        try:
            Bs.append(standard_cyclic(n, H, t))
        except ConstructionError:
            pass
    for B, B2 in itertools.product(Bs, repeat=2):
        brute = ab3_equivalent(B, B2, method="brute") is not None
        linear = ab3_equivalent(B, B2, method="linear") is not None
        assert brute == linear == (quadratic_trace(B) == quadratic_trace(B2))
