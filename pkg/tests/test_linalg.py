import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from pontryagin.linalg import (
    Echelon,
    IntegerMatrix,
    invariant_factors,
    kernel_subgroup,
    quotient_structure,
    smith_normal_form,
    solve_affine,
    subgroup,
)


def span_brute(moduli, gens):
    """Closure of the generators under addition, by breadth-first search."""
    mod = tuple(moduli)
    seen = {tuple([0] * len(mod))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, g, mod))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def test_snf_example():
    U, D, V = smith_normal_form([[2, 4], [6, 8]])
    assert D.tolist() == [[2, 0], [0, 4]]
    assert (U @ D @ V).tolist() == [[2, 4], [6, 8]]
    assert U.is_unimodular() and V.is_unimodular()


def test_snf_edge_shapes():
    assert invariant_factors([[0, 0], [0, 0]]) == []
    assert invariant_factors([[5]]) == [5]
    assert invariant_factors([[-3]]) == [3]
    U, D, V = smith_normal_form([[1, 2, 3]])
    assert D.tolist() == [[1, 0, 0]]


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda r: st.integers(1, 4).flatmap(
            lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_snf_against_sympy(rows):
    U, D, V = smith_normal_form(rows)
    assert (U @ D @ V).tolist() == rows
    assert U.is_unimodular() and V.is_unimodular()
    diag = D.diagonal()
    nonzero = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    ref = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)))
    assert sorted(diag) == ref_diag


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.sampled_from([2, 3, 4, 6, 8]), min_size=1, max_size=3).flatmap(
        lambda mods: st.tuples(
            st.just(mods),
            st.lists(st.tuples(*[st.integers(0, m - 1) for m in mods]), max_size=4),
        )
    )
)
def test_echelon_against_brute_span(data):
    mods, gens = data
    E = subgroup(mods, gens)
    span = span_brute(mods, gens)
    assert E.order() == len(span)
    listed = {tuple(int(v) for v in x) for x in E.elements()}
    assert listed == span
    for x in itertools.product(*(range(m) for m in mods)):
        assert E.contains(x) == (x in span)
        coset = {tuple((a + b) % m for a, b, m in zip(x, s, mods)) for s in span}
        assert tuple(int(v) for v in E.canonical(x)) == min(coset)


def test_preimage_and_kernel():
    # f: Z/4 + Z/4 -> Z/4, (x, y) -> 2x + y
    graph = Echelon([4], [[2], [1]], [[1, 0], [0, 1]], [4, 4])
    pre = graph.solve([3])
    assert (2 * pre[0] + pre[1]) % 4 == 3
    K = kernel_subgroup([4, 4], [4], [[2], [1]])
    assert K.order() == 4
    assert all((2 * int(x) + int(y)) % 4 == 0 for x, y in K.elements())


def test_quotient_structure():
    # <(1,0),(0,1)> / <(2,0)> in Z/4 + Z/2  ->  Z/2 + Z/2
    Q = quotient_structure([4, 2], [[1, 0], [0, 1]], subgroup([4, 2], [[2, 0]]))
    assert sorted(Q.factors) == [2, 2]
    # Z/8 / <4>  ->  Z/4 with representative 1
    Q = quotient_structure([8], [[1]], subgroup([8], [[4]]))
    assert Q.factors == [4] and Q.representatives[0].tolist() == [1]


def test_solve_affine_matches_brute_force():
    mods = [4, 4, 2]

    def residual(x):
        a, b, c = (int(v) for v in x)
        return np.array([(2 * a + b + 1) % 4, (a + c) % 2]), [4, 2]

    sol = solve_affine(mods, residual)
    brute = {
        x for x in itertools.product(*(range(m) for m in mods)) if not np.any(residual(np.array(x))[0])
    }
    assert sol.count() == len(brute)
    assert {tuple(int(v) for v in s) for s in sol.solutions()} == brute


def test_solve_affine_inconsistent():
    def residual(x):
        return np.array([(2 * int(x[0]) + 1) % 4]), [4]

    assert solve_affine([4], residual) is None


def test_integer_matrix_helpers():
    M = IntegerMatrix.from_rows([[2, 1], [1, 1]])
    assert M.determinant() == 1
    assert (M @ IntegerMatrix.identity(2)).tolist() == M.tolist()
    assert M.transpose().tolist() == [[2, 1], [1, 1]]
    with pytest.raises(Exception):
        subgroup([0], [[1]])
