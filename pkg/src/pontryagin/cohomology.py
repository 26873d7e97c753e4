"""Cohomology of finite groups with coefficients in finite modules.

Everything runs on the normalized bar complex.  A normalized n-cochain is a
vector in the coordinate group (Z/m_1 + ... + Z/m_r)^T, T = (|G|-1)^n, with
tuples in lexicographic order and module coordinates innermost.  The
differential becomes an integer matrix; kernels, images and preimages come
from :class:`~pontryagin.linalg.Echelon`, and invariant factors of the
quotient from the Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .cochains import Cochain, differential, is_cocycle, trivial_action_for
from .errors import InternalError, PreconditionError, ScaleError, ShapeError
from .groups import FiniteGroup
from .linalg import Echelon, homomorphism_graph, quotient_structure
from .modules import FinAbModule, GAction

# dense differential matrices above this many entries are refused
MATRIX_LIMIT = 20_000_000


class BarComplex:
    """Normalized bar complex C^*(G, M) for one G-action; caches its matrices."""

    def __init__(self, action: GAction, force: bool = False):
        self.action = action
        self.group = action.group
        self.module = action.module
        self.force = force
        self._graphs: dict[int, Echelon] = {}

    @classmethod
    def of(cls, action: GAction, force: bool = False) -> "BarComplex":
        cache = action._cache
        if "bar" not in cache:
            cache["bar"] = cls(action, force)
        bar = cache["bar"]
        bar.force = bar.force or force
        return bar

    # -- coordinates --------------------------------------------------------

    def tuple_count(self, n: int) -> int:
        return (self.group.order - 1) ** n

    def dimension(self, n: int) -> int:
        return self.tuple_count(n) * self.module.rank

    def moduli(self, n: int) -> np.ndarray:
        return np.tile(self.module.moduli, self.tuple_count(n))

    def to_vector(self, f: Cochain) -> np.ndarray:
        if f.degree == 0:
            return f.values.reshape(-1).copy()
        return f.values[(slice(1, None),) * f.degree].reshape(-1).copy()

    def from_vector(self, vec, n: int) -> Cochain:
        N, r = self.group.order, self.module.rank
        vals = np.zeros((N,) * n + (r,), dtype=np.int64)
        vec = np.asarray(vec, dtype=np.int64)
        if n == 0:
            vals[...] = vec.reshape(r)
        else:
            vals[(slice(1, None),) * n] = vec.reshape((N - 1,) * n + (r,))
        return Cochain(n, self.group, self.module, vals, True)

    # -- differentials ------------------------------------------------------

    def differential_images(self, n: int) -> np.ndarray:
        """Row k is d(e_k) for the k-th coordinate unit vector of C^n."""
        N, r = self.group.order, self.module.rank
        rows_out = self.dimension(n + 1)
        cols_in = self.dimension(n)
        if rows_out * cols_in > MATRIX_LIMIT and not self.force:
            raise ScaleError(
                f"differential C^{n} -> C^{n + 1} has {rows_out} x {cols_in} entries",
                estimate=rows_out * cols_in,
            )
        mat = np.zeros((rows_out, cols_in), dtype=np.int64)
        if rows_out == 0 or cols_in == 0:
            return mat.T.copy()
        out = np.array(list(self.group.tuples(n + 1, normalized=True)), dtype=np.int64)
        out = out.reshape(-1, n + 1)
        R = len(out)
        base = N - 1
        weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64) if n else np.zeros(0, np.int64)

        def block(tuples: np.ndarray) -> np.ndarray:
            return (tuples - 1) @ weights if n else np.zeros(len(tuples), dtype=np.int64)

        eye = np.eye(r, dtype=np.int64)
        row_idx = (np.arange(R)[:, None] * r + np.arange(r)[None, :])  # (R, r)

        def add(col_blocks: np.ndarray, valid: np.ndarray, coeff: np.ndarray) -> None:
            # coeff: (R, r, r) block added at (row block, col block)
            rr = np.repeat(row_idx[:, :, None], r, axis=2)
            cc = col_blocks[:, None, None] * r + np.arange(r)[None, None, :]
            cc = np.broadcast_to(cc, rr.shape)
            m = np.broadcast_to(valid[:, None, None], rr.shape)
            np.add.at(mat, (rr[m], cc[m]), coeff[m])

        mats = self.action.matrices()
        all_valid = np.ones(R, dtype=bool)
        add(block(out[:, 1:]), all_valid, mats[out[:, 0]])
        mult = self.group.mult
        for i in range(1, n + 1):
            merged = mult[out[:, i - 1], out[:, i]]
            args = np.concatenate([out[:, : i - 1], merged[:, None], out[:, i + 1 :]], axis=1)
            valid = merged != 0
            sign = 1 if i % 2 == 0 else -1
            add(block(np.where(valid[:, None], args, 1)), valid, np.broadcast_to(sign * eye, (R, r, r)))
        sign = 1 if (n + 1) % 2 == 0 else -1
        add(block(out[:, :n]), all_valid, np.broadcast_to(sign * eye, (R, r, r)))
        mod = self.moduli(n + 1)
        return np.mod(mat, mod[:, None]).T.copy()

    def graph(self, n: int) -> Echelon:
        """Echelon of the graph of d: C^n -> C^{n+1} (image with preimages, kernel)."""
        if n not in self._graphs:
            self._graphs[n] = homomorphism_graph(
                self.moduli(n), self.moduli(n + 1), self.differential_images(n)
            )
        return self._graphs[n]

    def coboundaries(self, n: int) -> Echelon:
        """B^n as an echelon whose payloads are preimages in C^{n-1}."""
        return self.graph(n - 1)

    def cocycle_generators(self, n: int) -> list[np.ndarray]:
        graph = self.graph(n)
        return list(graph.kernel)

    # -- cohomology ---------------------------------------------------------

    def cohomology(self, n: int) -> "CohomologyGroup":
        if n < 1:
            raise PreconditionError("only degrees n >= 1 are supported (H^0 is the fixed points)")
        q = quotient_structure(self.moduli(n), self.cocycle_generators(n), self.coboundaries(n))
        reps = tuple(self.from_vector(v, n) for v in q.representatives)
        return CohomologyGroup(n, tuple(q.factors), reps, self.action)

    def preimage(self, f: Cochain) -> Cochain | None:
        if f.degree < 1:
            raise PreconditionError("degree-0 cochains are never coboundaries of anything nonzero")
        pay = self.coboundaries(f.degree).solve(self.to_vector(f))
        if pay is None:
            return None
        lam = self.from_vector(pay, f.degree - 1)
        if differential(lam, self.action) != f:
            raise InternalError("computed preimage does not reproduce the cochain")
        return lam


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    factors: tuple[int, ...]
    representatives: tuple[Cochain, ...]
    action: GAction = field(repr=False)

    @property
    def order(self) -> int:
        return prod(self.factors)

    def is_trivial(self) -> bool:
        return not self.factors


def _resolve_action(G: FiniteGroup, M: FinAbModule, action: GAction | None) -> GAction:
    if action is None:
        return GAction.trivial(G, M)
    if not action.group.same_as(G) or action.module != M:
        raise ShapeError("action does not match the given group and module")
    return action


def cohomology_group(
    G: FiniteGroup,
    M: FinAbModule,
    n: int,
    action: GAction | None = None,
    force: bool = False,
) -> CohomologyGroup:
    """H^n(G, M) with invariant factors and one normalized cocycle per factor."""
    if n < 1:
        raise PreconditionError("unsupported degree: H^0 (fixed points) is not computed here")
    act = _resolve_action(G, M, action)
    return BarComplex.of(act, force).cohomology(n)


def _action_for(f: Cochain, action: GAction | None) -> GAction:
    if action is None:
        return trivial_action_for(f)
    if not action.group.same_as(f.group) or action.module != f.module:
        raise ShapeError("action does not match the cochain's group and module")
    return action


def is_coboundary(f: Cochain, action: GAction | None = None, force: bool = False) -> Cochain | None:
    """A normalized preimage lam with d(lam) = f, or None if f is not a coboundary."""
    act = _action_for(f, action)
    if not f.is_normalized():
        raise PreconditionError("is_coboundary expects a normalized cochain")
    check = is_cocycle(f, act)
    if not check:
        raise PreconditionError(f"cochain is not a cocycle (d f != 0 at {check.witness})")
    if f.degree == 0:
        raise PreconditionError("degree-0 cocycles are not coboundaries")
    if f.is_zero():
        return Cochain.zero(f.group, f.module, f.degree - 1, True, f.base)
    return BarComplex.of(act, force).preimage(f)


def classes_equal(f: Cochain, g: Cochain, action: GAction | None = None) -> bool:
    if f.degree != g.degree:
        raise PreconditionError("classes of different degrees cannot be compared")
    return is_coboundary(f - g, action) is not None


def class_order(f: Cochain, action: GAction | None = None) -> int:
    """Order of [f] in cohomology."""
    act = _action_for(f, action)
    if not is_cocycle(f, act):
        raise PreconditionError("class_order expects a cocycle")
    bar = BarComplex.of(act)
    return bar.coboundaries(f.degree).element_order(bar.to_vector(f))


def cocycle_group(G: FiniteGroup, M: FinAbModule, n: int, action: GAction | None = None) -> Echelon:
    """Z^n as a subgroup of the normalized coordinate group."""
    act = _resolve_action(G, M, action)
    bar = BarComplex.of(act)
    return Echelon(bar.moduli(n), bar.cocycle_generators(n))


def enumerate_cocycles(
    G: FiniteGroup, M: FinAbModule, n: int, action: GAction | None = None, limit: int = 100_000
) -> list[Cochain]:
    """Every normalized n-cocycle, in lexicographic order of their tables."""
    act = _resolve_action(G, M, action)
    Z = cocycle_group(G, M, n, act)
    if Z.order() > limit:
        raise ScaleError(f"{Z.order()} normalized {n}-cocycles exceed the limit {limit}", Z.order())
    bar = BarComplex.of(act)
    vecs = sorted(tuple(int(v) for v in z) for z in Z.elements())
    return [bar.from_vector(v, n) for v in vecs]
