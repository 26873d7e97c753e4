"""Finite groups stored as dense multiplication tables.

Elements are the integers ``0 .. order-1`` and the identity is always ``0``.
Every constructor renumbers its input so that this holds, which turns the
normalization condition on cochains into an index-0 test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import AxiomViolation, InvalidOrderError, RangeError, ShapeError


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mult: np.ndarray
    inv: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> int:
        return int(self.mult.shape[0])

    @property
    def identity(self) -> int:
        return 0

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    def elements(self) -> range:
        return range(self.order)

    def multiply(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return int(self.mult[a, b])

    def inverse(self, a: int) -> int:
        self._check(a)
        return int(self.inv[a])

    def product(self, *elements: int) -> int:
        out = 0
        for g in elements:
            out = int(self.mult[out, g])
        return out

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = int(self.inv[a]), -n
        out = 0
        for _ in range(n):
            out = int(self.mult[out, a])
        return out

    def element_order(self, a: int) -> int:
        self._check(a)
        x, n = a, 1
        while x != 0:
            x = int(self.mult[x, a])
            n += 1
        return n

    def exponent(self) -> int:
        from math import lcm

        return lcm(*(self.element_order(g) for g in self.elements()))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def tuples(self, n: int, normalized: bool = False) -> Iterator[tuple[int, ...]]:
        """All n-tuples in lexicographic order, optionally avoiding the identity."""
        start = 1 if normalized else 0
        return itertools.product(range(start, self.order), repeat=n)

    def same_as(self, other: "FiniteGroup") -> bool:
        return self is other or (
            self.order == other.order and bool(np.array_equal(self.mult, other.mult))
        )

    def _check(self, a: int) -> None:
        if not 0 <= a < self.order:
            raise RangeError(f"element {a} out of range for group of order {self.order}")


def _build(table: np.ndarray, name: str = "") -> FiniteGroup:
    n = table.shape[0]
    inv = np.empty(n, dtype=np.int64)
    rows, cols = np.nonzero(table == 0)
    inv[rows] = cols
    return FiniteGroup(_frozen(table), _frozen(inv), name)


def make_cyclic(n: int) -> FiniteGroup:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidOrderError(f"cyclic group order must be a positive integer, got {n!r}")
    idx = np.arange(n)
    return _build((idx[:, None] + idx[None, :]) % n, name=f"Z/{n}")


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    """Componentwise product; (g1, g2) is encoded as g1*|G2| + g2."""
    n2 = G2.order
    a1 = np.repeat(np.arange(G1.order), n2)
    a2 = np.tile(np.arange(n2), G1.order)
    table = G1.mult[a1[:, None], a1[None, :]] * n2 + G2.mult[a2[:, None], a2[None, :]]
    name = f"{G1.name or '?'}x{G2.name or '?'}" if (G1.name or G2.name) else ""
    return _build(table, name=name)


def check_table(table) -> tuple[np.ndarray, int]:
    """Validate the group axioms on a square table.

    Returns the table as an array together with the identity element.  Raises
    :class:`AxiomViolation` naming a witness for the first failed axiom.
    """
    try:
        arr = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ShapeError(f"group table is not a rectangular integer array: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ShapeError(f"group table must be a non-empty square array, got shape {arr.shape}")
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        bad = tuple(int(i) for i in np.argwhere((arr < 0) | (arr >= n))[0])
        raise RangeError(f"table entry at {bad} is outside 0..{n - 1}")
    idx = np.arange(n)
    identity = None
    for e in range(n):
        if np.array_equal(arr[e], idx) and np.array_equal(arr[:, e], idx):
            identity = e
            break
    if identity is None:
        raise AxiomViolation("no two-sided identity element", witness=None)
    for a in range(n):
        right = np.nonzero(arr[a] == identity)[0]
        if not any(arr[b, a] == identity for b in right):
            raise AxiomViolation(f"no inverse for element {a}", witness=(a,))
    lhs = arr[arr[:, :, None], idx[None, None, :]]
    rhs = arr[idx[:, None, None], arr[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b, c = (int(x) for x in bad[0])
        raise AxiomViolation(
            f"multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})",
            witness=(a, b, c),
        )
    return arr, identity


def from_table(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    arr, identity = check_table(table)
    if identity != 0:
        perm = np.arange(arr.shape[0])
        perm[0], perm[identity] = identity, 0
        # perm is an involution, so it is its own inverse relabelling
        arr = perm[arr[np.ix_(perm, perm)]]
    return _build(arr, name=name)


def trivial_group() -> FiniteGroup:
    return make_cyclic(1)


def _generators(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {0}
    for g in sorted(G.elements(), key=lambda x: -G.element_order(x)):
        if g in span:
            continue
        gens.append(g)
        span = _closure(G, gens)
        if len(span) == G.order:
            break
    return gens


def _closure(G: FiniteGroup, gens: Sequence[int]) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.mult[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> list[int] | None:
    """Search for an isomorphism G -> H; returns the image table or None.

    Backtracks over images of a generating set, matching element orders.
    Intended for small groups only.
    """
    if G.order != H.order:
        return None
    orders_g = sorted(G.element_order(g) for g in G.elements())
    orders_h = sorted(H.element_order(h) for h in H.elements())
    if orders_g != orders_h:
        return None
    gens = _generators(G)
    candidates = [
        [h for h in H.elements() if H.element_order(h) == G.element_order(g)] for g in gens
    ]
    for images in itertools.product(*candidates):
        phi = _extend(G, H, gens, images)
        if phi is not None:
            return phi
    return None


def _extend(G: FiniteGroup, H: FiniteGroup, gens, images) -> list[int] | None:
    phi = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y = int(G.mult[x, g])
                val = int(H.mult[phi[x], h])
                if y in phi:
                    if phi[y] != val:
                        return None
                else:
                    phi[y] = val
                    nxt.append(y)
        frontier = nxt
    if len(set(phi.values())) != G.order:
        return None
    table = [phi[g] for g in G.elements()]
    for a in G.elements():
        for b in G.elements():
            if table[int(G.mult[a, b])] != int(H.mult[table[a], table[b]]):
                return None
    return table


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None
