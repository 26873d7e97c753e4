"""Exact integer linear algebra.

Two tools live here:

* :func:`smith_normal_form` on arbitrary-precision integer matrices, used to
  read off invariant factors of finitely presented abelian groups.
* :class:`Echelon`, a Howell-style echelon basis of a subgroup of a finite
  coordinate group Z/m_1 + ... + Z/m_p.  It gives membership, preimages (via
  an attached payload in a second coordinate group), kernels, subgroup
  orders, lexicographically least coset representatives and element
  enumeration.  Entries stay reduced modulo their coordinate, so there is no
  coefficient growth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm, prod
from typing import Iterator, Sequence

import numpy as np

from .errors import ShapeError


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class IntegerMatrix:
    entries: tuple[tuple[int, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(row) != cols for row in entries):
            raise ShapeError("ragged integer matrix")
        return cls(entries, cols)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls.from_rows([[0] * cols for _ in range(rows)], cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.entries]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntegerMatrix.from_rows(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.entries],
            other.cols,
        )

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix.from_rows([list(c) for c in zip(*self.entries)], self.rows) if (
            self.rows
        ) else IntegerMatrix((), 0)

    def determinant(self) -> int:
        """Fraction-free Bareiss elimination."""
        n = self.rows
        if n != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.determinant()) == 1

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def smith_normal_form(M) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return (U, D, V) with M = U @ D @ V, U and V unimodular.

    D is diagonal with non-negative entries d_1 | d_2 | ... (zeros last).
    All arithmetic is on Python integers.
    """
    if not isinstance(M, IntegerMatrix):
        rows = [list(map(int, r)) for r in M]
        M = IntegerMatrix.from_rows(rows, len(rows[0]) if rows else 0)
    r, c = M.shape
    A = M.tolist()
    U = IntegerMatrix.identity(r).tolist()
    V = IntegerMatrix.identity(c).tolist()

    # Invariant: M == U @ A @ V.  Row op A <- R A pairs with U <- U R^-1;
    # column op A <- A C pairs with V <- C^-1 V.
    def row_combine(i: int, j: int, s: int, t: int, x: int, y: int) -> None:
        # [row_i; row_j] <- [[s, t], [x, y]] [row_i; row_j], det = s*y - t*x = 1
        ri, rj = A[i], A[j]
        A[i] = [s * p + t * q for p, q in zip(ri, rj)]
        A[j] = [x * p + y * q for p, q in zip(ri, rj)]
        # inverse is [[y, -t], [-x, s]]; U <- U R^-1 acts on columns i, j
        for row in U:
            ui, uj = row[i], row[j]
            row[i] = ui * y - uj * x
            row[j] = -ui * t + uj * s

    def col_combine(i: int, j: int, s: int, t: int, x: int, y: int) -> None:
        # [col_i, col_j] <- [col_i, col_j] [[s, x], [t, y]], det = s*y - t*x = 1
        for row in A:
            ai, aj = row[i], row[j]
            row[i] = s * ai + t * aj
            row[j] = x * ai + y * aj
        # C^-1 = [[y, -x], [-t, s]]; V <- C^-1 V acts on rows i, j
        vi, vj = V[i], V[j]
        V[i] = [y * p - x * q for p, q in zip(vi, vj)]
        V[j] = [-t * p + s * q for p, q in zip(vi, vj)]

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            A[i], A[j] = A[j], A[i]
            for row in U:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            V[i], V[j] = V[j], V[i]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            for i in range(t + 1, r):
                if A[i][t]:
                    a, b = A[t][t], A[i][t]
                    if b % a == 0:
                        q = b // a
                        row_combine(t, i, 1, 0, -q, 1)
                    else:
                        g, s, u = _xgcd(a, b)
                        row_combine(t, i, s, u, -b // g, a // g)
            for j in range(t + 1, c):
                if A[t][j]:
                    a, b = A[t][t], A[t][j]
                    if b % a == 0:
                        q = b // a
                        col_combine(t, j, 1, 0, -q, 1)
                    else:
                        g, s, u = _xgcd(a, b)
                        col_combine(t, j, s, u, -b // g, a // g)
            if any(A[i][t] for i in range(t + 1, r)):
                continue
            piv = A[t][t]
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            row_combine(t, bad, 1, 1, 0, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            for row in U:
                row[t] = -row[t]
        t += 1
    return (
        IntegerMatrix.from_rows(U, r),
        IntegerMatrix.from_rows(A, c),
        IntegerMatrix.from_rows(V, c),
    )


def invariant_factors(M) -> list[int]:
    """Nonzero diagonal of the Smith form (unit factors included)."""
    _, D, _ = smith_normal_form(M)
    return [d for d in D.diagonal() if d]


# --------------------------------------------------------------------------
# Subgroups of finite coordinate groups


def _moduli(m) -> np.ndarray:
    arr = np.asarray(m, dtype=np.int64).reshape(-1)
    if np.any(arr < 1):
        raise ShapeError("coordinate moduli must be positive")
    return arr


class Echelon:
    """Howell echelon basis of a subgroup of Z/m_1 + ... + Z/m_p.

    Built from generators, each optionally carrying a payload vector in a
    second coordinate group.  Payloads are transformed alongside the
    generators, so a pivot's payload is always the payload-combination
    producing it; for the graph of a homomorphism (generator = image,
    payload = source element) this yields preimages and the kernel.
    """

    def __init__(
        self,
        moduli,
        generators,
        payloads=None,
        payload_moduli=None,
    ):
        self.moduli = _moduli(moduli)
        p = len(self.moduli)
        gens = np.asarray(generators, dtype=np.int64).reshape(-1, p) if len(generators) else (
            np.zeros((0, p), dtype=np.int64)
        )
        if payload_moduli is None:
            self.payload_moduli = np.zeros(0, dtype=np.int64)
            pays = np.zeros((len(gens), 0), dtype=np.int64)
        else:
            self.payload_moduli = _moduli(payload_moduli)
            q = len(self.payload_moduli)
            pays = np.asarray(payloads, dtype=np.int64).reshape(len(gens), q)
        self.pivot_cols: list[int] = []
        self.pivot_lead: list[int] = []
        self.pivot_rows: list[np.ndarray] = []
        self.pivot_payloads: list[np.ndarray] = []
        self.kernel: list[np.ndarray] = []
        self._eliminate(np.mod(gens, self.moduli), self._pmod(pays))

    def _pmod(self, x: np.ndarray) -> np.ndarray:
        return np.mod(x, self.payload_moduli) if self.payload_moduli.size else x

    def _eliminate(self, V: np.ndarray, P: np.ndarray) -> None:
        mod = self.moduli
        for j in range(len(mod)):
            V, P = self._harvest_zero_rows(V, P)
            m = int(mod[j])
            while True:
                rows = np.nonzero(V[:, j])[0]
                if len(rows) == 0:
                    break
                vals = V[rows, j]
                gs = np.gcd(vals, m)
                r0 = int(rows[np.argmin(gs)])
                g = int(gs.min())
                v = int(V[r0, j])
                piv, ppay = V[r0].copy(), P[r0].copy()
                if v != g:
                    u = pow(v // g, -1, m // g)
                    piv = np.mod(u * piv, mod)
                    ppay = self._pmod(u * ppay)
                    # keep the original generator's remainder: coordinate j is 0
                    V[r0] = np.mod(V[r0] - (v // g) * piv, mod)
                    P[r0] = self._pmod(P[r0] - (v // g) * ppay)
                else:
                    V[r0] = 0
                    P[r0] = 0
                vals = V[:, j]
                mult = (vals % g == 0) & (vals != 0)
                if mult.any():
                    q = (vals[mult] // g)[:, None]
                    V[mult] = np.mod(V[mult] - q * piv, mod)
                    P[mult] = self._pmod(P[mult] - q * ppay)
                rest = np.nonzero(V[:, j])[0]
                if len(rest) == 0:
                    self.pivot_cols.append(j)
                    self.pivot_lead.append(g)
                    self.pivot_rows.append(piv)
                    self.pivot_payloads.append(ppay)
                    k = m // g
                    V = np.vstack([V, np.mod(k * piv, mod)[None, :]])
                    P = np.vstack([P, self._pmod(k * ppay)[None, :]])
                    break
                # a leading entry not divisible by g: merge it with the pivot
                r1 = int(rest[0])
                w = int(V[r1, j])
                e, s, t = _xgcd(g, w)
                new_piv = np.mod(s * piv + t * V[r1], mod)
                new_pay = self._pmod(s * ppay + t * P[r1])
                V[r1] = np.mod((w // e) * piv - (g // e) * V[r1], mod)
                P[r1] = self._pmod((w // e) * ppay - (g // e) * P[r1])
                V = np.vstack([V, new_piv[None, :]])
                P = np.vstack([P, new_pay[None, :]])
        self._harvest_zero_rows(V, P)

    def _harvest_zero_rows(self, V: np.ndarray, P: np.ndarray):
        zero = ~np.any(V, axis=1)
        if zero.any():
            for pay in P[zero]:
                if np.any(pay):
                    self.kernel.append(pay.copy())
            V, P = V[~zero], P[~zero]
        return V, P

    # -- queries ------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self.moduli)

    def order(self) -> int:
        return prod(int(self.moduli[j]) // g for j, g in zip(self.pivot_cols, self.pivot_lead))

    def reduce(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Return (r, c) with x = r + (element with payload c) and r lex-least."""
        x = np.mod(np.asarray(x, dtype=np.int64).reshape(self.dimension), self.moduli)
        pay = np.zeros(len(self.payload_moduli), dtype=np.int64)
        for j, g, row, prow in zip(
            self.pivot_cols, self.pivot_lead, self.pivot_rows, self.pivot_payloads
        ):
            q = int(x[j]) // g
            if q:
                x = np.mod(x - q * row, self.moduli)
                pay = self._pmod(pay + q * prow)
        return x, pay

    def canonical(self, x) -> np.ndarray:
        return self.reduce(x)[0]

    def contains(self, x) -> bool:
        return not np.any(self.reduce(x)[0])

    def solve(self, x) -> np.ndarray | None:
        """Payload of an element equal to x, or None if x is not in the subgroup."""
        r, pay = self.reduce(x)
        return None if np.any(r) else pay

    def generators(self) -> list[np.ndarray]:
        return [row.copy() for row in self.pivot_rows]

    def coefficient_ranges(self) -> list[int]:
        return [int(self.moduli[j]) // g for j, g in zip(self.pivot_cols, self.pivot_lead)]

    def elements(self) -> Iterator[np.ndarray]:
        """Every element exactly once (Howell bases give unique expansions)."""
        ranges = self.coefficient_ranges()
        rows = np.array(self.pivot_rows, dtype=np.int64).reshape(len(ranges), self.dimension)
        for coeffs in itertools.product(*(range(k) for k in ranges)):
            if rows.size:
                yield np.mod(np.asarray(coeffs, dtype=np.int64) @ rows, self.moduli)
            else:
                yield np.zeros(self.dimension, dtype=np.int64)

    def element_order(self, x) -> int:
        """Order of x modulo this subgroup."""
        x = np.asarray(x, dtype=np.int64)
        exp = lcm(*(int(m) for m in self.moduli)) if self.dimension else 1
        for d in _divisors(exp):
            if self.contains(d * x):
                return d
        return exp


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def subgroup(moduli, generators) -> Echelon:
    return Echelon(moduli, generators)


def homomorphism_graph(source_moduli, target_moduli, images) -> Echelon:
    """Echelon of {(f(e_k), e_k)}: images[k] is the image of the k-th unit vector."""
    src = _moduli(source_moduli)
    n = len(src)
    eye = np.eye(n, dtype=np.int64)
    imgs = np.asarray(images, dtype=np.int64).reshape(n, len(_moduli(target_moduli)))
    return Echelon(target_moduli, imgs, eye, src)


def kernel_subgroup(source_moduli, target_moduli, images) -> Echelon:
    graph = homomorphism_graph(source_moduli, target_moduli, images)
    return Echelon(source_moduli, graph.kernel)


@dataclass
class QuotientStructure:
    """Structure of Z/B for subgroups B <= Z of a coordinate group."""

    factors: list[int]
    representatives: list[np.ndarray]

    @property
    def order(self) -> int:
        return prod(self.factors)


def quotient_structure(moduli, numerator_gens, denominator: Echelon) -> QuotientStructure:
    """Invariant factors of <numerator_gens> / B and one generator per factor.

    ``denominator`` must be contained in the span of ``numerator_gens``.
    Generators are returned as lexicographically least coset representatives.
    """
    mod = _moduli(moduli)
    zs = []
    seen = set()
    for z in numerator_gens:
        zc = denominator.canonical(z)
        key = zc.tobytes()
        if np.any(zc) and key not in seen:
            seen.add(key)
            zs.append(zc)
    if not zs:
        return QuotientStructure([], [])
    orders = [denominator.element_order(z) for z in zs]
    s = len(zs)
    gens = list(zs) + list(denominator.pivot_rows)
    pays = [np.eye(s, dtype=np.int64)[i] for i in range(s)] + [
        np.zeros(s, dtype=np.int64) for _ in denominator.pivot_rows
    ]
    rel = Echelon(mod, np.array(gens), np.array(pays), orders)
    columns = [list(map(int, k)) for k in rel.kernel]
    columns += [[orders[i] if k == i else 0 for k in range(s)] for i in range(s)]
    relation = IntegerMatrix.from_rows([list(r) for r in zip(*columns)], len(columns))
    U, D, _ = smith_normal_form(relation)
    diag = D.diagonal() + [0] * (s - min(D.shape))
    factors, reps = [], []
    Z = np.array(zs, dtype=object)
    for i, d in enumerate(diag):
        if d == 0:
            raise ShapeError("quotient is infinite; numerator does not lie in a finite group")
        if d == 1:
            continue
        coeffs = np.array(U.column(i), dtype=object)
        vec = np.mod((coeffs @ Z).astype(object), mod.astype(object)).astype(np.int64)
        factors.append(int(d))
        reps.append(denominator.canonical(vec))
    return QuotientStructure(factors, reps)


@dataclass
class AffineSolution:
    """Solution set x0 + K of an affine system over a coordinate group."""

    particular: np.ndarray
    kernel: Echelon

    def count(self) -> int:
        return self.kernel.order()

    def solutions(self) -> Iterator[np.ndarray]:
        for k in self.kernel.elements():
            yield np.mod(self.particular + k, self.kernel.moduli)


def solve_affine(unknown_moduli, residual) -> AffineSolution | None:
    """Solve residual(x) = 0 for an affine map on a coordinate group.

    ``residual(x)`` must return ``(vector, target_moduli)``.  The linear part
    is recovered by evaluating on unit vectors, so ``residual`` has to be
    genuinely affine; callers build it from the defining formulas.
    Returns None when there is no solution.
    """
    src = _moduli(unknown_moduli)
    n = len(src)
    base, tmod = residual(np.zeros(n, dtype=np.int64))
    tmod = _moduli(tmod)
    images = np.zeros((n, len(tmod)), dtype=np.int64)
    for k in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[k] = 1
        images[k] = np.mod(residual(e)[0] - base, tmod)
    graph = homomorphism_graph(src, tmod, images)
    pay = graph.solve(np.mod(-base, tmod))
    if pay is None:
        return None
    return AffineSolution(np.mod(pay, src), Echelon(src, graph.kernel))
