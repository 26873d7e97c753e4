"""Skeletal braided 2-groups: abelian 3-cocycles (A, H, h, c).

Sign convention for the hexagon identities, for all a, b, x in A:

    c(a+b, x) = c(a,x) + c(b,x) + h(a,b,x) - h(a,x,b) + h(x,a,b)
    c(a, b+x) = c(a,b) + c(a,x) - h(a,b,x) + h(b,a,x) - h(b,x,a)

Every consumer in this package (validation, automorphism data, the
obstruction cocycle) uses this one convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .cochains import Cochain, differential
from .errors import ConstructionError, InternalError, PreconditionError, ScaleError, ShapeError
from .linalg import solve_affine
from .modules import FinAbModule, cyclic_module
from .report import ValidationReport

BRUTE_FORCE_LIMIT = 1_000_000
# "auto" only enumerates small candidate sets; the affine solver is faster beyond.
AUTO_BRUTE_MAX = 4096


@dataclass(frozen=True, eq=False)
class AbelianThreeCocycle:
    A: FinAbModule
    H: FinAbModule
    h: Cochain
    c: Cochain
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for name, f, deg in (("h", self.h, 3), ("c", self.c, 2)):
            if f.degree != deg:
                raise ShapeError(f"{name} must have degree {deg}, got {f.degree}")
            if f.module != self.H:
                raise ShapeError(f"{name} takes values in {f.module!r}, expected {self.H!r}")
            if f.group.order != self.A.order or not f.group.same_as(self.A.as_group()):
                raise ShapeError(f"{name} is not a cochain on the additive group of {self.A!r}")

    @classmethod
    def trivial(cls, A: FinAbModule, H: FinAbModule) -> "AbelianThreeCocycle":
        return cls(A, H, Cochain.on_module(A, H, 3), Cochain.on_module(A, H, 2))

    @classmethod
    def from_tables(cls, A: FinAbModule, H: FinAbModule, h: dict, c: dict):
        return cls(A, H, Cochain.on_module(A, H, 3, h), Cochain.on_module(A, H, 2, c))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AbelianThreeCocycle)
            and self.A == other.A
            and self.H == other.H
            and self.h == other.h
            and self.c == other.c
        )

    def __hash__(self) -> int:
        return hash((self.A, self.H, hash(self.h), hash(self.c)))

    def __repr__(self) -> str:
        return f"AbelianThreeCocycle(A={self.A!r}, H={self.H!r}, h={self.h!r}, c={self.c!r})"

    def is_valid(self) -> bool:
        if "valid" not in self._cache:
            self._cache["valid"] = validate_ab3(self).ok
        return self._cache["valid"]


def hexagon_defects(A: FinAbModule, H: FinAbModule, h: np.ndarray, c: np.ndarray):
    """Left minus right side of both hexagons, as (|A|,|A|,|A|, rank H) arrays.

    ``h`` and ``c`` are value tables indexed by element indices of A.
    """
    add = A.as_group().mult
    n = A.order
    a, b, x = np.ix_(np.arange(n), np.arange(n), np.arange(n))
    first = c[add[a, b], x] - (c[a, x] + c[b, x] + h[a, b, x] - h[a, x, b] + h[x, a, b])
    second = c[a, add[b, x]] - (c[a, b] + c[a, x] - h[a, b, x] + h[b, a, x] - h[b, x, a])
    return H.reduce(first), H.reduce(second)


def _record(report: ValidationReport, check: str, defect: np.ndarray, limit: int = 10) -> None:
    report.ran(check)
    bad = np.argwhere(np.any(defect != 0, axis=-1))
    for t in bad[:limit]:
        report.add(check, tuple(int(v) for v in t))


def validate_ab3(B: AbelianThreeCocycle) -> ValidationReport:
    report = ValidationReport(subject="abelian 3-cocycle")
    for name, f in (("h", B.h), ("c", B.c)):
        report.ran(f"normalized {name}")
        w = f.normalization_witness()
        if w is not None:
            report.add(f"normalized {name}", w, f"{name}{w} = {f(*w)}")
    _record(report, "dh = 0", differential(B.h).values)
    first, second = hexagon_defects(B.A, B.H, B.h.values, B.c.values)
    _record(report, "hexagon c(a+b,x)", first)
    _record(report, "hexagon c(a,b+x)", second)
    return report


def _require_valid(B: AbelianThreeCocycle) -> None:
    if not B.is_valid():
        raise PreconditionError(validate_ab3(B).summary())


@dataclass(frozen=True)
class QuadraticMap:
    """q: A -> H given by its value table on element indices."""

    A: FinAbModule
    H: FinAbModule
    table: np.ndarray

    def __call__(self, a) -> tuple[int, ...]:
        return tuple(int(v) for v in self.table[self.A.index(a)])

    def polar(self) -> np.ndarray:
        """b(a, a') = q(a+a') - q(a) - q(a')."""
        add = self.A.as_group().mult
        q = self.table
        return self.H.reduce(q[add] - q[:, None, :] - q[None, :, :])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuadraticMap)
            and self.A == other.A
            and self.H == other.H
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self) -> int:
        return hash(self.table.tobytes())


def quadratic_trace(B: AbelianThreeCocycle) -> QuadraticMap:
    """q(a) = c(a, a), re-verified to be a quadratic map."""
    _require_valid(B)
    A, H = B.A, B.H
    n = A.order
    idx = np.arange(n)
    q = B.c.values[idx, idx]
    c = B.c.values
    sym = H.reduce(c + np.swapaxes(c, 0, 1))
    add = A.as_group().mult
    # b(a, a') = c(a,a') + c(a',a) is bi-additive in the first slot (symmetry gives the second)
    a, b, x = np.ix_(idx, idx, idx)
    if np.any(H.reduce(sym[add[a, b], x] - sym[a, x] - sym[b, x])):
        raise PreconditionError("c(a,b) + c(b,a) is not bi-additive")
    qmap = QuadraticMap(A, H, q.copy())
    if not np.array_equal(qmap.polar(), sym):
        raise PreconditionError("trace does not polarize to c(a,b) + c(b,a)")
    els = A.element_array()
    for k in range(A.exponent + 1):
        multiples = A.index_array(A.reduce(k * els))
        if np.any(H.reduce(q[multiples] - k * k * q)):
            raise PreconditionError(f"q({k}a) != {k}^2 q(a)")
    return qmap


def standard_cyclic(n: int, H: FinAbModule, t) -> AbelianThreeCocycle:
    """The abelian 3-cocycle on Z/n with trace q(a) = a^2 t.

    c(a, b) = a b t and h(a, b, x) = n a floor((b + x)/n) t, with elements of
    Z/n represented by 0..n-1.  Exists exactly when n^2 t = 0 and 2n t = 0.
    """
    if n < 1:
        raise ConstructionError(f"cyclic order must be positive, got {n}")
    t = H.coerce(t)
    if any(H.scale(n * n, t)) or any(H.scale(2 * n, t)):
        raise ConstructionError(
            f"no abelian 3-cocycle on Z/{n} with trace q(1) = {t}: need {n}^2 t = 0 and 2*{n} t = 0"
        )
    if n == 1:
        return AbelianThreeCocycle.trivial(FinAbModule(()), H)
    A = cyclic_module(n)
    tv = np.array(t, dtype=np.int64)
    r = np.arange(n)
    a, b, x = np.ix_(r, r, r)
    hcoef = n * a * ((b + x) // n)
    hvals = H.reduce(hcoef[..., None] * tv)
    ccoef = r[:, None] * r[None, :]
    cvals = H.reduce(ccoef[..., None] * tv)
    G = A.as_group()
    return AbelianThreeCocycle(
        A, H, Cochain(3, G, H, hvals, True, A), Cochain(2, G, H, cvals, True, A)
    )


def _normalized_coords(A: FinAbModule, H: FinAbModule, degree: int):
    count = (A.order - 1) ** degree
    return np.tile(H.moduli, count)


def _cochain_from_vector(A: FinAbModule, H: FinAbModule, degree: int, vec) -> Cochain:
    shape = (A.order,) * degree + (H.rank,)
    vals = np.zeros(shape, dtype=np.int64)
    if degree:
        vals[(slice(1, None),) * degree] = np.asarray(vec).reshape(
            (A.order - 1,) * degree + (H.rank,)
        )
    else:
        vals[...] = np.asarray(vec).reshape(H.rank)
    return Cochain(degree, A.as_group(), H, vals, True, A)


def _vector(f: Cochain) -> np.ndarray:
    return f.values[(slice(1, None),) * f.degree].reshape(-1)


def ab3_equivalent(
    B: AbelianThreeCocycle, B2: AbelianThreeCocycle, method: str = "auto"
) -> Cochain | None:
    """A normalized k with (h - h2, c - c2) = (dk, k o tau - k), or None.

    The c-component is k o tau - k, not k - k o tau: with the hexagon
    convention above only this sign maps valid cocycles to valid cocycles,
    and it is the same shape as the braiding condition on autoequivalences
    (psi c - c phi^2 = k tau - k).  The two signs agree whenever
    k - k o tau has order 2, e.g. for A = Z/2.

    ``method="brute"`` enumerates every normalized 2-cochain (guarded by
    BRUTE_FORCE_LIMIT); ``method="linear"`` solves the affine system exactly
    over the coefficient group.  ``"auto"`` enumerates when there are at
    most AUTO_BRUTE_MAX candidates and solves otherwise.
    """
    if B.A != B2.A or B.H != B2.H:
        raise ShapeError("abelian 3-cocycles on different (A, H) cannot be compared")
    A, H = B.A, B.H
    dh = (B.h - B2.h).values
    dc = (B.c - B2.c).values

    def defect(k: Cochain) -> tuple[np.ndarray, np.ndarray]:
        e1 = H.reduce(differential(k).values - dh)
        e2 = H.reduce(np.swapaxes(k.values, 0, 1) - k.values - dc)
        return e1, e2

    size = (A.order - 1) ** 2
    total = H.order**size
    if method == "auto":
        method = "brute" if total <= AUTO_BRUTE_MAX else "linear"
    if method == "brute":
        if total > BRUTE_FORCE_LIMIT:
            raise ScaleError(f"{total} candidate 2-cochains exceed the brute-force limit", total)
        elements = H.elements()
        for choice in itertools.product(elements, repeat=size):
            vec = np.array(choice, dtype=np.int64).reshape(-1)
            k = _cochain_from_vector(A, H, 2, vec)
            e1, e2 = defect(k)
            if not e1.any() and not e2.any():
                return k
        return None
    if method != "linear":
        raise ValueError(f"unknown method {method!r}")

    mod = _normalized_coords(A, H, 2)
    out_mod = np.concatenate(
        [np.tile(H.moduli, A.order**3), np.tile(H.moduli, A.order**2)]
    )

    def residual(vec):
        e1, e2 = defect(_cochain_from_vector(A, H, 2, vec))
        return np.concatenate([e1.reshape(-1), e2.reshape(-1)]), out_mod

    sol = solve_affine(mod, residual)
    if sol is None:
        return None
    k = _cochain_from_vector(A, H, 2, sol.particular)
    e1, e2 = defect(k)
    if e1.any() or e2.any():
        raise InternalError("linear solve returned a k that does not satisfy the equivalence")
    return k


def symmetric_bilinear(A: FinAbModule, H: FinAbModule, form) -> AbelianThreeCocycle:
    """h = 0 and c a bi-additive form given on generators: c(e_i, e_j) = form[i][j]."""
    r = A.rank
    els = A.element_array()
    vals = np.zeros((A.order, A.order, H.rank), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            v = np.array(H.coerce(form[i][j]), dtype=np.int64)
            vals += (els[:, i][:, None] * els[:, j][None, :])[..., None] * v
    c = Cochain(2, A.as_group(), H, H.reduce(vals), True, A)
    B = AbelianThreeCocycle(A, H, Cochain.on_module(A, H, 3), c)
    if not B.is_valid():
        raise ConstructionError("form is not well defined on A (it is not bi-additive)")
    return B


def count_normalized(A: FinAbModule, H: FinAbModule, degree: int) -> int:
    return prod([H.order] * ((A.order - 1) ** degree))
