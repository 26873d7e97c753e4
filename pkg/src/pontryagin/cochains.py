"""Dense inhomogeneous cochains and the bar differential.

A degree-n cochain on a finite group G with values in a module M is stored as
an integer array of shape ``(|G|,) * n + (rank M,)`` holding reduced residue
tuples.  Cochains on the additive group of a module A (the h, c, k, theta
data of a braided 2-group) use ``A.as_group()`` as their base group and
remember A in ``base`` so arguments may be given as residue tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import PreconditionError, ShapeError
from .groups import FiniteGroup
from .modules import FinAbModule, GAction, ModuleAutomorphism


@dataclass(frozen=True, eq=False)
class Cochain:
    degree: int
    group: FiniteGroup
    module: FinAbModule
    values: np.ndarray
    normalized: bool = True
    base: FinAbModule | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = self.degree
        if n < 0:
            raise ShapeError(f"negative cochain degree {n}")
        shape = (self.group.order,) * n + (self.module.rank,)
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.shape != shape:
            raise ShapeError(f"degree-{n} cochain needs value shape {shape}, got {vals.shape}")
        vals = self.module.reduce(vals).astype(np.int64, copy=False)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.base is not None and self.base.order != self.group.order:
            raise ShapeError("base module does not match the base group")
        if self.normalized and not self.is_normalized():
            bad = self.normalization_witness()
            raise PreconditionError(f"cochain flagged normalized is nonzero at {bad}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def _trusted(
        cls,
        degree: int,
        group: FiniteGroup,
        module: FinAbModule,
        values: np.ndarray,
        normalized: bool = True,
        base: FinAbModule | None = None,
    ) -> "Cochain":
        """Skip shape/reduction/normalization checks; the caller has already
        verified ``values`` (reduced, right shape, normalized if flagged)."""
        self = object.__new__(cls)
        vals = np.array(values, dtype=np.int64)
        vals.setflags(write=False)
        for name, value in (
            ("degree", degree), ("group", group), ("module", module), ("values", vals),
            ("normalized", normalized), ("base", base), ("_cache", {}),
        ):
            object.__setattr__(self, name, value)
        return self

    @classmethod
    def zero(
        cls,
        group: FiniteGroup,
        module: FinAbModule,
        degree: int,
        normalized: bool = True,
        base: FinAbModule | None = None,
    ) -> "Cochain":
        shape = (group.order,) * degree + (module.rank,)
        return cls(degree, group, module, np.zeros(shape, dtype=np.int64), normalized, base)

    @classmethod
    def from_function(
        cls,
        group: FiniteGroup,
        module: FinAbModule,
        degree: int,
        fn: Callable[..., object],
        normalized: bool = True,
        base: FinAbModule | None = None,
    ) -> "Cochain":
        """Tabulate ``fn`` over all index tuples; values are module elements."""
        shape = (group.order,) * degree + (module.rank,)
        vals = np.zeros(shape, dtype=np.int64)
        for t in group.tuples(degree):
            args = tuple(base.element(x) for x in t) if base is not None else t
            vals[t] = module.coerce(fn(*args))
        return cls(degree, group, module, vals, normalized, base)

    @classmethod
    def from_dict(
        cls,
        group: FiniteGroup,
        module: FinAbModule,
        degree: int,
        entries: Mapping[tuple, object],
        normalized: bool = True,
        base: FinAbModule | None = None,
    ) -> "Cochain":
        """Sparse construction; omitted tuples are zero."""
        shape = (group.order,) * degree + (module.rank,)
        vals = np.zeros(shape, dtype=np.int64)
        for key, value in entries.items():
            key = tuple(key) if not isinstance(key, int) else (key,)
            if len(key) != degree:
                raise ShapeError(f"tuple {key} has length {len(key)}, degree is {degree}")
            idx = tuple(_arg_index(group, base, x) for x in key)
            vals[idx] = module.coerce(value)
        return cls(degree, group, module, vals, normalized, base)

    @classmethod
    def on_module(
        cls, A: FinAbModule, H: FinAbModule, degree: int, entries: Mapping | None = None
    ) -> "Cochain":
        """Normalized cochain A^degree -> H from sparse residue-tuple entries."""
        return cls.from_dict(A.as_group(), H, degree, entries or {}, True, A)

    def with_values(self, values: np.ndarray, normalized: bool | None = None) -> "Cochain":
        norm = self.normalized if normalized is None else normalized
        return Cochain(self.degree, self.group, self.module, values, norm, self.base)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, *args) -> tuple[int, ...]:
        if len(args) != self.degree:
            raise ShapeError(f"cochain of degree {self.degree} called with {len(args)} arguments")
        idx = tuple(_arg_index(self.group, self.base, a) for a in args)
        return tuple(int(x) for x in self.values[idx])

    def index_values(self) -> np.ndarray:
        """Table of element indices of the values (shape (|G|,)*degree)."""
        if "idx" not in self._cache:
            arr = self.module.index_array(self.values)
            arr.setflags(write=False)
            self._cache["idx"] = arr
        return self._cache["idx"]

    def is_normalized(self) -> bool:
        return self.normalization_witness() is None

    def normalization_witness(self) -> tuple | None:
        if self.degree == 0 or not self.module.rank:
            return None
        nz = np.any(self.values != 0, axis=-1)
        mask = np.zeros(nz.shape, dtype=bool)
        for axis in range(self.degree):
            sl = [slice(None)] * self.degree
            sl[axis] = 0
            mask[tuple(sl)] = True
        bad = np.argwhere(nz & mask)
        return tuple(int(x) for x in bad[0]) if len(bad) else None

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def nonzero_items(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """(index tuple, value) pairs in lexicographic order."""
        if not self.module.rank:
            return []
        nz = np.argwhere(np.any(self.values != 0, axis=-1))
        return [
            (tuple(int(x) for x in t), tuple(int(v) for v in self.values[tuple(t)])) for t in nz
        ]

    def first_nonzero(self) -> tuple[int, ...] | None:
        items = self.nonzero_items()
        return items[0][0] if items else None

    # -- arithmetic ---------------------------------------------------------

    def _compatible(self, other: "Cochain") -> None:
        if not isinstance(other, Cochain):
            raise ShapeError(f"expected a Cochain, got {type(other).__name__}")
        if self.degree != other.degree:
            raise ShapeError(f"degree mismatch: {self.degree} vs {other.degree}")
        if not self.group.same_as(other.group):
            raise ShapeError("cochains live on different groups")
        if self.module != other.module:
            raise ShapeError(f"coefficient mismatch: {self.module} vs {other.module}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return self.with_values(self.values + other.values, self.normalized and other.normalized)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return self.with_values(self.values - other.values, self.normalized and other.normalized)

    def __neg__(self) -> "Cochain":
        return self.with_values(-self.values)

    def __mul__(self, n: int) -> "Cochain":
        return self.with_values(int(n) * self.values)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        try:
            self._compatible(other)
        except ShapeError:
            return False
        return bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.degree, self.module, self.values.tobytes()))

    def __repr__(self) -> str:
        items = self.nonzero_items()
        shown = ", ".join(f"{t}: {v}" for t, v in items[:4])
        more = f", ... ({len(items)} nonzero)" if len(items) > 4 else ""
        return f"Cochain(deg={self.degree}, {self.module!r}, {{{shown}{more}}})"

    # -- reshaping the arguments or values ----------------------------------

    def precompose(self, perm: np.ndarray) -> "Cochain":
        """f(p x1, ..., p xn) for a permutation p of the base group elements."""
        perm = np.asarray(perm, dtype=np.int64)
        grids = np.ix_(*([np.arange(self.group.order)] * self.degree))
        vals = self.values[tuple(perm[g] for g in grids)]
        return self.with_values(vals)

    def postcompose(self, aut: ModuleAutomorphism) -> "Cochain":
        """aut o f."""
        if aut.module != self.module:
            raise ShapeError("automorphism acts on a different module")
        return self.with_values(aut.apply(self.values))

    def swap(self) -> "Cochain":
        """f o tau for a degree-2 cochain: (a, b) -> f(b, a)."""
        if self.degree != 2:
            raise ShapeError("swap is defined for degree-2 cochains")
        return self.with_values(np.swapaxes(self.values, 0, 1))


def _arg_index(group: FiniteGroup, base: FinAbModule | None, a) -> int:
    if isinstance(a, (int, np.integer)):
        a = int(a)
        if not 0 <= a < group.order:
            raise ShapeError(f"argument {a} out of range for group of order {group.order}")
        return a
    if base is None:
        raise ShapeError(f"argument {a!r} is not a group element index")
    return base.index(a)


def trivial_action_for(f: Cochain) -> GAction:
    key = ("trivial", f.module.factors)
    cache = f.group._cache
    if key not in cache:
        cache[key] = GAction.trivial(f.group, f.module)
    return cache[key]


def _check_action(f: Cochain, action: GAction | None) -> GAction | None:
    if action is None:
        return None
    if not action.group.same_as(f.group):
        raise ShapeError("action is defined on a different group than the cochain")
    if action.module != f.module:
        raise ShapeError(f"action is on {action.module!r}, cochain values lie in {f.module!r}")
    return None if action.is_trivial() else action


def _faces(group: FiniteGroup, n: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """Flat-index form of the bar faces, cached on the group.

    For every (n+1)-tuple t (in row-major order) returns its first entry and,
    for each face i = 0..n+1, the flat index of the n-tuple that face picks.
    """
    key = ("bar faces", n)
    if key not in group._cache:
        N = group.order
        t = np.indices((N,) * (n + 1)).reshape(n + 1, -1)
        weights = N ** np.arange(n - 1, -1, -1) if n else np.zeros(0, dtype=np.int64)

        def flat(cols) -> np.ndarray:
            return (np.stack(cols).T @ weights).astype(np.intp) if n else np.zeros(t.shape[1], np.intp)

        faces = [flat(list(t[1:]))]
        for i in range(1, n + 1):
            merged = group.mult[t[i - 1], t[i]]
            faces.append(flat(list(t[: i - 1]) + [merged] + list(t[i + 1 :])))
        faces.append(flat(list(t[:n])))
        group._cache[key] = (t[0].astype(np.intp), faces)
    return group._cache[key]


def differential_array(
    values: np.ndarray, degree: int, group: FiniteGroup, action: GAction | None = None
) -> np.ndarray:
    """Bar differential on raw value arrays of shape batch + (|G|,)*degree + (r,).

    Leading batch axes are carried along; the result is not reduced.
    """
    n = degree
    N = group.order
    F = np.asarray(values, dtype=np.int64)
    batch = F.shape[: F.ndim - n - 1]
    r = F.shape[-1]
    size = int(np.prod(batch, dtype=np.int64))
    # tuple axis first so every face gather copies contiguous rows
    flat = np.ascontiguousarray(np.moveaxis(F.reshape(size, N**n, r), 1, 0))
    first, faces = _faces(group, n)
    shifted = flat[faces[0]]
    total = action.apply(first[:, None], shifted) if action is not None else shifted.copy()
    for i, face in enumerate(faces[1:], start=1):
        if i % 2:
            total -= flat[face]
        else:
            total += flat[face]
    return np.moveaxis(total, 0, 1).reshape(batch + (N,) * (n + 1) + (r,))


def differential(f: Cochain, action: GAction | None = None) -> Cochain:
    """Inhomogeneous bar differential, twisted by ``action`` (trivial if None).

    (df)(g1..g_{n+1}) = g1.f(g2..g_{n+1})
                        + sum_i (-1)^i f(.., g_i g_{i+1}, ..)
                        + (-1)^{n+1} f(g1..g_n)
    """
    act = _check_action(f, action)
    total = differential_array(f.values, f.degree, f.group, act)
    return Cochain(f.degree + 1, f.group, f.module, total, f.normalized, f.base)


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_cocycle(f: Cochain, action: GAction | None = None) -> CocycleCheck:
    df = differential(f, action)
    witness = df.first_nonzero()
    return CocycleCheck(witness is None, witness)


def shift_by_coboundary(f: Cochain, lam: Cochain, action: GAction | None = None) -> Cochain:
    """f + d(lam)."""
    if lam.degree != f.degree - 1:
        raise ShapeError(f"need a degree-{f.degree - 1} cochain to shift a degree-{f.degree} one")
    return f + differential(lam, action)
