"""Finite abelian groups Z/m1 + ... + Z/mr and G-actions on them.

Elements are residue tuples.  The lexicographic order on residue tuples
(first factor most significant) fixes the element numbering used by every
cochain table indexed by module elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import RangeError, ShapeError
from .groups import FiniteGroup, _build
from .report import ValidationReport


@dataclass(frozen=True, eq=False)
class FinAbModule:
    factors: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        facs = tuple(int(m) for m in self.factors)
        if any(m < 2 for m in facs):
            raise ShapeError(f"cyclic factors must be >= 2, got {list(facs)}")
        object.__setattr__(self, "factors", facs)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinAbModule) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        if not self.factors:
            return "FinAbModule(0)"
        return "FinAbModule(" + " + ".join(f"Z/{m}" for m in self.factors) + ")"

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*self.factors) if self.factors else 1

    @property
    def moduli(self) -> np.ndarray:
        if "moduli" not in self._cache:
            arr = np.array(self.factors, dtype=np.int64).reshape(len(self.factors))
            arr.setflags(write=False)
            self._cache["moduli"] = arr
        return self._cache["moduli"]

    @property
    def radix(self) -> np.ndarray:
        """Weights turning a residue tuple into its element index."""
        if "radix" not in self._cache:
            w = [1] * self.rank
            for i in range(self.rank - 2, -1, -1):
                w[i] = w[i + 1] * self.factors[i + 1]
            arr = np.array(w, dtype=np.int64).reshape(self.rank)
            arr.setflags(write=False)
            self._cache["radix"] = arr
        return self._cache["radix"]

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(e) for e in itertools.product(*(range(m) for m in self.factors))]

    def element_array(self) -> np.ndarray:
        """All elements as an (order, rank) array, row i being element i."""
        if "elements" not in self._cache:
            arr = np.array(self.elements(), dtype=np.int64).reshape(self.order, self.rank)
            arr.setflags(write=False)
            self._cache["elements"] = arr
        return self._cache["elements"]

    def coerce(self, a) -> tuple[int, ...]:
        """Accept a residue tuple (or a bare integer when rank is 1)."""
        if isinstance(a, (int, np.integer)) and self.rank == 1:
            a = (a,)
        try:
            vals = tuple(int(x) for x in a)
        except TypeError:
            raise ShapeError(f"cannot read {a!r} as an element of {self}") from None
        if len(vals) != self.rank:
            raise ShapeError(f"element {a!r} has {len(vals)} coordinates, module has {self.rank}")
        return tuple(v % m for v, m in zip(vals, self.factors))

    def index(self, a) -> int:
        a = self.coerce(a)
        return int(sum(x * w for x, w in zip(a, self.radix.tolist())))

    def element(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.order:
            raise RangeError(f"element index {i} out of range for {self}")
        return tuple(int(x) for x in self.element_array()[i])

    def index_array(self, values: np.ndarray) -> np.ndarray:
        """Element indices of an array of (already reduced) residue tuples."""
        return np.asarray(values, dtype=np.int64) @ self.radix if self.rank else (
            np.zeros(np.shape(values)[:-1], dtype=np.int64)
        )

    def reduce(self, values: np.ndarray) -> np.ndarray:
        if not self.rank:
            return np.asarray(values, dtype=np.int64)
        if "mask" not in self._cache:
            two_power = all(m & (m - 1) == 0 for m in self.factors)
            self._cache["mask"] = self.moduli - 1 if two_power else None
        mask = self._cache["mask"]
        if mask is not None:
            # two's complement: x & (2^j - 1) is the nonnegative residue, also for x < 0
            return np.bitwise_and(np.asarray(values, dtype=np.int64), mask)
        return np.mod(values, self.moduli)

    def add(self, a, b) -> tuple[int, ...]:
        a, b = self.coerce(a), self.coerce(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.factors))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % m for x, m in zip(self.coerce(a), self.factors))

    def scale(self, n: int, a) -> tuple[int, ...]:
        return tuple((n * x) % m for x, m in zip(self.coerce(a), self.factors))

    def element_order(self, a) -> int:
        from math import gcd, lcm

        a = self.coerce(a)
        return lcm(*(m // gcd(m, x) for x, m in zip(a, self.factors))) if a else 1

    def as_group(self) -> FiniteGroup:
        """The additive group, numbered by the lexicographic element order."""
        if "group" not in self._cache:
            els = self.element_array()
            sums = self.reduce(els[:, None, :] + els[None, :, :])
            table = self.index_array(sums)
            self._cache["group"] = _build(table, name=repr(self))
        return self._cache["group"]


def cyclic_module(m: int) -> FinAbModule:
    return FinAbModule((m,))


def trivial_module() -> FinAbModule:
    return FinAbModule(())


@dataclass(frozen=True, eq=False)
class ModuleAutomorphism:
    """An endomorphism of a FinAbModule given by an integer matrix.

    Acts on residue column vectors; row i is read modulo the i-th factor.
    Construction does not check invertibility; use :meth:`is_invertible`.
    """

    module: FinAbModule
    matrix: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        r = self.module.rank
        try:
            mat = np.array(self.matrix, dtype=np.int64).reshape(r, r)
        except ValueError:
            raise ShapeError(f"automorphism of {self.module} needs a {r}x{r} matrix") from None
        if r:
            mat = np.mod(mat, self.module.moduli[:, None])
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls, module: FinAbModule) -> "ModuleAutomorphism":
        return cls(module, np.eye(module.rank, dtype=np.int64))

    @classmethod
    def scalar(cls, module: FinAbModule, n: int) -> "ModuleAutomorphism":
        return cls(module, n * np.eye(module.rank, dtype=np.int64))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModuleAutomorphism)
            and self.module == other.module
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    def __hash__(self) -> int:
        return hash((self.module, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"ModuleAutomorphism({self.matrix.tolist()})"

    def __call__(self, a) -> tuple[int, ...]:
        a = np.array(self.module.coerce(a), dtype=np.int64)
        return tuple(int(x) for x in self.apply(a))

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Apply to an array whose last axis holds residue tuples."""
        if not self.module.rank:
            return np.asarray(values, dtype=np.int64)
        return self.module.reduce(np.asarray(values, dtype=np.int64) @ self.matrix.T)

    def compose(self, other: "ModuleAutomorphism") -> "ModuleAutomorphism":
        """self after other."""
        if self.module != other.module:
            raise ShapeError("cannot compose automorphisms of different modules")
        return ModuleAutomorphism(self.module, self.matrix @ other.matrix)

    def __matmul__(self, other: "ModuleAutomorphism") -> "ModuleAutomorphism":
        return self.compose(other)

    def is_well_defined(self) -> bool:
        return not self.ill_defined_entries()

    def ill_defined_entries(self) -> list[tuple[int, int]]:
        facs = self.module.factors
        return [
            (i, j)
            for i in range(self.module.rank)
            for j in range(self.module.rank)
            if (int(self.matrix[i, j]) * facs[j]) % facs[i]
        ]

    def permutation(self) -> np.ndarray:
        """Image index of every element index."""
        if "perm" not in self._cache:
            els = self.module.element_array()
            perm = self.module.index_array(self.apply(els))
            perm.setflags(write=False)
            self._cache["perm"] = perm
        return self._cache["perm"]

    def is_invertible(self) -> bool:
        return self.is_well_defined() and len(np.unique(self.permutation())) == self.module.order

    def inverse(self) -> "ModuleAutomorphism":
        if not self.is_invertible():
            raise ShapeError(f"{self!r} is not invertible on {self.module}")
        perm = self.permutation()
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        r = self.module.rank
        cols = []
        for j in range(r):
            unit = tuple(1 if i == j else 0 for i in range(r))
            cols.append(self.module.element(int(inv[self.module.index(unit)])))
        return ModuleAutomorphism(self.module, np.array(cols, dtype=np.int64).T.reshape(r, r))

    def is_identity(self) -> bool:
        return self == ModuleAutomorphism.identity(self.module)


def automorphisms(module: FinAbModule, limit: int = 100_000) -> list[ModuleAutomorphism]:
    """Every automorphism of a small module, in lexicographic matrix order."""
    facs = module.factors
    r = module.rank
    ranges = []
    for i in range(r):
        for j in range(r):
            ranges.append([x for x in range(facs[i]) if (x * facs[j]) % facs[i] == 0])
    total = prod(len(x) for x in ranges)
    if total > limit:
        from .errors import ScaleError

        raise ScaleError(f"{total} candidate matrices for Aut({module})", estimate=total)
    out = []
    for entries in itertools.product(*ranges):
        aut = ModuleAutomorphism(module, np.array(entries, dtype=np.int64).reshape(r, r))
        if aut.is_invertible():
            out.append(aut)
    return out


@dataclass(frozen=True, eq=False)
class GAction:
    group: FiniteGroup
    module: FinAbModule
    act_table: tuple[ModuleAutomorphism, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        table = tuple(self.act_table)
        if len(table) != self.group.order:
            raise ShapeError(
                f"action table has {len(table)} entries, group has order {self.group.order}"
            )
        for aut in table:
            if aut.module != self.module:
                raise ShapeError("action table entry acts on a different module")
        object.__setattr__(self, "act_table", table)

    @classmethod
    def trivial(cls, group: FiniteGroup, module: FinAbModule) -> "GAction":
        ident = ModuleAutomorphism.identity(module)
        return cls(group, module, (ident,) * group.order)

    @classmethod
    def from_matrices(
        cls, group: FiniteGroup, module: FinAbModule, matrices: Mapping[int, Sequence]
    ) -> "GAction":
        """Elements missing from ``matrices`` act by the identity."""
        table = []
        for g in group.elements():
            if g in matrices:
                table.append(ModuleAutomorphism(module, matrices[g]))
            else:
                table.append(ModuleAutomorphism.identity(module))
        extra = set(matrices) - set(group.elements())
        if extra:
            raise RangeError(f"action given for non-elements {sorted(extra)}")
        return cls(group, module, tuple(table))

    @classmethod
    def from_homomorphism(
        cls, group: FiniteGroup, module: FinAbModule, image: Iterable[ModuleAutomorphism]
    ) -> "GAction":
        return cls(group, module, tuple(image))

    def __getitem__(self, g: int) -> ModuleAutomorphism:
        return self.act_table[g]

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, GAction)
            and self.group.same_as(other.group)
            and self.module == other.module
            and bool(np.array_equal(self.matrices(), other.matrices()))
        )

    def __hash__(self) -> int:
        return hash((self.group.order, self.module))

    def __repr__(self) -> str:
        return f"GAction({self.group!r} on {self.module!r})"

    def is_trivial(self) -> bool:
        return all(a.is_identity() for a in self.act_table)

    def act(self, g: int, a) -> tuple[int, ...]:
        if not 0 <= g < self.group.order:
            raise RangeError(f"group element {g} out of range")
        return self.act_table[g](a)

    def matrices(self) -> np.ndarray:
        """(order, r, r) stack of action matrices."""
        if "mats" not in self._cache:
            r = self.module.rank
            arr = np.array([a.matrix for a in self.act_table], dtype=np.int64)
            arr = arr.reshape(self.group.order, r, r)
            arr.setflags(write=False)
            self._cache["mats"] = arr
        return self._cache["mats"]

    def perm_table(self) -> np.ndarray:
        """(order, |M|) table: perm_table[g, i] is the index of g acting on element i."""
        if "perms" not in self._cache:
            arr = np.array([a.permutation() for a in self.act_table], dtype=np.int64)
            arr = arr.reshape(self.group.order, self.module.order)
            arr.setflags(write=False)
            self._cache["perms"] = arr
        return self._cache["perms"]

    def apply(self, g: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Vectorized action: g (any shape) acting on values (g.shape + (r,))."""
        if not self.module.rank:
            return np.asarray(values, dtype=np.int64)
        mats = self.matrices()[np.asarray(g)]
        out = np.einsum("...ij,...j->...i", mats, np.asarray(values, dtype=np.int64))
        return self.module.reduce(out)


def act(action: GAction, g: int, a) -> tuple[int, ...]:
    return action.act(g, a)


def validate_action(action: GAction) -> ValidationReport:
    report = ValidationReport(subject=f"action of {action.group!r} on {action.module!r}")
    G = action.group
    for check in ("well-defined", "invertible", "identity", "homomorphism"):
        report.ran(check)
    healthy = []
    for g in G.elements():
        aut = action[g]
        bad = aut.ill_defined_entries()
        if bad:
            report.add("well-defined", (g,), f"matrix entries {bad} do not respect element orders")
            healthy.append(False)
            continue
        if not aut.is_invertible():
            report.add("invertible", (g,), f"{aut!r} is not a bijection")
        healthy.append(True)
    if not action[0].is_identity():
        report.add("identity", (0,), "identity element does not act trivially")
    if all(healthy):
        perms = action.perm_table()
        for g1 in G.elements():
            for g2 in G.elements():
                g12 = int(G.mult[g1, g2])
                if not np.array_equal(perms[g12], perms[g1][perms[g2]]):
                    report.add(
                        "homomorphism", (g1, g2), f"act({g12}) != act({g1}) o act({g2})"
                    )
    return report


def enumerate_actions(group: FiniteGroup, module: FinAbModule, limit: int = 1_000_000) -> list[GAction]:
    """Every action of ``group`` on ``module`` by automorphisms, deterministic order."""
    auts = automorphisms(module)
    N = group.order
    total = len(auts) ** max(N - 1, 0)
    if total > limit:
        from .errors import ScaleError

        raise ScaleError(f"{total} candidate action tables", estimate=total)
    perms = [a.permutation() for a in auts]
    ident = next(i for i, a in enumerate(auts) if a.is_identity())
    out = []
    for choice in itertools.product(range(len(auts)), repeat=N - 1):
        idx = (ident,) + choice
        ok = all(
            np.array_equal(perms[idx[int(group.mult[g1, g2])]], perms[idx[g1]][perms[idx[g2]]])
            for g1 in range(1, N)
            for g2 in range(1, N)
        )
        if ok:
            out.append(GAction(group, module, tuple(auts[i] for i in idx)))
    return out
