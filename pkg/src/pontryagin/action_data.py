"""Braided autoequivalences of a skeletal braided 2-group and G-actions by them.

An object of the autoequivalence 2-group is a triple (phi, psi, k) with phi
in Aut(A), psi in Aut(H) and k a normalized 2-cochain A x A -> H such that

    dk = psi o h - h o phi^3                       (associator)
    psi o c + k = k o tau + c o phi^2              (braiding)

where h o phi^3 means h(phi a, phi b, phi x) and tau swaps the arguments.
Composition is (phi, psi, k) o (phi', psi', k') =
(phi phi', psi psi', k(phi' a, phi' b) + psi k'(a, b)).

A G-action by such objects, lifting fixed actions phi, psi of G on A and H,
is a family k_g plus 1-cochains theta_{g1,g2} with

    d theta_{g1,g2} = k_{g1 g2} - k_{g1}(g2.a, g2.b) - g1.k_{g2}
    theta_{g1 g2, g3}(a) + theta_{g1,g2}(g3.a) = theta_{g1, g2 g3}(a) + g1.theta_{g2,g3}(a)

All data is normalized on A and in the G-direction (k_e = 0, theta vanishes
when either group argument is the identity).

Every condition above is affine in (k, theta), so the "search" operations
solve linear systems over H exactly instead of enumerating tables; the
brute-force enumerators are kept for small instances and as test oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .braided import AbelianThreeCocycle, validate_ab3
from .cochains import Cochain
from .errors import PreconditionError, ScaleError, ShapeError
from .groups import FiniteGroup
from .linalg import AffineSolution, Echelon, quotient_structure, solve_affine, subgroup
from .modules import FinAbModule, GAction, ModuleAutomorphism, automorphisms, validate_action
from .report import ValidationReport

SEARCH_LIMIT = 100_000
BRUTE_FORCE_LIMIT = 1_000_000
# "auto" only enumerates small candidate sets; the affine solver is faster beyond.
AUTO_BRUTE_MAX = 4096


# ---------------------------------------------------------------------------
# small array helpers on A-cochain tables


def _d1(A: FinAbModule, theta: np.ndarray) -> np.ndarray:
    """d of 1-cochains with trivial action, batched over leading axes.

    theta: (..., |A|, r) -> (..., |A|, |A|, r) with
    (d theta)(a, b) = theta(b) - theta(a + b) + theta(a).
    """
    add = A.as_group().mult
    return theta[..., None, :, :] - theta[..., add, :] + theta[..., :, None, :]


def _d2(A: FinAbModule, k: np.ndarray) -> np.ndarray:
    """d of 2-cochains with trivial action, batched over leading axes."""
    add = A.as_group().mult
    n = A.order
    a, b, x = np.ix_(np.arange(n), np.arange(n), np.arange(n))
    return k[..., b, x, :] - k[..., add[a, b], x, :] + k[..., a, add[b, x], :] - k[..., a, b, :]


def _apply_each(aut_mats: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Apply matrices (L, r, r) to values (L, ..., r) along the leading axis."""
    return np.einsum("lij,l...j->l...i", aut_mats, values)


def _on_module(A: FinAbModule, H: FinAbModule, degree: int, values: np.ndarray) -> Cochain:
    return Cochain(degree, A.as_group(), H, values, True, A)


def _require_ab3(B: AbelianThreeCocycle) -> None:
    if not B.is_valid():
        raise PreconditionError("braided 2-group data is invalid:\n" + validate_ab3(B).summary())


# ---------------------------------------------------------------------------
# single autoequivalence objects


def aut_object_defects(B: AbelianThreeCocycle, phi: ModuleAutomorphism, psi: ModuleAutomorphism, k: np.ndarray):
    """(associator defect, braiding defect) as value arrays; zero means satisfied."""
    H = B.H
    p = phi.permutation()
    h, c = B.h.values, B.c.values
    e1 = _d2(B.A, k) - psi.apply(h) + h[np.ix_(p, p, p)]
    e2 = psi.apply(c) + k - np.swapaxes(k, 0, 1) - c[np.ix_(p, p)]
    return H.reduce(e1), H.reduce(e2)


@dataclass(frozen=True, eq=False)
class BraidedAutObject:
    B: AbelianThreeCocycle
    phi: ModuleAutomorphism
    psi: ModuleAutomorphism
    k: Cochain

    def __post_init__(self):
        if self.phi.module != self.B.A:
            raise ShapeError(f"phi acts on {self.phi.module!r}, expected {self.B.A!r}")
        if self.psi.module != self.B.H:
            raise ShapeError(f"psi acts on {self.psi.module!r}, expected {self.B.H!r}")
        if self.k.degree != 2 or self.k.module != self.B.H or self.k.group.order != self.B.A.order:
            raise ShapeError("k must be a 2-cochain on A with values in H")

    @classmethod
    def identity(cls, B: AbelianThreeCocycle) -> "BraidedAutObject":
        return cls(
            B,
            ModuleAutomorphism.identity(B.A),
            ModuleAutomorphism.identity(B.H),
            Cochain.on_module(B.A, B.H, 2),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BraidedAutObject)
            and self.B == other.B
            and self.phi == other.phi
            and self.psi == other.psi
            and self.k == other.k
        )

    def __hash__(self) -> int:
        return hash((self.phi, self.psi, self.k))

    def __repr__(self) -> str:
        return f"BraidedAutObject(phi={self.phi!r}, psi={self.psi!r}, k={self.k!r})"

    def __matmul__(self, other: "BraidedAutObject") -> "BraidedAutObject":
        return compose_aut(self, other)


def validate_aut_object(x: BraidedAutObject) -> ValidationReport:
    report = ValidationReport(subject="braided autoequivalence")
    report.ran("phi invertible")
    if not x.phi.is_invertible():
        report.add("phi invertible", (), repr(x.phi))
    report.ran("psi invertible")
    if not x.psi.is_invertible():
        report.add("psi invertible", (), repr(x.psi))
    report.ran("normalized k")
    w = x.k.normalization_witness()
    if w is not None:
        report.add("normalized k", w)
    if not (x.phi.is_well_defined() and x.psi.is_well_defined()):
        return report
    e1, e2 = aut_object_defects(x.B, x.phi, x.psi, x.k.values)
    for name, defect in (("associator: dk = psi h - h phi^3", e1), ("braiding: psi c + k = k tau + c phi^2", e2)):
        report.ran(name)
        for t in np.argwhere(np.any(defect != 0, axis=-1))[:10]:
            report.add(name, tuple(int(v) for v in t))
    return report


def compose_aut(x: BraidedAutObject, y: BraidedAutObject) -> BraidedAutObject:
    """x o y = (phi phi', psi psi', k(phi' a, phi' b) + psi k'); result re-validated."""
    if x.B != y.B:
        raise ShapeError("cannot compose autoequivalences of different braided 2-groups")
    k = x.k.precompose(y.phi.permutation()) + y.k.postcompose(x.psi)
    out = BraidedAutObject(x.B, x.phi @ y.phi, x.psi @ y.psi, k)
    report = validate_aut_object(out)
    if not report.ok:
        raise PreconditionError("composite is not a braided autoequivalence:\n" + report.summary())
    return out


def _solve_k(B: AbelianThreeCocycle, phi: ModuleAutomorphism, psi: ModuleAutomorphism) -> AffineSolution | None:
    A, H = B.A, B.H
    n, r = A.order, H.rank
    mod = np.tile(H.moduli, (n - 1) ** 2)
    out_mod = np.tile(H.moduli, n**3 + n**2)

    def residual(vec):
        k = np.zeros((n, n, r), dtype=np.int64)
        k[1:, 1:] = np.asarray(vec).reshape(n - 1, n - 1, r)
        e1, e2 = aut_object_defects(B, phi, psi, k)
        return np.concatenate([e1.reshape(-1), e2.reshape(-1)]), out_mod

    return solve_affine(mod, residual)


def search_aut_objects(
    B: AbelianThreeCocycle,
    phi: ModuleAutomorphism | None = None,
    psi: ModuleAutomorphism | None = None,
    limit: int = SEARCH_LIMIT,
) -> list[BraidedAutObject]:
    """Every valid (phi, psi, k), optionally with phi and/or psi fixed.

    Ordered by phi, then psi (lexicographic matrices), then the k table.
    """
    _require_ab3(B)
    A, H = B.A, B.H
    n, r = A.order, H.rank
    phis = [phi] if phi is not None else automorphisms(A)
    psis = [psi] if psi is not None else automorphisms(H)
    out: list[BraidedAutObject] = []
    for f in phis:
        for s in psis:
            sol = _solve_k(B, f, s)
            if sol is None:
                continue
            if len(out) + sol.count() > limit:
                raise ScaleError(
                    f"more than {limit} braided autoequivalences", estimate=len(out) + sol.count()
                )
            vecs = sorted(tuple(int(v) for v in x) for x in sol.solutions())
            for vec in vecs:
                k = np.zeros((n, n, r), dtype=np.int64)
                k[1:, 1:] = np.array(vec, dtype=np.int64).reshape(n - 1, n - 1, r)
                out.append(BraidedAutObject(B, f, s, _on_module(A, H, 2, k)))
    return out


# ---------------------------------------------------------------------------
# G-actions


@dataclass(frozen=True, eq=False)
class BraidedActionData:
    """(phi, psi, k, theta) with k as a (|G|, |A|, |A|, r) table and theta as
    a (|G|, |G|, |A|, r) table; use :meth:`k_of` / :meth:`theta_of` for
    cochain views."""

    G: FiniteGroup
    B: AbelianThreeCocycle
    phi: GAction
    psi: GAction
    k: np.ndarray
    theta: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        A, H, N = self.B.A, self.B.H, self.G.order
        problems = []
        if not self.phi.group.same_as(self.G) or self.phi.module != A:
            problems.append(f"phi must be an action of the group on {A!r}")
        if not self.psi.group.same_as(self.G) or self.psi.module != H:
            problems.append(f"psi must be an action of the group on {H!r}")
        k = np.asarray(self.k, dtype=np.int64)
        theta = np.asarray(self.theta, dtype=np.int64)
        if k.shape != (N, A.order, A.order, H.rank):
            problems.append(f"k table has shape {k.shape}, expected {(N, A.order, A.order, H.rank)}")
        if theta.shape != (N, N, A.order, H.rank):
            problems.append(f"theta table has shape {theta.shape}, expected {(N, N, A.order, H.rank)}")
        if problems:
            raise ShapeError("; ".join(problems))
        k = H.reduce(k)
        theta = H.reduce(theta)
        k.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def trivial(
        cls,
        G: FiniteGroup,
        B: AbelianThreeCocycle,
        phi: GAction | None = None,
        psi: GAction | None = None,
    ) -> "BraidedActionData":
        """k = 0 and theta = 0 over the given (default: trivial) actions."""
        phi = phi if phi is not None else GAction.trivial(G, B.A)
        psi = psi if psi is not None else GAction.trivial(G, B.H)
        N, nA, r = G.order, B.A.order, B.H.rank
        return cls(
            G,
            B,
            phi,
            psi,
            np.zeros((N, nA, nA, r), dtype=np.int64),
            np.zeros((N, N, nA, r), dtype=np.int64),
        )

    @classmethod
    def from_families(
        cls,
        G: FiniteGroup,
        B: AbelianThreeCocycle,
        phi: GAction,
        psi: GAction,
        k: Mapping[int, Cochain],
        theta: Mapping[tuple[int, int], Cochain],
    ) -> "BraidedActionData":
        """Omitted entries are zero."""
        N, nA, r = G.order, B.A.order, B.H.rank
        K = np.zeros((N, nA, nA, r), dtype=np.int64)
        T = np.zeros((N, N, nA, r), dtype=np.int64)
        for g, f in k.items():
            if f.degree != 2 or f.module != B.H or f.group.order != nA:
                raise ShapeError(f"k_{g} must be a 2-cochain on A with values in H")
            K[g] = f.values
        for (g1, g2), f in theta.items():
            if f.degree != 1 or f.module != B.H or f.group.order != nA:
                raise ShapeError(f"theta_{g1},{g2} must be a 1-cochain on A with values in H")
            T[g1, g2] = f.values
        return cls(G, B, phi, psi, K, T)

    def k_of(self, g: int) -> Cochain:
        return Cochain(2, self.B.A.as_group(), self.B.H, self.k[g], False, self.B.A)

    def theta_of(self, g1: int, g2: int) -> Cochain:
        return Cochain(1, self.B.A.as_group(), self.B.H, self.theta[g1, g2], False, self.B.A)

    def aut_object(self, g: int) -> BraidedAutObject:
        return BraidedAutObject(self.B, self.phi[g], self.psi[g], self.k_of(g))

    def same_frame(self, other: "BraidedActionData") -> bool:
        return (
            self.G.same_as(other.G)
            and self.B == other.B
            and self.phi == other.phi
            and self.psi == other.psi
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BraidedActionData)
            and self.same_frame(other)
            and bool(np.array_equal(self.k, other.k))
            and bool(np.array_equal(self.theta, other.theta))
        )

    def __hash__(self) -> int:
        return hash((self.k.tobytes(), self.theta.tobytes()))

    def __repr__(self) -> str:
        nk = int(np.count_nonzero(np.any(self.k != 0, axis=-1)))
        nt = int(np.count_nonzero(np.any(self.theta != 0, axis=-1)))
        return f"BraidedActionData(|G|={self.G.order}, k: {nk} nonzero, theta: {nt} nonzero)"

    def is_valid(self) -> bool:
        if "valid" not in self._cache:
            self._cache["valid"] = validate_action_data(self).ok
        return self._cache["valid"]


def action_defects(
    G: FiniteGroup,
    B: AbelianThreeCocycle,
    phi: GAction,
    psi: GAction,
    K: np.ndarray,
    T: np.ndarray,
) -> dict[str, np.ndarray]:
    """Defect arrays of the four conditions; all zero iff the data is valid.

    Leading axes index group elements, then A-arguments, then H coordinates.
    """
    A, H = B.A, B.H
    N = G.order
    mult = G.mult
    P = phi.perm_table()
    S = psi.matrices()
    h, c = B.h.values, B.c.values
    gs = np.arange(N)

    # associator and braiding conditions for every g
    h_phi = h[P[:, :, None, None], P[:, None, :, None], P[:, None, None, :]]
    assoc = _d2(A, K) - _apply_each(S, np.broadcast_to(h, (N,) + h.shape)) + h_phi
    c_phi = c[P[:, :, None], P[:, None, :]]
    braid = _apply_each(S, np.broadcast_to(c, (N,) + c.shape)) + K - np.swapaxes(K, 1, 2) - c_phi

    # d theta_{g1,g2} = k_{g1g2} - k_{g1}(g2.a, g2.b) - g1.k_{g2}
    g1, g2 = np.ix_(gs, gs)
    p2 = P[g2]  # (1, N, |A|)
    k_twist = K[g1[..., None, None], p2[..., :, None], p2[..., None, :]]
    psi_k = _apply_each(S, np.broadcast_to(K[None], (N,) + K.shape))
    dtheta = _d1(A, T) - (K[mult] - k_twist - psi_k)

    # theta_{g1g2,g3}(a) + theta_{g1,g2}(g3.a) = theta_{g1,g2g3}(a) + g1.theta_{g2,g3}(a)
    a1, a2, a3 = np.ix_(gs, gs, gs)
    lhs = T[mult[a1, a2], a3] + T[a1[..., None], a2[..., None], P[a3]]
    psi_t = _apply_each(S, np.broadcast_to(T[None], (N,) + T.shape))
    cocycle = lhs - T[a1, mult[a2, a3]] - psi_t

    return {
        "associator: dk_g = psi_g h - h phi_g^3": H.reduce(assoc),
        "braiding: psi_g c + k_g = k_g tau + c phi_g^2": H.reduce(braid),
        "d theta": H.reduce(dtheta),
        "theta cocycle": H.reduce(cocycle),
    }


def validate_action_data(D: BraidedActionData) -> ValidationReport:
    report = ValidationReport(subject="braided action data")
    report.extend(validate_ab3(D.B), "B: ")
    report.extend(validate_action(D.phi), "phi: ")
    report.extend(validate_action(D.psi), "psi: ")
    if not report.ok:
        return report
    # normalization on A and in G
    report.ran("k_g normalized on A")
    for g in D.G.elements():
        w = D.k_of(g).normalization_witness()
        if w is not None:
            report.add("k_g normalized on A", (g,) + w)
    report.ran("theta normalized on A")
    for t in np.argwhere(np.any(D.theta[:, :, 0] != 0, axis=-1)):
        report.add("theta normalized on A", (int(t[0]), int(t[1]), 0))
    report.ran("k_e = 0")
    for t in np.argwhere(np.any(D.k[0] != 0, axis=-1))[:5]:
        report.add("k_e = 0", (0,) + tuple(int(v) for v in t))
    report.ran("theta vanishes at identity")
    for t in np.argwhere(np.any(D.theta != 0, axis=-1)):
        if t[0] == 0 or t[1] == 0:
            report.add("theta vanishes at identity", tuple(int(v) for v in t))
            if len(report.violations) > 20:
                break
    for name, defect in action_defects(D.G, D.B, D.phi, D.psi, D.k, D.theta).items():
        report.ran(name)
        for t in np.argwhere(np.any(defect != 0, axis=-1))[:10]:
            report.add(name, tuple(int(v) for v in t))
    return report


# ---------------------------------------------------------------------------
# search and gauge


def _layout(G: FiniteGroup, B: AbelianThreeCocycle):
    N, nA, r = G.order, B.A.order, B.H.rank
    nk = (N - 1) * (nA - 1) ** 2 * r
    nt = (N - 1) ** 2 * (nA - 1) * r
    return N, nA, r, nk, nt


def _tables_from_vector(G, B, vec) -> tuple[np.ndarray, np.ndarray]:
    N, nA, r, nk, nt = _layout(G, B)
    vec = np.asarray(vec, dtype=np.int64)
    K = np.zeros((N, nA, nA, r), dtype=np.int64)
    T = np.zeros((N, N, nA, r), dtype=np.int64)
    if N > 1 and nA > 1:
        K[1:, 1:, 1:] = vec[:nk].reshape(N - 1, nA - 1, nA - 1, r)
        T[1:, 1:, 1:] = vec[nk:].reshape(N - 1, N - 1, nA - 1, r)
    return K, T


def _vector_from_tables(K: np.ndarray, T: np.ndarray) -> np.ndarray:
    return np.concatenate([K[1:, 1:, 1:].reshape(-1), T[1:, 1:, 1:].reshape(-1)])


def _gauge_shift(D_frame, eta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(delta k, delta theta) produced by an eta family (|G|, |A|, r)."""
    G, B, phi, psi = D_frame
    N = G.order
    P = phi.perm_table()
    S = psi.matrices()
    dK = _d1(B.A, eta)
    g1, g2 = np.ix_(np.arange(N), np.arange(N))
    eta_twist = eta[g1[..., None], P[g2]]
    psi_eta = _apply_each(S, np.broadcast_to(eta[None], (N,) + eta.shape))
    dT = eta[G.mult] - eta_twist - psi_eta
    return B.H.reduce(dK), B.H.reduce(dT)


@dataclass
class ActionDataSpace:
    """All valid (k, theta) over fixed (G, B, phi, psi), as an affine subgroup.

    ``solution`` is x0 + ker; ``gauge`` is the image of the eta-families,
    a subgroup of ker; orbits of the gauge action are its cosets.
    """

    G: FiniteGroup
    B: AbelianThreeCocycle
    phi: GAction
    psi: GAction
    solution: AffineSolution | None
    gauge: Echelon

    @property
    def count(self) -> int:
        return 0 if self.solution is None else self.solution.count()

    @property
    def orbit_count(self) -> int:
        if self.solution is None:
            return 0
        return self.solution.count() // self.gauge.order()

    @property
    def orbit_size(self) -> int:
        return self.gauge.order()

    def _datum(self, vec) -> BraidedActionData:
        K, T = _tables_from_vector(self.G, self.B, vec)
        D = BraidedActionData(self.G, self.B, self.phi, self.psi, K, T)
        # B, phi and psi were validated when the space was built, the layout
        # is normalized, and every vector of the solution set zeroes all defects
        D._cache["valid"] = True
        return D

    def data(self, limit: int = SEARCH_LIMIT) -> list[BraidedActionData]:
        """Every datum, ordered lexicographically by (k table, theta table)."""
        if self.count > limit:
            raise ScaleError(
                f"{self.count} action data exceed the limit of {limit}; "
                "ask for gauge-orbit representatives instead",
                estimate=self.count,
            )
        if self.solution is None:
            return []
        vecs = sorted(tuple(int(v) for v in x) for x in self.solution.solutions())
        return [self._datum(v) for v in vecs]

    def orbit_representatives(self, limit: int = SEARCH_LIMIT) -> list[BraidedActionData]:
        """The lexicographically least datum of every gauge orbit, sorted."""
        if self.orbit_count > limit:
            raise ScaleError(f"{self.orbit_count} gauge orbits exceed the limit of {limit}", self.orbit_count)
        if self.solution is None:
            return []
        sol = self.solution
        q = quotient_structure(sol.kernel.moduli, sol.kernel.generators(), self.gauge)
        reps = set()
        for coeffs in itertools.product(*[range(d) for d in q.factors]):
            x = sol.particular.copy()
            for cnum, rep in zip(coeffs, q.representatives):
                x = x + cnum * rep
            x = np.mod(x, sol.kernel.moduli)
            reps.add(tuple(int(v) for v in self.gauge.canonical(x)))
        return [self._datum(v) for v in sorted(reps)]


def action_data_space(
    G: FiniteGroup, B: AbelianThreeCocycle, phi: GAction | None = None, psi: GAction | None = None
) -> ActionDataSpace:
    _require_ab3(B)
    phi = phi if phi is not None else GAction.trivial(G, B.A)
    psi = psi if psi is not None else GAction.trivial(G, B.H)
    for name, act in (("phi", phi), ("psi", psi)):
        rep = validate_action(act)
        if not rep.ok:
            raise PreconditionError(f"{name} is not a valid action:\n" + rep.summary())
    if not phi.group.same_as(G) or not psi.group.same_as(G):
        raise ShapeError("actions are defined on a different group")
    if phi.module != B.A or psi.module != B.H:
        raise ShapeError("actions do not act on the modules of B")
    N, nA, r, nk, nt = _layout(G, B)
    mod = np.tile(B.H.moduli, (nk + nt) // r) if r else np.zeros(0, dtype=np.int64)
    out_mod = np.tile(B.H.moduli, N * nA**3 + N * nA**2 + N * N * nA**2 + N**3 * nA)

    def residual(vec):
        K, T = _tables_from_vector(G, B, vec)
        defects = action_defects(G, B, phi, psi, K, T)
        return np.concatenate([d.reshape(-1) for d in defects.values()]), out_mod

    solution = solve_affine(mod, residual)

    # gauge image: eta_g for g != e, normalized on A
    gens = []
    frame = (G, B, phi, psi)
    for g in range(1, N):
        for a in range(1, nA):
            for j in range(r):
                eta = np.zeros((N, nA, r), dtype=np.int64)
                eta[g, a, j] = 1
                dK, dT = _gauge_shift(frame, eta)
                gens.append(_vector_from_tables(dK, dT))
    gauge = subgroup(mod, gens)
    return ActionDataSpace(G, B, phi, psi, solution, gauge)


def search_action_data(
    G: FiniteGroup,
    B: AbelianThreeCocycle,
    phi: GAction | None = None,
    psi: GAction | None = None,
    limit: int = SEARCH_LIMIT,
    modulo_gauge: bool = False,
) -> list[BraidedActionData]:
    """All valid action data over (phi, psi), in lexicographic table order.

    With ``modulo_gauge=True`` only the least datum of each gauge orbit is
    returned.  Refuses with ScaleError when the result would exceed ``limit``.
    """
    space = action_data_space(G, B, phi, psi)
    return space.orbit_representatives(limit) if modulo_gauge else space.data(limit)


def search_action_data_brute(
    G: FiniteGroup,
    B: AbelianThreeCocycle,
    phi: GAction | None = None,
    psi: GAction | None = None,
    limit: int = BRUTE_FORCE_LIMIT,
) -> list[BraidedActionData]:
    """Enumerate every normalized (k, theta) table and keep the valid ones."""
    _require_ab3(B)
    phi = phi if phi is not None else GAction.trivial(G, B.A)
    psi = psi if psi is not None else GAction.trivial(G, B.H)
    N, nA, r, nk, nt = _layout(G, B)
    slots = (nk + nt) // r if r else 0
    total = B.H.order**slots
    if total > limit:
        raise ScaleError(f"{total} candidate (k, theta) tables", estimate=total)
    elements = B.H.elements()
    out = []
    for choice in itertools.product(elements, repeat=slots):
        vec = np.array(choice, dtype=np.int64).reshape(-1)
        K, T = _tables_from_vector(G, B, vec)
        defects = action_defects(G, B, phi, psi, K, T)
        if not any(d.any() for d in defects.values()):
            out.append(BraidedActionData(G, B, phi, psi, K, T))
    return out


def _eta_array(D: BraidedActionData, eta) -> np.ndarray:
    N, nA, r = D.G.order, D.B.A.order, D.B.H.rank
    if isinstance(eta, Mapping):
        arr = np.zeros((N, nA, r), dtype=np.int64)
        for g, f in eta.items():
            if f.degree != 1 or f.module != D.B.H or f.group.order != nA:
                raise ShapeError(f"eta_{g} must be a 1-cochain on A with values in H")
            arr[g] = f.values
    else:
        arr = np.asarray(eta, dtype=np.int64)
        if arr.shape != (N, nA, r):
            raise ShapeError(f"eta table has shape {arr.shape}, expected {(N, nA, r)}")
    arr = D.B.H.reduce(arr)
    if np.any(arr[:, 0]):
        raise PreconditionError("eta_g must be normalized: eta_g(0) = 0")
    if np.any(arr[0]):
        raise PreconditionError("eta at the identity element must vanish")
    return arr


def gauge_transform(D: BraidedActionData, eta) -> BraidedActionData:
    """The datum D' with k'_g = k_g + d eta_g and
    theta' = theta + eta_{g1g2} - eta_{g1}(g2.-) - g1.eta_{g2}."""
    arr = _eta_array(D, eta)
    dK, dT = _gauge_shift((D.G, D.B, D.phi, D.psi), arr)
    return BraidedActionData(D.G, D.B, D.phi, D.psi, D.k + dK, D.theta + dT)


def _eta_family(D: BraidedActionData, arr: np.ndarray) -> dict[int, Cochain]:
    A, H = D.B.A, D.B.H
    return {g: _on_module(A, H, 1, arr[g]) for g in D.G.elements()}


def action_isomorphic(
    D: BraidedActionData, D2: BraidedActionData, method: str = "auto"
) -> dict[int, Cochain] | None:
    """An eta-family carrying D to D2, or None when they are not isomorphic.

    ``method`` is "linear", "brute" or "auto" (brute up to AUTO_BRUTE_MAX candidates).
    """
    if not D.same_frame(D2):
        raise ShapeError("action data over different (G, B, phi, psi) cannot be compared")
    N, nA, r = D.G.order, D.B.A.order, D.B.H.rank
    frame = (D.G, D.B, D.phi, D.psi)
    dK = D.B.H.reduce(D2.k - D.k)
    dT = D.B.H.reduce(D2.theta - D.theta)
    slots = (N - 1) * (nA - 1)
    total = D.B.H.order**slots
    if method == "auto":
        method = "brute" if total <= AUTO_BRUTE_MAX else "linear"

    def eta_from(vec) -> np.ndarray:
        eta = np.zeros((N, nA, r), dtype=np.int64)
        if slots:
            eta[1:, 1:] = np.asarray(vec, dtype=np.int64).reshape(N - 1, nA - 1, r)
        return eta

    def defect(eta):
        sK, sT = _gauge_shift(frame, eta)
        return D.B.H.reduce(sK - dK), D.B.H.reduce(sT - dT)

    if method == "brute":
        if total > BRUTE_FORCE_LIMIT:
            raise ScaleError(f"{total} candidate eta-families", estimate=total)
        for choice in itertools.product(D.B.H.elements(), repeat=slots):
            eta = eta_from(np.array(choice, dtype=np.int64).reshape(-1))
            e1, e2 = defect(eta)
            if not e1.any() and not e2.any():
                return _eta_family(D, eta)
        return None
    if method != "linear":
        raise ValueError(f"unknown method {method!r}")
    mod = np.tile(D.B.H.moduli, slots)
    out_mod = np.tile(D.B.H.moduli, N * nA * nA + N * N * nA)

    def residual(vec):
        e1, e2 = defect(eta_from(vec))
        return np.concatenate([e1.reshape(-1), e2.reshape(-1)]), out_mod

    sol = solve_affine(mod, residual)
    if sol is None:
        return None
    return _eta_family(D, eta_from(sol.particular))


def iter_gauge_families(D: BraidedActionData) -> Iterator[np.ndarray]:
    """Every normalized eta-family (|G|, |A|, r), lexicographically."""
    N, nA, r = D.G.order, D.B.A.order, D.B.H.rank
    slots = (N - 1) * (nA - 1)
    for choice in itertools.product(D.B.H.elements(), repeat=slots):
        eta = np.zeros((N, nA, r), dtype=np.int64)
        if slots:
            eta[1:, 1:] = np.array(choice, dtype=np.int64).reshape(N - 1, nA - 1, r)
        yield eta
