"""The Pontryagin-square obstruction and the extension-with-section group.

Given a braided 2-group B = (A, H, h, c), braided action data
D = (phi, psi, k, theta) of G, and a phi-twisted 2-cocycle omega: G x G -> A,
``pontryagin_square`` evaluates the ten-term 4-cochain

    pi(g1,g2,g3,g4) =  c(w12, g12.w34)
                     + h(g12.w34, w12, w(g12, g34))
                     - h(g12.w34, g1.w(g2, g34), w(g1, g234))
                     + h(g1.w23, g1.w(g23, g4), w(g1, g234))
                     - h(g1.w23, w(g1, g23), w(g123, g4))
                     + h(w12, w(g12, g3), w(g123, g4))
                     - h(w12, g12.w34, w(g12, g34))
                     - theta_{g1,g2}(w34)
                     - k_{g1}(g2.w34, w(g2, g34))
                     + k_{g1}(w23, w(g23, g4))

with wij = omega(gi, gj), g12 = g1 g2 and so on, "." the phi-action, and
theta, k, h, c valued in H.

Sign of the theta term.  With the action data normalised as in
``action_data`` (dtheta = k_{g1g2} - k_{g1}(g2.-, g2.-) - g1.k_{g2} and
gauge moves k' = k + d eta), the theta term must enter with a minus sign for
pi to be a cocycle.  With ``+theta`` the sum is off by
2 theta_{g1,g2}(w34) up to a coboundary, which only vanishes when 2H = 0:
G = Z/3, trivial B on (Z/2, Z/3) and a pure-gauge datum already gives a
non-cocycle.  ``pi_values(..., theta_sign=+1)`` keeps the other sign
available for comparison.  The lift of the extension exists exactly when
pi is a psi-coboundary; the lifts then form a torsor over H^3(G, H).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .action_data import BraidedActionData, validate_action_data
from .braided import AbelianThreeCocycle, validate_ab3
from .cochains import Cochain, differential, differential_array, is_cocycle
from .cohomology import class_order, cohomology_group, is_coboundary
from .errors import AxiomViolation, InternalError, PreconditionError, ShapeError
from .groups import FiniteGroup, check_table, from_table
from .modules import FinAbModule, GAction, validate_action


@dataclass(frozen=True, eq=False)
class ExtensionDatum:
    """A normalized 2-cocycle omega: G x G -> A for the action phi."""

    omega: Cochain
    action: GAction

    def __post_init__(self):
        if self.omega.degree != 2:
            raise ShapeError(f"omega must have degree 2, got {self.omega.degree}")
        if not self.action.group.same_as(self.omega.group) or self.action.module != self.omega.module:
            raise ShapeError("omega and its action live on different (G, A)")
        if not self.omega.is_normalized():
            raise PreconditionError(
                f"omega must be normalized; nonzero at {self.omega.normalization_witness()}"
            )
        check = is_cocycle(self.omega, self.action)
        if not check:
            raise PreconditionError(f"omega is not a 2-cocycle: d omega != 0 at {check.witness}")

    @classmethod
    def from_dict(cls, action: GAction, entries: dict) -> "ExtensionDatum":
        return cls(Cochain.from_dict(action.group, action.module, 2, entries), action)

    @classmethod
    def zero(cls, action: GAction) -> "ExtensionDatum":
        return cls(Cochain.zero(action.group, action.module, 2), action)

    @property
    def group(self) -> FiniteGroup:
        return self.omega.group

    @property
    def module(self) -> FinAbModule:
        return self.omega.module


def _as_datum(omega, phi: GAction) -> ExtensionDatum:
    if isinstance(omega, ExtensionDatum):
        return omega
    if isinstance(omega, Cochain):
        return ExtensionDatum(omega, phi)
    raise ShapeError(f"expected an ExtensionDatum or Cochain for omega, got {type(omega).__name__}")


def compatibility_report(
    B: AbelianThreeCocycle, D: BraidedActionData, omega: ExtensionDatum, upsilon: Cochain | None = None
) -> list[str]:
    """Every mismatch between the pieces of the quintuple, in one list."""
    problems = []
    if D.B != B:
        problems.append("the action data is for a different braided 2-group")
    if not D.G.same_as(omega.group):
        problems.append(f"omega lives on a group of order {omega.group.order}, the action on {D.G.order}")
    if omega.module != B.A:
        problems.append(f"omega takes values in {omega.module!r}, but A = {B.A!r}")
    if omega.action != D.phi:
        problems.append("the action underlying omega differs from phi of the action data")
    if upsilon is not None:
        if upsilon.degree != 3:
            problems.append(f"upsilon must have degree 3, got {upsilon.degree}")
        if not upsilon.group.same_as(D.G) or upsilon.module != B.H:
            problems.append("upsilon must be a cochain G^3 -> H")
    return problems


def _preflight(B, D, omega, upsilon) -> None:
    problems = compatibility_report(B, D, omega, upsilon)
    if problems:
        raise ShapeError("incompatible inputs:\n  " + "\n  ".join(problems))
    # is_valid() caches the verdict on the (immutable) objects; the full
    # report is only rebuilt to explain a failure.
    if not B.is_valid():
        raise PreconditionError(validate_ab3(B).summary())
    if not D.is_valid():
        raise PreconditionError(validate_action_data(D).summary())


def _degenerate(G: FiniteGroup, A: FinAbModule, H: FinAbModule) -> bool:
    return G.order == 1 or A.order == 1 or H.order == 1


THETA_SIGN = -1


def pi_values(
    B: AbelianThreeCocycle, D: BraidedActionData, W: np.ndarray, theta_sign: int = THETA_SIGN
) -> np.ndarray:
    """The ten terms summed over all 4-tuples.

    W is omega as an A-index table of shape batch + (|G|, |G|); the result
    has shape batch + (|G|,)*4 + (rank H,).
    """
    G = D.G
    N = G.order
    m = G.mult
    P = D.phi.perm_table()
    C = B.c.values
    Hh = B.h.values
    K = D.k
    T = D.theta
    W = np.asarray(W)
    batch = W.shape[:-2]
    # batch axis last: omega lookups then copy contiguous rows
    Wt = np.moveaxis(W.reshape((-1, N, N)), 0, -1)
    g1, g2, g3, g4 = (g[..., None] for g in np.ix_(*([np.arange(N)] * 4)))
    g12, g23, g34 = m[g1, g2], m[g2, g3], m[g3, g4]
    g123, g234 = m[g12, g3], m[g2, g34]

    def w(x, y):
        return Wt[x[..., 0], y[..., 0]]

    w12, w23, w34 = w(g1, g2), w(g2, g3), w(g3, g4)
    a = P[g12, w34]

    total = C[w12, a]
    total = total + Hh[a, w12, w(g12, g34)]
    total = total - Hh[a, P[g1, w(g2, g34)], w(g1, g234)]
    total = total + Hh[P[g1, w23], P[g1, w(g23, g4)], w(g1, g234)]
    total = total - Hh[P[g1, w23], w(g1, g23), w(g123, g4)]
    total = total + Hh[w12, w(g12, g3), w(g123, g4)]
    total = total - Hh[w12, a, w(g12, g34)]
    total = total + theta_sign * T[g1, g2, w34]
    total = total - K[g1, P[g2, w34], w(g2, g34)]
    total = total + K[g1, w23, w(g23, g4)]
    r = B.H.rank
    total = np.broadcast_to(total, (N,) * 4 + (Wt.shape[-1], r))
    return B.H.reduce(np.moveaxis(total, 4, 0).reshape(batch + (N,) * 4 + (r,)))


def _first_bad(mask: np.ndarray) -> tuple[int, ...] | None:
    if not mask.any():
        return None
    return tuple(int(x) for x in np.argwhere(mask)[0])


def _omega_tables(omegas, D: BraidedActionData) -> np.ndarray:
    """Stack omega index tables, checking normalization and d omega = 0 in one pass."""
    cochains = [o.omega if isinstance(o, ExtensionDatum) else o for o in omegas]
    for o in omegas:
        if not isinstance(o, (ExtensionDatum, Cochain)):
            raise ShapeError(f"expected an ExtensionDatum or Cochain for omega, got {type(o).__name__}")
    checked: set[int] = set()
    for i, (o, f) in enumerate(zip(omegas, cochains)):
        if f.degree != 2 or not f.group.same_as(D.G) or f.module != D.B.A:
            raise ShapeError(f"omega #{i} must be a 2-cochain G x G -> A")
        if isinstance(o, ExtensionDatum) and id(o.action) not in checked:
            if o.action != D.phi:
                raise ShapeError(f"the action underlying omega #{i} differs from phi of the action data")
            checked.add(id(o.action))
    raw = [f for o, f in zip(omegas, cochains) if not isinstance(o, ExtensionDatum)]
    if raw:
        vals = np.stack([f.values for f in raw])
        for f in raw:
            if not f.normalized and not f.is_normalized():
                raise PreconditionError(
                    f"omega must be normalized; nonzero at {f.normalization_witness()}"
                )
        d = D.B.A.reduce(differential_array(vals, 2, D.G, D.phi))
        bad = _first_bad(np.any(d != 0, axis=-1))
        if bad is not None:
            raise PreconditionError(f"omega is not a 2-cocycle: d omega != 0 at {bad[1:]}")
    return np.stack([f.index_values() for f in cochains])


def pontryagin_squares(
    B: AbelianThreeCocycle,
    D: BraidedActionData,
    omegas,
    upsilon: Cochain | None = None,
) -> list[Cochain]:
    """:func:`pontryagin_square` for many omegas over the same (B, D).

    Validation of B and D, the evaluation of pi and the cocycle post-check
    are each done once for the whole stack.
    """
    omegas = list(omegas)
    if not omegas:
        return []
    first = _as_datum(omegas[0], D.phi)
    _preflight(B, D, first, upsilon)
    W = _omega_tables(omegas, D)
    G, H = D.G, B.H
    N = G.order
    if _degenerate(G, B.A, H):
        vals = np.zeros((len(omegas),) + (N,) * 4 + (H.rank,), dtype=np.int64)
    else:
        vals = pi_values(B, D, W)
    nonzero = np.any(vals != 0, axis=-1)
    for axis in range(1, 5):
        bad = _first_bad(np.take(nonzero, 0, axis=axis))
        if bad is not None:
            raise InternalError(f"obstruction cochain #{bad[0]} is not normalized")
    dvals = H.reduce(differential_array(vals, 4, G, None if D.psi.is_trivial() else D.psi))
    bad = _first_bad(np.any(dvals != 0, axis=-1))
    if bad is not None:
        raise InternalError(
            f"obstruction cochain #{bad[0]} is not a cocycle: d pi != 0 at {bad[1:]}"
        )
    if upsilon is not None:
        shift = differential(upsilon, D.psi)
        return [Cochain(4, G, H, v + shift.values, upsilon.normalized) for v in vals]
    # already reduced and checked above, so skip the per-cochain validation
    return [Cochain._trusted(4, G, H, v, True) for v in vals]


def pontryagin_square(
    B: AbelianThreeCocycle,
    D: BraidedActionData,
    omega,
    upsilon: Cochain | None = None,
) -> Cochain:
    """The obstruction 4-cochain pi (+ d upsilon), post-verified to be a
    normalized psi-cocycle."""
    return pontryagin_squares(B, D, [omega], upsilon)[0]


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    obstruction: Cochain
    liftable: bool
    preimage: Cochain | None
    torsor_factors: tuple[int, ...]
    torsor_order: int
    obstruction_order: int = 1
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.liftable != (self.preimage is not None):
            raise InternalError("liftable must agree with the presence of a preimage")


def classify(
    B: AbelianThreeCocycle,
    D: BraidedActionData,
    omega,
    upsilon: Cochain | None = None,
    force: bool = False,
) -> ClassificationReport:
    """Obstruction, liftability (with a preimage witness) and H^3(G, H)."""
    omega = _as_datum(omega, D.phi)
    pi = pontryagin_square(B, D, omega, upsilon)
    G, H = D.G, B.H
    notes = []
    if G.order == 1 or H.order == 1:
        notes.append("degenerate instance: every cochain vanishes")
        return ClassificationReport(pi, True, Cochain.zero(G, H, 3), (), 1, 1, tuple(notes))
    if B.A.order == 1:
        notes.append("A is trivial: the obstruction vanishes identically")
    H3 = cohomology_group(G, H, 3, D.psi, force=force)
    preimage = is_coboundary(pi, D.psi, force=force)
    order = 1 if preimage is not None else class_order(pi, D.psi)
    return ClassificationReport(
        pi, preimage is not None, preimage, H3.factors, H3.order, order, tuple(notes)
    )


def classical_pontryagin(B: AbelianThreeCocycle, G: FiniteGroup, omega) -> Cochain:
    """pi for the trivial action (phi = psi = id, k = theta = 0)."""
    D = BraidedActionData.trivial(G, B)
    return pontryagin_square(B, D, omega)


# ---------------------------------------------------------------------------
# extension with section


@dataclass(frozen=True, eq=False)
class Extension:
    """E on A x G, element (a, g) encoded as a*|G| + g.

    ``projection[e]`` is the G-component; ``section[g]`` encodes (0, g);
    ``inclusion[a]`` encodes (a, e).
    """

    group: FiniteGroup
    A: FinAbModule
    G: FiniteGroup
    projection: np.ndarray
    section: np.ndarray
    inclusion: np.ndarray

    def encode(self, a, g: int) -> int:
        return self.A.index(a) * self.G.order + int(g)

    def decode(self, e: int) -> tuple[tuple[int, ...], int]:
        return self.A.element(e // self.G.order), e % self.G.order


@dataclass(frozen=True)
class ExtensionDiagnostic:
    """Result of assembling the multiplication table without trusting omega."""

    table: np.ndarray
    associative: bool
    witness: tuple[int, int, int] | None
    message: str


def extension_table(G: FiniteGroup, A: FinAbModule, phi: GAction, omega: Cochain) -> np.ndarray:
    """(a1, g1)(a2, g2) = (a1 + g1.a2 + omega(g1, g2), g1 g2), encoded."""
    if not phi.group.same_as(G) or phi.module != A:
        raise ShapeError("phi must be an action of G on A")
    if omega.degree != 2 or not omega.group.same_as(G) or omega.module != A:
        raise ShapeError("omega must be a 2-cochain G x G -> A")
    N, n = G.order, A.order
    add = A.as_group().mult
    P = phi.perm_table()
    W = omega.index_values()
    e = np.arange(n * N)
    a, g = e // N, e % N
    a1, g1 = a[:, None], g[:, None]
    a2, g2 = a[None, :], g[None, :]
    prod_a = add[add[a1, P[g1, a2]], W[g1, g2]]
    return prod_a * N + G.mult[g1, g2]


def extension_diagnostic(G: FiniteGroup, A: FinAbModule, phi: GAction, omega: Cochain) -> ExtensionDiagnostic:
    """Build the table for any 2-cochain and report the associativity witness."""
    table = extension_table(G, A, phi, omega)
    try:
        check_table(table)
    except AxiomViolation as exc:
        return ExtensionDiagnostic(table, False, exc.witness, str(exc))
    return ExtensionDiagnostic(table, True, None, "multiplication is associative")


def build_extension(G: FiniteGroup, A: FinAbModule, phi: GAction, omega) -> Extension:
    """The group E = A x_omega G with projection and section tables."""
    rep = validate_action(phi)
    if not rep.ok:
        raise PreconditionError(rep.summary())
    omega = _as_datum(omega, phi)
    table = extension_table(G, A, phi, omega.omega)
    E = from_table(table.tolist(), name=f"{A!r} x_omega {G!r}")
    if not np.array_equal(E.mult, table):
        raise InternalError("extension table was renumbered; (0, e) must be the identity")
    N = G.order
    e = np.arange(A.order * N)
    return Extension(E, A, G, e % N, np.arange(N), np.arange(A.order) * N)
