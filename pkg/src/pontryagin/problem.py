"""Declarative problem files (JSON) and their conversion to domain objects.

Top-level keys (all but "group" optional):

    version         1
    group           {"cyclic": n} | {"product": [group, group]} | {"table": [[...]]}
    module          {"factors": [m1, ...]}            coefficients for `cohomology`
    action          {"<g>": [[matrix rows]], ...}      action on "module"; default trivial
    braided2group   {"A": mod, "H": mod, "h": cochain, "c": cochain}
                    | {"standard_cyclic": {"n": n, "H": mod, "t": element}}
    action_data     {"phi": action, "psi": action, "k": {"<g>": cochain},
                     "theta": {"<g1>,<g2>": cochain}}
    omega           cochain G x G -> A
    upsilon         cochain G^3 -> H

A cochain is {"degree": n, "values": [[tuple, value], ...], "normalized": true};
omitted tuples are zero.  Module elements are integers (rank one) or lists.
Errors carry a JSON path such as ``$.action_data.k.1.values[2]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .action_data import BraidedActionData
from .braided import AbelianThreeCocycle, standard_cyclic
from .cochains import Cochain
from .errors import PontryaginError
from .groups import FiniteGroup, direct_product, from_table, make_cyclic
from .modules import FinAbModule, GAction

SUPPORTED_VERSIONS = (1,)


class ProblemError(PontryaginError, ValueError):
    """A problem file that cannot be turned into domain objects."""

    def __init__(self, message: str, path: str = "$", line: int | None = None, column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = f"line {line}, column {column}" if line is not None else path
        super().__init__(f"{where}: {message}")


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise ProblemError(message, path)


def _int(value: Any, path: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), f"expected an integer, got {value!r}", path)
    return value


def _wrap(fn, path: str, *args):
    """Run a domain constructor, re-raising its errors with a JSON path."""
    try:
        return fn(*args)
    except ProblemError:
        raise
    except (PontryaginError, ValueError, IndexError) as exc:
        raise ProblemError(str(exc), path) from None


# -- pieces ------------------------------------------------------------------


def parse_group(node: Any, path: str = "$.group") -> FiniteGroup:
    _expect(isinstance(node, dict) and len(node) == 1, 'group must be {"cyclic"|"product"|"table": ...}', path)
    (kind, value), = node.items()
    if kind == "cyclic":
        return _wrap(make_cyclic, path + ".cyclic", _int(value, path + ".cyclic"))
    if kind == "product":
        _expect(isinstance(value, list) and len(value) == 2, "product needs a list of two groups", path + ".product")
        G1 = parse_group(value[0], f"{path}.product[0]")
        G2 = parse_group(value[1], f"{path}.product[1]")
        return direct_product(G1, G2)
    if kind == "table":
        _expect(isinstance(value, list), "table must be a list of rows", path + ".table")
        return _wrap(from_table, path + ".table", value)
    raise ProblemError(f"unknown group constructor {kind!r}", path)


def parse_module(node: Any, path: str) -> FinAbModule:
    if isinstance(node, list):
        factors = node
    else:
        _expect(isinstance(node, dict) and "factors" in node, 'module must be {"factors": [m1, ...]}', path)
        factors = node["factors"]
        path = path + ".factors"
    _expect(isinstance(factors, list), "factors must be a list", path)
    facs = [_int(m, f"{path}[{i}]") for i, m in enumerate(factors)]
    return _wrap(FinAbModule, path, tuple(facs))


def parse_element(M: FinAbModule, value: Any, path: str) -> tuple[int, ...]:
    if isinstance(value, list):
        for i, v in enumerate(value):
            _int(v, f"{path}[{i}]")
    else:
        _int(value, path)
    return _wrap(M.coerce, path, value)


def parse_action(G: FiniteGroup, M: FinAbModule, node: Any, path: str) -> GAction:
    if node is None:
        return GAction.trivial(G, M)
    _expect(isinstance(node, dict), 'an action is {"<g>": [[matrix rows]], ...}', path)
    mats = {}
    for key, rows in node.items():
        try:
            g = int(key)
        except ValueError:
            raise ProblemError(f"action key {key!r} is not a group element index", path) from None
        _expect(0 <= g < G.order, f"group element {g} out of range", f"{path}.{key}")
        mats[g] = rows
    action = _wrap(GAction.from_matrices, path, G, M, mats)
    return action


def parse_cochain(
    base_group: FiniteGroup,
    M: FinAbModule,
    node: Any,
    path: str,
    degree: int | None = None,
    base: FinAbModule | None = None,
) -> Cochain:
    _expect(isinstance(node, dict), 'a cochain is {"degree": n, "values": [[tuple, value], ...]}', path)
    if "degree" in node:
        n = _int(node["degree"], path + ".degree")
    elif degree is not None:
        n = degree
    else:
        raise ProblemError('missing key "degree"', path)
    if degree is not None:
        _expect(n == degree, f"expected a degree-{degree} cochain, got degree {n}", path + ".degree")
    normalized = node.get("normalized", True)
    _expect(isinstance(normalized, bool), "normalized must be true or false", path + ".normalized")
    values = node.get("values", [])
    _expect(isinstance(values, list), "values must be a list of [tuple, value] pairs", path + ".values")
    shape = (base_group.order,) * n + (M.rank,)
    table = np.zeros(shape, dtype=np.int64)
    for i, item in enumerate(values):
        ipath = f"{path}.values[{i}]"
        _expect(isinstance(item, list) and len(item) == 2, "each entry must be [tuple, value]", ipath)
        args, value = item
        if not isinstance(args, list):
            args = [args]
        _expect(len(args) == n, f"tuple has {len(args)} arguments, degree is {n}", ipath)
        idx = []
        for j, a in enumerate(args):
            apath = f"{ipath}[0][{j}]"
            if base is not None:
                idx.append(base.index(parse_element(base, a, apath)))
            else:
                a = _int(a, apath)
                _expect(0 <= a < base_group.order, f"group element {a} out of range", apath)
                idx.append(a)
        table[tuple(idx)] = parse_element(M, value, f"{ipath}[1]")
    return _wrap(Cochain, path, n, base_group, M, table, normalized, base)


def parse_braided(node: Any, path: str = "$.braided2group") -> AbelianThreeCocycle:
    _expect(isinstance(node, dict), "braided2group must be an object", path)
    if "standard_cyclic" in node:
        sc = node["standard_cyclic"]
        p = path + ".standard_cyclic"
        _expect(isinstance(sc, dict), "standard_cyclic must be an object", p)
        for key in ("n", "H", "t"):
            _expect(key in sc, f"missing key {key!r}", p)
        H = parse_module(sc["H"], p + ".H")
        t = parse_element(H, sc["t"], p + ".t")
        return _wrap(standard_cyclic, p, _int(sc["n"], p + ".n"), H, t)
    for key in ("A", "H"):
        _expect(key in node, f"missing key {key!r}", path)
    A = parse_module(node["A"], path + ".A")
    H = parse_module(node["H"], path + ".H")
    G = A.as_group()
    h = parse_cochain(G, H, node.get("h", {"degree": 3}), path + ".h", 3, A)
    c = parse_cochain(G, H, node.get("c", {"degree": 2}), path + ".c", 2, A)
    return _wrap(AbelianThreeCocycle, path, A, H, h, c)


def parse_action_data(G: FiniteGroup, B: AbelianThreeCocycle, node: Any, path: str = "$.action_data") -> BraidedActionData:
    if node is None:
        return BraidedActionData.trivial(G, B)
    _expect(isinstance(node, dict), "action_data must be an object", path)
    phi = parse_action(G, B.A, node.get("phi"), path + ".phi")
    psi = parse_action(G, B.H, node.get("psi"), path + ".psi")
    AG = B.A.as_group()
    ks = {}
    k_node = node.get("k", {})
    _expect(isinstance(k_node, dict), 'k must be {"<g>": cochain}', path + ".k")
    for key, cs in k_node.items():
        try:
            g = int(key)
        except ValueError:
            raise ProblemError(f"k key {key!r} is not a group element index", path + ".k") from None
        _expect(0 <= g < G.order, f"group element {g} out of range", f"{path}.k.{key}")
        ks[g] = parse_cochain(AG, B.H, cs, f"{path}.k.{key}", 2, B.A)
    thetas = {}
    theta_node = node.get("theta", {})
    _expect(isinstance(theta_node, dict), 'theta must be {"<g1>,<g2>": cochain}', path + ".theta")
    for key, cs in theta_node.items():
        try:
            g1, g2 = (int(x) for x in key.split(","))
        except ValueError:
            raise ProblemError(f"theta key {key!r} must look like 'g1,g2'", path + ".theta") from None
        for g in (g1, g2):
            _expect(0 <= g < G.order, f"group element {g} out of range", f"{path}.theta.{key}")
        thetas[(g1, g2)] = parse_cochain(AG, B.H, cs, f"{path}.theta.{key}", 1, B.A)
    return _wrap(BraidedActionData.from_families, path, G, B, phi, psi, ks, thetas)


# -- whole file --------------------------------------------------------------


KNOWN_KEYS = ("version", "group", "module", "action", "braided2group", "action_data", "omega", "upsilon")


@dataclass
class Problem:
    group: FiniteGroup
    module: FinAbModule | None = None
    action: GAction | None = None
    braided: AbelianThreeCocycle | None = None
    action_data: BraidedActionData | None = None
    omega: Cochain | None = None
    upsilon: Cochain | None = None
    raw: dict = field(default_factory=dict, repr=False)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            keys = {"braided": "braided2group", "action_data": "action_data"}
            raise ProblemError("missing required key(s): " + ", ".join(keys.get(n, n) for n in missing))

    def coefficients(self, which: str) -> tuple[FinAbModule, GAction]:
        """(module, action) for 'module', 'H' (with psi) or 'A' (with phi)."""
        if which == "module":
            if self.module is None:
                raise ProblemError('no "module" given; use --coefficients H or A')
            return self.module, self.action
        self.require("braided", "action_data")
        if which == "H":
            return self.braided.H, self.action_data.psi
        if which == "A":
            return self.braided.A, self.action_data.phi
        raise ProblemError(f"unknown coefficient choice {which!r}")


def parse_problem(data: Any) -> Problem:
    _expect(isinstance(data, dict), "problem file must hold a JSON object", "$")
    unknown = [k for k in data if k not in KNOWN_KEYS]
    _expect(not unknown, f"unknown top-level key(s): {', '.join(unknown)}", "$")
    version = data.get("version", 1)
    _expect(version in SUPPORTED_VERSIONS, f"unsupported version {version!r}", "$.version")
    _expect("group" in data, 'missing required key "group"', "$")
    G = parse_group(data["group"])
    prob = Problem(G, raw=data)
    if "module" in data:
        prob.module = parse_module(data["module"], "$.module")
        prob.action = parse_action(G, prob.module, data.get("action"), "$.action")
    elif "action" in data:
        raise ProblemError('"action" given without "module"', "$.action")
    if "braided2group" in data:
        prob.braided = parse_braided(data["braided2group"])
        prob.action_data = parse_action_data(G, prob.braided, data.get("action_data"))
    elif "action_data" in data:
        raise ProblemError('"action_data" given without "braided2group"', "$.action_data")
    if "omega" in data:
        _expect(prob.braided is not None, '"omega" needs "braided2group" (for A)', "$.omega")
        prob.omega = parse_cochain(G, prob.braided.A, data["omega"], "$.omega", 2)
    if "upsilon" in data:
        _expect(prob.braided is not None, '"upsilon" needs "braided2group" (for H)', "$.upsilon")
        prob.upsilon = parse_cochain(G, prob.braided.H, data["upsilon"], "$.upsilon", 3)
    return prob


def load_problem(text: str) -> Problem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return parse_problem(data)


# -- emission helpers shared with the CLI -----------------------------------


def _value(v: tuple[int, ...]):
    return v[0] if len(v) == 1 else list(v)


def cochain_to_json(f: Cochain) -> dict:
    """Nonzero entries in lexicographic order, in the input cochain format."""
    entries = []
    for idx, value in f.nonzero_items():
        if f.base is not None:
            args = [_value(f.base.element(i)) for i in idx]
        else:
            args = list(idx)
        entries.append([args, _value(value)])
    return {"degree": f.degree, "values": entries}


def action_to_json(action: GAction) -> dict:
    return {
        str(g): action[g].matrix.tolist()
        for g in action.group.elements()
        if not action[g].is_identity()
    }


def action_data_to_json(D: BraidedActionData) -> dict:
    ks = {}
    for g in D.G.elements():
        if np.any(D.k[g]):
            ks[str(g)] = cochain_to_json(D.k_of(g))
    thetas = {}
    for g1 in D.G.elements():
        for g2 in D.G.elements():
            if np.any(D.theta[g1, g2]):
                thetas[f"{g1},{g2}"] = cochain_to_json(D.theta_of(g1, g2))
    return {"phi": action_to_json(D.phi), "psi": action_to_json(D.psi), "k": ks, "theta": thetas}
