"""Command-line front end: ``pontryagin <command> problem.json [flags]``.

Exit status: 0 success, 1 negative mathematical answer under ``--strict``,
2 input error (unreadable/malformed file, failed precondition, scale guard).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from . import __version__
from .action_data import action_data_space, validate_action_data
from .braided import validate_ab3
from .cochains import is_cocycle
from .cohomology import cohomology_group
from .errors import PontryaginError, ScaleError
from .modules import validate_action
from .obstruction import ExtensionDatum, build_extension, classify, extension_diagnostic
from .problem import (
    Problem,
    ProblemError,
    action_data_to_json,
    cochain_to_json,
    load_problem,
)
from .report import ValidationReport

MAX_GROUP_ORDER = 8
MAX_TABLE_ENTRIES = 10_000_000

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class Outcome:
    def __init__(self, document: dict, negative: bool = False):
        self.document = document
        self.negative = negative


# -- scale guard ---------------------------------------------------------------


def table_estimate(prob: Problem, command: str, degree: int = 1) -> int:
    """Largest dense table the command would build (entries)."""
    N = prob.group.order
    sizes = [N**3]
    if prob.braided is not None:
        nA, rH = prob.braided.A.order, max(prob.braided.H.rank, 1)
        sizes.append(nA**3 * rH)
        sizes.append(N**3 * nA * rH)
    if command == "classify" and prob.braided is not None:
        sizes.append(N**5 * max(prob.braided.H.rank, 1))
    if command == "cohomology":
        sizes.append(N ** (degree + 1) * 4)
    if command == "extension" and prob.braided is not None:
        sizes.append((prob.braided.A.order * N) ** 3)
    return max(sizes)


def check_scale(prob: Problem, command: str, degree: int, force: bool) -> None:
    if force:
        return
    if prob.group.order > MAX_GROUP_ORDER:
        raise ScaleError(
            f"group order {prob.group.order} exceeds {MAX_GROUP_ORDER}; rerun with --force",
            prob.group.order,
        )
    est = table_estimate(prob, command, degree)
    if est > MAX_TABLE_ENTRIES:
        raise ScaleError(f"about {est} table entries exceed {MAX_TABLE_ENTRIES}; rerun with --force", est)


# -- commands ------------------------------------------------------------------


def _report_json(rep: ValidationReport) -> dict:
    return {
        "subject": rep.subject,
        "ok": rep.ok,
        "checks": list(rep.checks),
        "violations": [
            {"check": v.check, "witness": list(v.witness), "detail": v.detail} for v in rep.violations
        ],
    }


def cmd_validate(prob: Problem, args) -> Outcome:
    reports = []
    group = ValidationReport(subject="group")
    group.ran("group axioms")
    reports.append(group)  # tables are validated while parsing
    if prob.module is not None:
        reports.append(validate_action(prob.action))
    if prob.braided is not None:
        reports.append(validate_ab3(prob.braided))
        reports.append(validate_action_data(prob.action_data))
    if prob.omega is not None:
        rep = ValidationReport(subject="omega")
        rep.ran("normalized")
        w = prob.omega.normalization_witness()
        if w is not None:
            rep.add("normalized", w)
        rep.ran("d omega = 0")
        check = is_cocycle(prob.omega, prob.action_data.phi)
        if not check:
            rep.add("d omega = 0", check.witness)
        reports.append(rep)
    ok = all(r.ok for r in reports)
    doc = {"command": "validate", "ok": ok, "reports": [_report_json(r) for r in reports]}
    return Outcome(doc, negative=not ok)


def cmd_cohomology(prob: Problem, args) -> Outcome:
    which = args.coefficients or ("module" if prob.module is not None else "H")
    M, action = prob.coefficients(which)
    Hn = cohomology_group(prob.group, M, args.degree, action, force=args.force)
    doc: dict[str, Any] = {
        "command": "cohomology",
        "coefficients": which,
        "degree": args.degree,
        "factors": list(Hn.factors),
        "order": Hn.order,
    }
    if args.representatives:
        doc["representatives"] = [cochain_to_json(r) for r in Hn.representatives]
    return Outcome(doc)


def cmd_classify(prob: Problem, args) -> Outcome:
    prob.require("braided", "omega")
    D = prob.action_data
    rep = classify(prob.braided, D, ExtensionDatum(prob.omega, D.phi), prob.upsilon, force=args.force)
    doc = {
        "command": "classify",
        "liftable": rep.liftable,
        "obstruction": cochain_to_json(rep.obstruction),
        "obstruction_class_order": rep.obstruction_order,
        "preimage": None if rep.preimage is None else cochain_to_json(rep.preimage),
        "torsor_factors": list(rep.torsor_factors),
        "torsor_order": rep.torsor_order,
        "notes": list(rep.notes),
    }
    return Outcome(doc, negative=not rep.liftable)


def cmd_extension(prob: Problem, args) -> Outcome:
    prob.require("braided", "omega")
    G, A, phi = prob.group, prob.braided.A, prob.action_data.phi
    if args.diagnose:
        diag = extension_diagnostic(G, A, phi, prob.omega)
        doc = {
            "command": "extension",
            "associative": diag.associative,
            "witness": None if diag.witness is None else list(diag.witness),
            "message": diag.message,
            "order": int(diag.table.shape[0]),
            "table": diag.table.tolist(),
        }
        return Outcome(doc, negative=not diag.associative)
    E = build_extension(G, A, phi, ExtensionDatum(prob.omega, phi))
    elements = [[list(E.decode(e)[0]), E.decode(e)[1]] for e in range(E.group.order)]
    doc = {
        "command": "extension",
        "associative": True,
        "order": E.group.order,
        "elements": elements,
        "table": E.group.mult.tolist(),
        "projection": E.projection.tolist(),
        "section": E.section.tolist(),
        "abelian": E.group.is_abelian(),
        "exponent": E.group.exponent(),
    }
    return Outcome(doc)


def cmd_search_actions(prob: Problem, args) -> Outcome:
    prob.require("braided")
    D = prob.action_data
    space = action_data_space(prob.group, prob.braided, D.phi, D.psi)
    if args.all:
        data = space.data(args.limit)
        listing = "all"
    else:
        data = space.orbit_representatives(args.limit)
        listing = "gauge orbit representatives"
    doc = {
        "command": "search-actions",
        "count": space.count,
        "gauge_orbits": space.orbit_count,
        "orbit_size": space.orbit_size if space.count else 0,
        "listing": listing,
        "data": [action_data_to_json(d) for d in data],
    }
    return Outcome(doc, negative=space.count == 0)


COMMANDS: dict[str, Callable[[Problem, argparse.Namespace], Outcome]] = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "classify": cmd_classify,
    "extension": cmd_extension,
    "search-actions": cmd_search_actions,
}


# -- rendering -----------------------------------------------------------------


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _fmt(value: Any) -> str:
    if isinstance(value, dict) and "degree" in value and "values" in value:
        if not value["values"]:
            return "0"
        return ", ".join(f"{tuple(t) if isinstance(t, list) else t} -> {v}" for t, v in value["values"])
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def render_text(doc: dict) -> str:
    lines = []
    cmd = doc["command"]
    if cmd == "validate":
        for rep in doc["reports"]:
            status = "ok" if rep["ok"] else f"{len(rep['violations'])} violation(s)"
            lines.append(f"{rep['subject']:<40} {status}")
            for v in rep["violations"][:5]:
                detail = f": {v['detail']}" if v["detail"] else ""
                lines.append(f"    {v['check']} at {tuple(v['witness'])}{detail}")
        lines.append("all checks passed" if doc["ok"] else "validation FAILED")
        return "\n".join(lines) + "\n"
    width = max(len(k) for k in doc)
    for key, value in doc.items():
        if key == "command":
            continue
        if key == "table":
            lines.append(f"{key:<{width}}")
            lines.extend("  " + " ".join(f"{x:>2}" for x in row) for row in value)
            continue
        if key in ("data", "representatives"):
            lines.append(f"{key:<{width}}  {len(value)} item(s)")
            for i, item in enumerate(value):
                lines.append(f"  [{i}] {json.dumps(item)}")
            continue
        lines.append(f"{key:<{width}}  {_fmt(value)}")
    return "\n".join(lines) + "\n"


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pontryagin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", help="problem file (JSON)")
        p.add_argument("--emit", choices=("json", "text"), default="text")
        p.add_argument("--strict", action="store_true", help="exit 1 on a negative answer")
        p.add_argument("--force", action="store_true", help="ignore scale guards")

    common(sub.add_parser("validate", help="run every validator on the problem"))
    p = sub.add_parser("cohomology", help="H^n(G, M) factors and order")
    common(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coefficients", choices=("module", "H", "A"), default=None,
                   help="coefficient module (default: 'module' if given, else H)")
    p.add_argument("--representatives", action="store_true", help="include basis cocycles")
    common(sub.add_parser("classify", help="obstruction, liftability and H^3 torsor"))
    p = sub.add_parser("extension", help="extension with section built from omega")
    common(p)
    p.add_argument("--diagnose", action="store_true",
                   help="build the table even if omega is not a cocycle and report associativity")
    p = sub.add_parser("search-actions", help="valid (k, theta) data over phi, psi")
    common(p)
    p.add_argument("--all", action="store_true", help="list every datum, not one per gauge orbit")
    p.add_argument("--limit", type=int, default=10_000)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=stderr)
        return EXIT_INPUT
    try:
        prob = load_problem(text)
        check_scale(prob, args.command, getattr(args, "degree", 1), args.force)
        outcome = COMMANDS[args.command](prob, args)
    except ScaleError as exc:
        est = f" (estimate: {exc.estimate})" if exc.estimate is not None else ""
        print(f"error: scale guard: {exc}{est}", file=stderr)
        return EXIT_INPUT
    except ProblemError as exc:
        print(f"error: {args.file}: {exc}", file=stderr)
        return EXIT_INPUT
    except PontryaginError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    out = render_json(outcome.document) if args.emit == "json" else render_text(outcome.document)
    stdout.write(out)
    if args.strict and outcome.negative:
        return EXIT_NEGATIVE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
