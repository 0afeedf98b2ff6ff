"""Command line interface.

Every command reads a TOML document (see :mod:`holefield.document`) or
builds one, writes a JSON report to standard output and a short summary to
standard error.  Exit codes: 0 success, 1 failed check, 2 parse error,
3 an Unresolved, Unknown or Unsupported outcome (the report is still written).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import tomli

from .classify import classify, isometric, parse_label
from .document import Document, DocumentError, _Names, dump_document, load_document, parse_vector, presentation_dict
from .holes import NotAHole
from .kvmodel import Catalog, UnknownGenerator, expand, parse_element
from .spaces import NotInSpace, Unresolved, UnsupportedFamily, decompose, dual, quotient
from .suites import SUITES, run_suite
from .witness import MODES, VIOLATING_LABELS, ConstructionFailed, build_witness, violating_witness

SCHEMA = "1"
DEFAULT_DEPTH = 12

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_OPEN = 0, 1, 2, 3


class ParseFailure(Exception):
    """Bad input; the message carries the location."""


def _read(path: str) -> Document:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise ParseFailure(f"{path}: {e.strerror}") from None
    try:
        return load_document(text)
    except tomli.TOMLDecodeError as e:
        raise ParseFailure(f"{path}: {e}") from None
    except DocumentError as e:
        raise ParseFailure(f"{path}: {e}") from None


def _depth(args, doc: Document | None = None) -> int:
    if args.depth is not None:
        return args.depth
    if doc is not None and "depth" in doc.options:
        return int(doc.options["depth"])
    return DEFAULT_DEPTH


def _seed(args, doc: Document | None = None) -> int:
    if args.seed is not None:
        return args.seed
    if doc is not None and "seed" in doc.options:
        return int(doc.options["seed"])
    return 0


def _selected(doc: Document, name: str | None) -> dict:
    if name is None:
        if not doc.spaces:
            raise ParseFailure("document declares no spaces")
        return doc.spaces
    if name not in doc.spaces:
        raise ParseFailure(f"space.{name}: not declared")
    return {name: doc.spaces[name]}


def _open(status: str, err: Exception) -> dict:
    return {"status": status, "reason": str(err)}


def _per_space(doc, name, fn) -> tuple[dict, int]:
    """Apply ``fn`` to each selected space, turning open outcomes into report entries."""
    out, code = {}, EXIT_OK
    for key, P in _selected(doc, name).items():
        try:
            out[key] = {"status": "ok", **fn(P)}
        except Unresolved as e:
            out[key] = _open("Unresolved", e)
            code = EXIT_OPEN
        except UnsupportedFamily as e:
            out[key] = _open("Unsupported", e)
            code = EXIT_OPEN
    return out, code


def _flatten(report: dict, spaces: dict) -> dict:
    """A single-space report carries that space's fields at the top level."""
    if len(spaces) == 1:
        (key, body), = spaces.items()
        report.update({"space": key, **body})
    else:
        report["spaces"] = spaces
    return report


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> tuple[dict, int]:
    doc = _read(args.document)
    spaces, code = _per_space(doc, args.space, lambda P: classify(P).to_dict())
    return _flatten({}, spaces), code


def cmd_se(args) -> tuple[dict, int]:
    doc = _read(args.document)
    spaces, code = _per_space(doc, args.space, lambda P: {"se": classify(P).se})
    return _flatten({}, spaces), code


def cmd_dual(args) -> tuple[dict, int]:
    doc = _read(args.document)
    duals = {}

    def one(P):
        D = dual(P)
        return {"dual": D}

    spaces, code = _per_space(doc, args.space, one)
    names = _Names(doc.catalog)
    for key, body in spaces.items():
        if "dual" in body:
            duals[key] = body.pop("dual")
            body["presentation"] = presentation_dict(duals[key], names)
    report = _flatten({}, spaces)
    report["document"] = dump_document(doc.catalog, duals) if duals else ""
    return report, code


def cmd_decompose(args) -> tuple[dict, int]:
    doc = _read(args.document)
    names = _Names(doc.catalog)
    seed = _seed(args, doc)

    def one(P):
        got = decompose(P)
        if got is None:
            return {"decomposable": False}
        return {"decomposable": True,
                "first": presentation_dict(got.first, names),
                "second": presentation_dict(got.second, names),
                "isometry_checked": (got.witness.check(samples=args.samples, seed=seed)
                                     and got.to_canonical.check(samples=args.samples, seed=seed))}

    spaces, code = _per_space(doc, args.space, one)
    if any(b.get("isometry_checked") is False for b in spaces.values()):
        code = max(code, EXIT_FAILED)
    return _flatten({}, spaces), code


def cmd_isometric(args) -> tuple[dict, int]:
    doc = _read(args.document)
    P1 = _selected(doc, args.a)[args.a]
    P2 = _selected(doc, args.b)[args.b]
    try:
        v = isometric(P1, P2)
    except Unresolved as e:
        return {"a": args.a, "b": args.b, **_open("Unresolved", e)}, EXIT_OPEN
    report = {"a": args.a, "b": args.b, "status": "ok", "verdict": v.kind, "reason": v.reason}
    if v.kind == "Unknown":
        report["open_problem"] = v.reason
        return report, EXIT_OPEN
    return report, EXIT_OK


def cmd_quotient(args) -> tuple[dict, int]:
    doc = _read(args.document)
    P = _selected(doc, args.space_name)[args.space_name]
    try:
        u = parse_vector(args.vector, doc.catalog)
    except DocumentError as e:
        raise ParseFailure(str(e)) from None
    if len(u) != len(P.scales):
        raise ParseFailure(f"vector: expected {len(P.scales)} coordinates, got {len(u)}")
    report = {"space": args.space_name, "vector": args.vector}
    try:
        Q = quotient(P, u)
        rep = classify(Q).to_dict()
    except NotInSpace as e:
        raise ParseFailure(f"vector: {e}") from None
    except Unresolved as e:
        return {**report, **_open("Unresolved", e)}, EXIT_OPEN
    report.update({"status": "ok", "presentation": presentation_dict(Q, _Names(doc.catalog)),
                   "classification": rep,
                   "document": dump_document(doc.catalog, {"Q": Q})})
    return report, EXIT_OK


def cmd_witness(args) -> tuple[dict, int]:
    try:
        label = parse_label(args.type)
    except ValueError as e:
        raise ParseFailure(f"--type: {e}") from None
    try:
        W = violating_witness(label) if args.violating else build_witness(label, args.scales)
    except ConstructionFailed as e:
        raise ParseFailure(f"--type: {e}") from None
    text = dump_document(W.catalog, {"W": W.space}, {"depth": _depth(args)})
    return {"type": str(W.label), "scales": W.mode, "document": text}, EXIT_OK


def cmd_check(args) -> tuple[dict, int]:
    results = run_suite(args.suite, depth=args.depth, seed=args.seed or 0)
    ok = all(r.passed for r in results)
    report = {"suite": args.suite, "passed": ok, "results": [r.to_dict() for r in results]}
    return report, EXIT_OK if ok else EXIT_FAILED


def _default_catalog() -> Catalog:
    cat = Catalog()
    for j in range(1, 9):
        cat.add_basic(f"g{j}", 1, j)
    return cat


def cmd_expand(args) -> tuple[dict, int]:
    doc = _read(args.doc) if args.doc else None
    cat = doc.catalog if doc else _default_catalog()
    try:
        x = parse_element(args.expr, cat)
    except UnknownGenerator as e:
        raise ParseFailure(f"expression: unknown generator {e}") from None
    except ValueError as e:
        raise ParseFailure(f"expression: {e}") from None
    depth = _depth(args, doc)
    s = expand(x, depth)
    return {"expr": args.expr, "depth": depth, "series": str(s), "precision": str(s.prec)}, EXIT_OK


# ---------------------------------------------------------------------------
# output


def _summary(command: str, report: dict) -> str:
    if "error" in report:
        return f"error: {report['error']}"
    if command == "check":
        lines = [f"{r['suite']}: {'PASS' if r['passed'] else 'FAIL'}" for r in report["results"]]
        return "\n".join(lines)
    if command == "witness":
        return f"witness {report['type']} ({report['scales']})"
    if command == "expand":
        return f"{report['expr']} = {report['series']}"
    if command == "isometric":
        return f"{report['a']} ~ {report['b']}: {report.get('verdict', report['status'])}"
    bodies = report.get("spaces") or {report.get("space", "?"): report}
    lines = []
    for key, b in bodies.items():
        if b.get("status") not in (None, "ok"):
            lines.append(f"{key}: {b['status']} ({b['reason']})")
        elif command == "classify":
            lines.append(f"{key}: {b['type']} se={b['se']} dual={b['dual_type']}")
        elif command == "se":
            lines.append(f"{key}: se={b['se']}")
        elif command == "decompose":
            lines.append(f"{key}: {'decomposable' if b['decomposable'] else 'indecomposable'}")
        elif command == "dual":
            lines.append(f"{key}: dual computed")
        elif command == "quotient":
            lines.append(f"{key}: quotient of type {b['classification']['type']}")
    return "\n".join(lines)


def _emit(command: str, report: dict, fmt: str, out, err) -> None:
    report = {"schema": SCHEMA, "command": command, **report}
    summary = _summary(command, report)
    if fmt == "toml" and "document" in report:
        out.write(report["document"])
        err.write(summary + "\n")
    elif fmt == "text":
        out.write(summary + "\n")
    else:
        out.write(json.dumps(report, indent=2, default=str) + "\n")
        err.write(summary + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="expansion depth (default 12)")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    common.add_argument("--format", choices=["json", "text", "toml"], default=None,
                        help="report format; toml prints the emitted document")

    parser = argparse.ArgumentParser(prog="holefield",
                                     description="Normed spaces over a non-spherically-complete field.")
    sub = parser.add_subparsers(dest="command", required=True)

    def doc_cmd(name, helptext):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("document", help="TOML document, or - for standard input")
        p.add_argument("--space", default=None, help="restrict to one named space")
        return p

    doc_cmd("classify", "type, rank, (SE) and dual type of each space")
    doc_cmd("dual", "dual presentations")
    doc_cmd("se", "the (SE) property")
    doc_cmd("decompose", "split into two orthogonal summands").add_argument(
        "--samples", type=int, default=100, help="random vectors for the isometry check")

    p = sub.add_parser("isometric", parents=[common], help="decide isometry of two spaces")
    p.add_argument("document")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("quotient", parents=[common], help="quotient by a vector of the space")
    p.add_argument("document")
    p.add_argument("space_name", metavar="SPACE")
    p.add_argument("vector", help='coordinates, e.g. "(1, g1)"')

    p = sub.add_parser("witness", parents=[common], help="emit a standard space of a type")
    p.add_argument("--type", required=True, help="label such as XVII_4")
    p.add_argument("--scales", choices=MODES, default="offgroup")
    p.add_argument("--violating", action="store_true",
                   help="off-group space failing (SE); types " + ", ".join(map(str, VIOLATING_LABELS)))

    p = sub.add_parser("check", parents=[common], help="cross-check the engine against the oracle")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")

    p = sub.add_parser("expand", parents=[common], help="truncated series of an element")
    p.add_argument("expr")
    p.add_argument("--doc", default=None, help="document supplying the catalog")
    return parser


COMMANDS = {
    "classify": cmd_classify, "dual": cmd_dual, "se": cmd_se, "decompose": cmd_decompose,
    "isometric": cmd_isometric, "quotient": cmd_quotient, "witness": cmd_witness,
    "check": cmd_check, "expand": cmd_expand,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    fmt = args.format or ("toml" if args.command == "witness" else "json")
    try:
        report, code = COMMANDS[args.command](args)
    except ParseFailure as e:
        _emit(args.command, {"status": "error", "error": str(e)}, "json" if fmt == "toml" else fmt, out, err)
        return EXIT_PARSE
    except NotAHole as e:
        _emit(args.command, {"status": "error", "error": str(e)}, "json", out, err)
        return EXIT_PARSE
    _emit(args.command, report, fmt, out, err)
    return code


if __name__ == "__main__":
    sys.exit(main())
