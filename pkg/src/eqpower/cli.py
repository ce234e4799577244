"""Command line front end.

Subcommands mirror the library: validate structures, solve finite systems,
project and compress systems over direct powers, decide the Noetherian
property, and expand refutation certificates into verified witness families.

Exit codes: 0 for a passing result, 1 for a negative result (axiom violations,
inconsistency, NOT_NOETHERIAN, failed verification), 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .errors import (
    InputFormatError,
    InvalidCertificateError,
    SignatureMismatchError,
    UnboundVariableError,
)
from .fixtures import staircase_demo_system, triangle_graph
from .noetherian import (
    NO_OBSTRUCTION_FOUND,
    NOT_NOETHERIAN,
    build_witness_family,
    first_violated_member,
    power_noetherian,
    verify_witness,
)
from .power import (
    PowerElement,
    PowerSystem,
    consistent,
    power_equation_to_json_dict,
    power_system_from_json_dict,
    projected_system,
    stream_horizon,
)
from .solver import (
    Equation,
    RelationAtom,
    Var,
    atom_args,
    check_equation,
    equation_to_json_dict,
    minimal_inconsistent_subset,
    solve,
    system_from_json_dict,
    system_to_json_dict,
)
from .structures import FiniteStructure, structure_from_json_dict, validate
from .wrap import wrap, wrap_result_to_json_dict


class CliInputError(Exception):
    """Input that cannot be used; reported on stderr with exit code 2."""


def _load_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliInputError(f"{path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_structure(path: str) -> tuple[str, FiniteStructure]:
    try:
        return structure_from_json_dict(_load_json(path))
    except InputFormatError as exc:
        raise CliInputError(f"{path}: {exc}") from None


def _load_power_system(path: str) -> PowerSystem:
    try:
        return power_system_from_json_dict(_load_json(path))
    except InputFormatError as exc:
        raise CliInputError(f"{path}: {exc}") from None


def _load_base_system(path: str):
    try:
        return system_from_json_dict(_load_json(path))
    except InputFormatError as exc:
        raise CliInputError(f"{path}: {exc}") from None


def _render_arg(arg) -> str:
    if isinstance(arg, Var):
        return arg.name
    value = arg.value
    if isinstance(value, PowerElement):
        return str(value)
    return str(value)


def _render_equation(eq: Equation) -> str:
    if isinstance(eq, RelationAtom):
        return f"{eq.symbol}({', '.join(_render_arg(a) for a in eq.args)})"
    return f"{_render_arg(eq.lhs)} = {_render_arg(eq.rhs)}"


def _render_family(fam) -> str:
    parts = []
    for a in atom_args(fam.atom):
        if isinstance(a, Var):
            parts.append(a.name)
        else:
            s = a.value
            parts.append(f"stair(generator={','.join(s.generator)}; tail={s.tail})")
    atom = fam.atom
    if isinstance(atom, RelationAtom):
        body = f"{atom.symbol}({', '.join(parts)})"
    else:
        body = f"{parts[0]} = {parts[1]}"
    return f"{body} for every member n >= 1"


def _render_source(ref) -> str:
    if ref.kind == "explicit":
        return f"explicit {ref.index}"
    return f"family {ref.index} member {ref.member}"


def _print_json(doc: Any) -> None:
    print(json.dumps(doc, indent=2))


def cmd_validate(args: argparse.Namespace) -> int:
    kind, structure = _load_structure(args.structure)
    report = validate(structure, kind)
    if args.format == "json":
        _print_json(report.to_json_dict())
    elif report.passed:
        print(f"{kind} axioms: PASS ({structure.size} elements)")
    else:
        print(f"{kind} axioms: FAIL")
        for axiom, witness in report.violations:
            print(f"  {axiom}: {', '.join(witness)}")
    return 0 if report.passed else 1


def cmd_solve(args: argparse.Namespace) -> int:
    _, structure = _load_structure(args.structure)
    system = _load_base_system(args.system)
    result = solve(structure, system)
    if args.format == "json":
        doc = {
            "variables": list(system.variables),
            "solutions": [list(p) for p in result.sorted_points()],
            "count": len(result.points),
        }
        if result.is_empty:
            core = minimal_inconsistent_subset(structure, system)
            doc["minimal_core"] = [equation_to_json_dict(eq) for eq in core.equations]
        _print_json(doc)
    else:
        for point in result.sorted_points():
            print(", ".join(f"{v}={x}" for v, x in zip(system.variables, point)))
        print(f"solutions: {len(result.points)}")
        if result.is_empty:
            core = minimal_inconsistent_subset(structure, system)
            print("minimal inconsistent core:")
            for eq in core.equations:
                print(f"  {_render_equation(eq)}")
    return 0 if result.points else 1


def cmd_project(args: argparse.Namespace) -> int:
    _, structure = _load_structure(args.structure)
    system = _load_power_system(args.system)
    if args.coordinate < 0:
        raise CliInputError("coordinate must be >= 0")
    projected = projected_system(system, args.coordinate)
    for eq in projected.equations:  # surfaces symbol and arity mismatches early
        check_equation(structure, projected.variables, eq)
    if args.format == "json":
        _print_json(system_to_json_dict(projected))
    else:
        print(f"coordinate {args.coordinate}: {len(projected.equations)} distinct equations")
        for eq in projected.equations:
            print(f"  {_render_equation(eq)}")
    return 0


def cmd_consistent(args: argparse.Namespace) -> int:
    _, structure = _load_structure(args.structure)
    system = _load_power_system(args.system)
    verdict = consistent(structure, system)
    if args.format == "json":
        doc: dict[str, Any] = {"consistent": verdict.consistent}
        if verdict.certificate is not None:
            cert = verdict.certificate
            doc["certificate"] = {
                "coordinate": cert.coordinate,
                "core": system_to_json_dict(cert.core),
                "sources": [ref.to_json_dict() for ref in cert.sources],
                "lifted": [power_equation_to_json_dict(eq) for eq in cert.lifted],
            }
        _print_json(doc)
    elif verdict.consistent:
        print("consistent: every coordinate projection has a solution")
    else:
        cert = verdict.certificate
        print(f"inconsistent at coordinate {cert.coordinate}")
        print("minimal core:")
        for eq, ref in zip(cert.core.equations, cert.sources):
            print(f"  {_render_equation(eq)}    [{_render_source(ref)}]")
        print("finite inconsistent subsystem over the power:")
        for eq in cert.lifted:
            print(f"  {_render_equation(eq)}")
    return 0 if verdict.consistent else 1


def cmd_noetherian(args: argparse.Namespace) -> int:
    kind, structure = _load_structure(args.structure)
    if kind == "generic":
        raise CliInputError("noetherian verdicts need kind graph, poset, or matroid")
    verdict = power_noetherian(structure, kind)
    if args.format == "json":
        _print_json(verdict.to_json_dict())
    else:
        print(f"status: {verdict.status}")
        if verdict.certificate is not None:
            print(f"certificate ({verdict.certificate_kind}): {', '.join(verdict.certificate)}")
        if verdict.transcript:
            print(f"note: {verdict.transcript}")
    return 1 if verdict.status == NOT_NOETHERIAN else 0


def cmd_witness(args: argparse.Namespace) -> int:
    kind, structure = _load_structure(args.structure)
    if kind == "generic":
        raise CliInputError("witness families need kind graph, poset, or matroid")
    if args.depth < 1:
        raise CliInputError("depth must be >= 1")
    verdict = power_noetherian(structure, kind)
    if verdict.status != NOT_NOETHERIAN:
        if args.format == "json":
            _print_json({"status": verdict.status, "witness": None})
        else:
            print(f"status: {verdict.status}; no witness family to build")
        return 1
    package = build_witness_family(structure, kind, verdict.certificate)
    checks = []
    for n in range(1, args.depth + 1):
        ok = verify_witness(structure, package, n)
        checks.append((n, ok, first_violated_member(structure, package, n) if ok else None))
    all_ok = all(ok for _, ok, _ in checks)
    if args.format == "json":
        _print_json(
            {
                "status": verdict.status,
                "witness": package.to_json_dict(),
                "checked_members": [
                    {"n": n, "ok": ok, "first_violated_member": first}
                    for n, ok, first in checks
                ],
                "all_ok": all_ok,
            }
        )
    else:
        print(f"certificate ({package.certificate_kind}): {', '.join(package.certificate)}")
        print(f"family: {_render_family(package.family)}")
        for n, ok, first in checks:
            point = package.witness_point(n)[0]
            status = "ok" if ok else "FAILED"
            tail = f", first violated member {first}" if first is not None else ""
            print(f"  depth {n}: point {point} solves members 1..{n} but not the family: {status}{tail}")
        print(f"witness verified to depth {args.depth}: {'yes' if all_ok else 'NO'}")
    return 0 if all_ok else 1


def cmd_wrap(args: argparse.Namespace) -> int:
    if args.paper_example_1:
        if args.structure or args.system:
            raise CliInputError("--paper-example-1 replaces the structure and system arguments")
        structure = triangle_graph()
        system = staircase_demo_system()
    else:
        if not args.structure or not args.system:
            raise CliInputError("wrap needs a structure file and a system file (or --paper-example-1)")
        _, structure = _load_structure(args.structure)
        system = _load_power_system(args.system)
    result = wrap(structure, system)
    if args.format == "json":
        _print_json(wrap_result_to_json_dict(result))
    else:
        trace = result.trace
        print(
            f"projected-equation classes: {len(trace.representatives)}"
            f" (stabilization {trace.stabilization}, period {trace.period})"
        )
        for rep in trace.representatives:
            print(
                f"  {_render_equation(rep.representative)}"
                f"    [coordinate {rep.coordinate}, {_render_source(rep.source)}]"
            )
        print(f"seed equations: {len(trace.seeds)}")
        for eq in trace.seeds:
            print(f"  {_render_equation(eq)}")
        print(f"wrapped system: {len(result.wrapped.explicit)} equations")
        for eq in result.wrapped.explicit:
            print(f"  {_render_equation(eq)}")
        stab, period = stream_horizon(system)
        print(f"verified equivalent per coordinate: {'yes' if result.verified else 'NO'}")
        print(f"size bounds respected: {'yes' if result.bound_ok else 'NO'}")
        print(f"(original horizon: stabilization {stab}, period {period})")
    return 0 if result.verified and result.bound_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqpower",
        description="Equation systems over direct powers of finite structures: "
        "solve, compress, and decide the Noetherian property.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("validate", help="check the axioms for a structure's declared kind")
    p.add_argument("structure", help="structure JSON file")
    add_format(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("solve", help="solve a finite equation system over a structure")
    p.add_argument("structure")
    p.add_argument("system", help="finite system JSON file")
    add_format(p)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("project", help="project a power system onto one coordinate")
    p.add_argument("structure")
    p.add_argument("system", help="power system JSON file")
    p.add_argument("--coordinate", type=int, required=True)
    add_format(p)
    p.set_defaults(handler=cmd_project)

    p = sub.add_parser("consistent", help="decide whether a power system has a solution")
    p.add_argument("structure")
    p.add_argument("system", help="power system JSON file")
    add_format(p)
    p.set_defaults(handler=cmd_consistent)

    p = sub.add_parser("noetherian", help="decide the Noetherian property for a direct power")
    p.add_argument("structure")
    add_format(p)
    p.set_defaults(handler=cmd_noetherian)

    p = sub.add_parser("witness", help="expand a refutation certificate into a verified family")
    p.add_argument("structure")
    p.add_argument("--depth", type=int, default=10, help="verify members up to this index")
    add_format(p)
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("wrap", help="compress a staircase system into a finite equivalent")
    p.add_argument("structure", nargs="?")
    p.add_argument("system", nargs="?", help="power system JSON file")
    p.add_argument(
        "--paper-example-1",
        action="store_true",
        help="run the built-in triangle staircase example instead of reading files",
    )
    add_format(p)
    p.set_defaults(handler=cmd_wrap)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage or help
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        InputFormatError,
        SignatureMismatchError,
        InvalidCertificateError,
        UnboundVariableError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
