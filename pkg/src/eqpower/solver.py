"""Atomic equations over a finite structure and the exhaustive solver.

Equations are relation atoms or equality atoms whose arguments are variables
or constants.  Solving enumerates all k^n assignments, which is the intended
operating regime (small universes, one or two variables) and doubles as the
verification oracle for everything built on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterable, Mapping

from .errors import InputFormatError, UnboundVariableError
from .structures import FiniteStructure


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: Any  # a universe label here; a PowerElement or Staircase one level up


Arg = Var | Const


@dataclass(frozen=True)
class RelationAtom:
    symbol: str
    args: tuple[Arg, ...]


@dataclass(frozen=True)
class EqualityAtom:
    lhs: Arg
    rhs: Arg


Equation = RelationAtom | EqualityAtom


def atom_args(eq: Equation) -> tuple[Arg, ...]:
    if isinstance(eq, RelationAtom):
        return eq.args
    return (eq.lhs, eq.rhs)


def rebuild_atom(eq: Equation, args: Iterable[Arg]) -> Equation:
    args = tuple(args)
    if isinstance(eq, RelationAtom):
        return RelationAtom(eq.symbol, args)
    lhs, rhs = args
    return EqualityAtom(lhs, rhs)


def map_constants(eq: Equation, fn: Callable[[Any], Any]) -> Equation:
    return rebuild_atom(eq, (Const(fn(a.value)) if isinstance(a, Const) else a for a in atom_args(eq)))


def equation_variables(eq: Equation) -> tuple[str, ...]:
    seen = []
    for a in atom_args(eq):
        if isinstance(a, Var) and a.name not in seen:
            seen.append(a.name)
    return tuple(seen)


@dataclass(frozen=True)
class Template:
    """Atomic shape: the symbol plus which argument slots are variables.

    Constant slots are anonymized, so two atoms share a template exactly when
    they differ only in their constants.
    """

    kind: str  # "rel" or "eq"
    symbol: str | None
    slots: tuple[Any, ...]  # ("var", name) or ("const",) per argument position

    def const_slot_count(self) -> int:
        return sum(1 for s in self.slots if s == ("const",))


def template_of(eq: Equation) -> Template:
    slots = tuple(("var", a.name) if isinstance(a, Var) else ("const",) for a in atom_args(eq))
    if isinstance(eq, RelationAtom):
        return Template("rel", eq.symbol, slots)
    return Template("eq", None, slots)


def fill_template(template: Template, const_values: Iterable[Any]) -> Equation:
    values = iter(const_values)
    args: list[Arg] = []
    for slot in template.slots:
        if slot == ("const",):
            args.append(Const(next(values)))
        else:
            args.append(Var(slot[1]))
    if template.kind == "rel":
        return RelationAtom(template.symbol, tuple(args))
    lhs, rhs = args
    return EqualityAtom(lhs, rhs)


def const_values(eq: Equation) -> tuple[Any, ...]:
    return tuple(a.value for a in atom_args(eq) if isinstance(a, Const))


@dataclass(frozen=True)
class EquationSystem:
    variables: tuple[str, ...]
    equations: tuple[Equation, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "equations", tuple(self.equations))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variables: {self.variables}")


@dataclass(frozen=True)
class AlgebraicSet:
    """Solution set of a system: all satisfying assignments, as label tuples."""

    variables: tuple[str, ...]
    points: frozenset[tuple[str, ...]]

    @property
    def is_empty(self) -> bool:
        return not self.points

    def sorted_points(self) -> tuple[tuple[str, ...], ...]:
        return tuple(sorted(self.points))


@dataclass(frozen=True)
class ClassId:
    """Equivalence class of an atom: its template plus its exact solution set."""

    template: Template
    points: frozenset[tuple[str, ...]]


def check_equation(structure: FiniteStructure, variables: tuple[str, ...], eq: Equation) -> None:
    """Reject equations that are not well-formed over the structure and variable list."""
    if isinstance(eq, RelationAtom):
        arity = structure.signature.arity(eq.symbol)  # raises KeyError for unknown symbols
        if arity != len(eq.args):
            raise ValueError(f"{eq.symbol!r} expects {arity} arguments, got {len(eq.args)}")
    for a in atom_args(eq):
        if isinstance(a, Var):
            if a.name not in variables:
                raise UnboundVariableError(f"variable {a.name!r} is not declared by the system")
        elif not (isinstance(a.value, str) and structure.has_label(a.value)):
            raise ValueError(f"constant {a.value!r} is not a universe element")


def evaluate(structure: FiniteStructure, eq: Equation, assignment: Mapping[str, str]) -> bool:
    """Truth value of one atom under a total assignment of labels to variables."""

    def value(a: Arg) -> str:
        if isinstance(a, Var):
            try:
                return assignment[a.name]
            except KeyError:
                raise UnboundVariableError(f"no value assigned to variable {a.name!r}") from None
        return a.value

    if isinstance(eq, RelationAtom):
        return structure.holds(eq.symbol, tuple(value(a) for a in eq.args))
    return value(eq.lhs) == value(eq.rhs)


class AtomClassifier:
    """Memoizes per-atom solution sets and class ids over fixed structure and variables."""

    def __init__(self, structure: FiniteStructure, variables: tuple[str, ...]) -> None:
        self.structure = structure
        self.variables = tuple(variables)
        self._solutions: dict[Equation, frozenset[tuple[str, ...]]] = {}

    def solutions(self, eq: Equation) -> frozenset[tuple[str, ...]]:
        cached = self._solutions.get(eq)
        if cached is None:
            check_equation(self.structure, self.variables, eq)
            pts = set()
            for combo in product(self.structure.universe, repeat=len(self.variables)):
                if evaluate(self.structure, eq, dict(zip(self.variables, combo))):
                    pts.add(combo)
            cached = frozenset(pts)
            self._solutions[eq] = cached
        return cached

    def class_of(self, eq: Equation) -> ClassId:
        return ClassId(template_of(eq), self.solutions(eq))

    def system_solutions(self, equations: Iterable[Equation]) -> frozenset[tuple[str, ...]]:
        pts = frozenset(product(self.structure.universe, repeat=len(self.variables)))
        for eq in equations:
            pts &= self.solutions(eq)
            if not pts:
                break
        return pts


def solve(structure: FiniteStructure, system: EquationSystem) -> AlgebraicSet:
    """Exhaustive scan over all assignments; the empty system yields the full space."""
    classifier = AtomClassifier(structure, system.variables)
    return AlgebraicSet(system.variables, classifier.system_solutions(system.equations))


def equivalent(structure: FiniteStructure, first: EquationSystem, second: EquationSystem) -> bool:
    if first.variables != second.variables:
        raise ValueError(f"variable lists differ: {first.variables} vs {second.variables}")
    return solve(structure, first).points == solve(structure, second).points


def class_of(structure: FiniteStructure, eq: Equation, variables: tuple[str, ...]) -> ClassId:
    return AtomClassifier(structure, variables).class_of(eq)


def minimal_inconsistent_subset(structure: FiniteStructure, system: EquationSystem) -> EquationSystem | None:
    """Deletion-minimal inconsistent core, or None when the system has a solution.

    Deterministic: equations are tried for deletion in list order, so the same
    input always yields the same core.
    """
    classifier = AtomClassifier(structure, system.variables)
    if classifier.system_solutions(system.equations):
        return None
    core = list(system.equations)
    for eq in list(core):
        trial = [e for e in core if e != eq]
        if not classifier.system_solutions(trial):
            core = trial
    return EquationSystem(system.variables, tuple(core))


# --- JSON layout -----------------------------------------------------------
#
# {"variables": ["x"], "equations": [
#     {"rel": "E", "args": [{"var": "x"}, {"const": "a"}]},
#     {"eq": [{"var": "x"}, {"const": "a"}]}]}
#
# Constant payload encoding is pluggable so the direct-power layer can reuse
# the exact same shapes with structured constants.


def _encode_base_const(value: Any) -> Any:
    if not isinstance(value, str):
        raise InputFormatError(f"expected a plain universe label, got {value!r}")
    return value


def _decode_base_const(doc: Any) -> Any:
    if not isinstance(doc, str):
        raise InputFormatError(f"constants must be strings, got {doc!r}")
    return doc


def arg_to_json_dict(arg: Arg, encode_const: Callable[[Any], Any] = _encode_base_const) -> dict:
    if isinstance(arg, Var):
        return {"var": arg.name}
    return {"const": encode_const(arg.value)}


def arg_from_json_dict(doc: Any, decode_const: Callable[[Any], Any] = _decode_base_const) -> Arg:
    if not isinstance(doc, Mapping) or len(doc) != 1:
        raise InputFormatError(f"argument must be a single-key object, got {doc!r}")
    ((key, payload),) = doc.items()
    if key == "var":
        if not isinstance(payload, str):
            raise InputFormatError("variable names must be strings")
        return Var(payload)
    if key == "const":
        return Const(decode_const(payload))
    raise InputFormatError(f"argument key must be 'var' or 'const', got {key!r}")


def equation_to_json_dict(eq: Equation, encode_const: Callable[[Any], Any] = _encode_base_const) -> dict:
    if isinstance(eq, RelationAtom):
        return {"rel": eq.symbol, "args": [arg_to_json_dict(a, encode_const) for a in eq.args]}
    return {"eq": [arg_to_json_dict(eq.lhs, encode_const), arg_to_json_dict(eq.rhs, encode_const)]}


def equation_from_json_dict(doc: Any, decode_const: Callable[[Any], Any] = _decode_base_const) -> Equation:
    if not isinstance(doc, Mapping):
        raise InputFormatError(f"equation must be an object, got {doc!r}")
    keys = set(doc)
    if keys == {"rel", "args"}:
        symbol = doc["rel"]
        if not isinstance(symbol, str):
            raise InputFormatError("relation symbol must be a string")
        args = doc["args"]
        if not isinstance(args, list):
            raise InputFormatError("relation args must be a list")
        return RelationAtom(symbol, tuple(arg_from_json_dict(a, decode_const) for a in args))
    if keys == {"eq"}:
        pair = doc["eq"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputFormatError("equality atoms take exactly two arguments")
        return EqualityAtom(
            arg_from_json_dict(pair[0], decode_const), arg_from_json_dict(pair[1], decode_const)
        )
    raise InputFormatError(f"equation must have keys {{'rel','args'}} or {{'eq'}}, got {sorted(keys)}")


def system_to_json_dict(system: EquationSystem) -> dict:
    return {
        "variables": list(system.variables),
        "equations": [equation_to_json_dict(eq) for eq in system.equations],
    }


def system_from_json_dict(doc: Any) -> EquationSystem:
    if not isinstance(doc, Mapping):
        raise InputFormatError("system document must be a JSON object")
    keys = set(doc)
    if keys != {"variables", "equations"}:
        raise InputFormatError(f"system must have keys {{'variables','equations'}}, got {sorted(keys)}")
    variables = doc["variables"]
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise InputFormatError("system variables must be a list of strings")
    equations = doc["equations"]
    if not isinstance(equations, list):
        raise InputFormatError("system equations must be a list")
    return EquationSystem(tuple(variables), tuple(equation_from_json_dict(e) for e in equations))


def algebraic_set_to_json_dict(sols: AlgebraicSet) -> dict:
    return {"variables": list(sols.variables), "solutions": [list(p) for p in sols.sorted_points()]}


def algebraic_set_from_json_dict(doc: Any) -> AlgebraicSet:
    if not isinstance(doc, Mapping) or set(doc) != {"variables", "solutions"}:
        raise InputFormatError("solution document must have keys {'variables','solutions'}")
    return AlgebraicSet(
        tuple(doc["variables"]), frozenset(tuple(p) for p in doc["solutions"])
    )
