"""Direct powers with countably many coordinates: elements, systems, staircase families.

Elements of the power are eventually periodic streams of universe labels,
stored as a finite prefix plus a repeating cycle and kept in canonical form
(shortest prefix, then shortest cycle).  Equation systems over the power may
list equations explicitly and may also include staircase families, which
present one equation per n >= 1 by splicing a repeating generator stream in
front of a shifted tail stream.

Everything decidable here reduces to per-coordinate questions over the base
structure.  The finite horizon used for those reductions is computed from the
input data and re-certified by recomputation, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .errors import InputFormatError
from .solver import (
    AtomClassifier,
    ClassId,
    Const,
    Equation,
    EquationSystem,
    Var,
    atom_args,
    equation_from_json_dict,
    equation_to_json_dict,
    evaluate,
    map_constants,
    minimal_inconsistent_subset,
    rebuild_atom,
)
from .structures import FiniteStructure


def _primitive_cycle(cycle: tuple[str, ...]) -> tuple[str, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


def _canonical(prefix: tuple[str, ...], cycle: tuple[str, ...]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    cycle = _primitive_cycle(cycle)
    # absorb prefix entries that already agree with the rotated cycle
    while prefix and prefix[-1] == cycle[-1]:
        cycle = (cycle[-1],) + cycle[:-1]
        prefix = prefix[:-1]
    return prefix, cycle


@dataclass(frozen=True)
class PowerElement:
    """Eventually periodic stream: prefix entries, then the cycle forever.

    Construction canonicalizes, so structural equality coincides with equality
    of the streams themselves.
    """

    prefix: tuple[str, ...] = ()
    cycle: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        prefix = tuple(str(v) for v in self.prefix)
        cycle = tuple(str(v) for v in self.cycle)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        prefix, cycle = _canonical(prefix, cycle)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    def at(self, i: int) -> str:
        if i < 0:
            raise IndexError("coordinates are numbered from 0")
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def values(self) -> frozenset[str]:
        return frozenset(self.prefix) | frozenset(self.cycle)

    def __str__(self) -> str:
        body = ",".join(self.prefix)
        loop = ",".join(self.cycle)
        return f"[{body}{',' if body else ''}({loop})]"


def power_at(element: PowerElement, i: int) -> str:
    return element.at(i)


def constant_stream(value: str) -> PowerElement:
    return PowerElement((), (value,))


@dataclass(frozen=True)
class Staircase:
    """Descriptor for one constant slot of a staircase family.

    Member n takes coordinates 0..n-2 from the repeating generator stream and
    every later coordinate from the tail stream restarted at its beginning, so
    member 1 is exactly the tail.
    """

    generator: tuple[str, ...]
    tail: PowerElement

    def __post_init__(self) -> None:
        object.__setattr__(self, "generator", tuple(str(v) for v in self.generator))
        if not self.generator:
            raise ValueError("generator must be nonempty")

    def generator_at(self, i: int) -> str:
        return self.generator[i % len(self.generator)]

    def member_constant(self, n: int) -> PowerElement:
        if n < 1:
            raise ValueError("family members are numbered from 1")
        head = tuple(self.generator_at(i) for i in range(n - 1))
        return PowerElement(head + self.tail.prefix, self.tail.cycle)

    def value_at(self, n: int, i: int) -> str:
        """Coordinate i of member n's constant, computed without building the member."""
        if i <= n - 2:
            return self.generator_at(i)
        return self.tail.at(i - (n - 1))


@dataclass(frozen=True)
class StaircaseFamily:
    """One equation per n >= 1, all sharing a template; constants follow Staircase descriptors."""

    atom: Equation  # Const args hold Staircase descriptors

    def descriptors(self) -> tuple[Staircase, ...]:
        return tuple(a.value for a in atom_args(self.atom) if isinstance(a, Const))

    def member(self, n: int) -> Equation:
        return map_constants(self.atom, lambda s: s.member_constant(n))

    def projected_member(self, n: int, i: int) -> Equation:
        """Base-structure equation pi_i(member n)."""
        if n < 1:
            raise ValueError("family members are numbered from 1")
        return map_constants(self.atom, lambda s: s.value_at(n, i))


@dataclass(frozen=True)
class PowerSystem:
    """Equations over the direct power: an explicit list plus staircase families."""

    variables: tuple[str, ...]
    explicit: tuple[Equation, ...] = ()
    families: tuple[StaircaseFamily, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "explicit", tuple(self.explicit))
        object.__setattr__(self, "families", tuple(self.families))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variables: {self.variables}")

    @property
    def is_empty(self) -> bool:
        return not self.explicit and not self.families


def project_equation(eq: Equation, i: int) -> Equation:
    """Replace every stream constant by its value at coordinate i."""
    if i < 0:
        raise IndexError("coordinates are numbered from 0")
    return map_constants(eq, lambda v: v.at(i) if isinstance(v, PowerElement) else v)


@dataclass(frozen=True)
class SourceRef:
    """Where a projected equation came from: an explicit equation or a family member."""

    kind: str  # "explicit" or "family"
    index: int
    member: int | None = None

    def to_json_dict(self) -> dict:
        if self.kind == "explicit":
            return {"explicit": self.index}
        return {"family": self.index, "member": self.member}

    @staticmethod
    def from_json_dict(doc: Mapping) -> "SourceRef":
        if set(doc) == {"explicit"}:
            return SourceRef("explicit", int(doc["explicit"]))
        if set(doc) == {"family", "member"}:
            return SourceRef("family", int(doc["family"]), int(doc["member"]))
        raise InputFormatError(f"bad source reference {doc!r}")


def resolve_source(system: PowerSystem, ref: SourceRef) -> Equation:
    """The power equation a SourceRef points at."""
    if ref.kind == "explicit":
        return system.explicit[ref.index]
    return system.families[ref.index].member(ref.member)


def projection_entries(system: PowerSystem, i: int) -> list[tuple[Equation, SourceRef]]:
    """Distinct equations of pi_i(system), each with its earliest source.

    Order is canonical: explicit equations by index, then families by index
    with members by ascending n.  At coordinate i members beyond n = i + 2
    repeat the n = i + 2 projection, so the scan stops there.
    """
    seen: set[Equation] = set()
    out: list[tuple[Equation, SourceRef]] = []
    for idx, eq in enumerate(system.explicit):
        atom = project_equation(eq, i)
        if atom not in seen:
            seen.add(atom)
            out.append((atom, SourceRef("explicit", idx)))
    for fidx, fam in enumerate(system.families):
        for n in range(1, i + 3):
            atom = fam.projected_member(n, i)
            if atom not in seen:
                seen.add(atom)
                out.append((atom, SourceRef("family", fidx, n)))
    return out


def projected_system(system: PowerSystem, i: int) -> EquationSystem:
    """pi_i of the whole system as a base equation system (distinct equations)."""
    return EquationSystem(system.variables, tuple(atom for atom, _ in projection_entries(system, i)))


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def stream_horizon(system: PowerSystem) -> tuple[int, int]:
    """(stabilization, period) bounding when per-coordinate projections repeat.

    Stabilization covers every explicit constant prefix and, per family, one
    full pass of the joint tail streams (new tail values stop appearing after
    max prefix + lcm of tail cycles).  The period is the lcm of all cycle
    lengths: explicit constants, family tails, family generators.
    """
    stab = [0]
    periods = [1]
    for eq in system.explicit:
        for value in (a.value for a in atom_args(eq) if isinstance(a, Const)):
            if isinstance(value, PowerElement):
                stab.append(len(value.prefix))
                periods.append(len(value.cycle))
    for fam in system.families:
        descs = fam.descriptors()
        if not descs:
            continue
        tail_pref = max(len(s.tail.prefix) for s in descs)
        tail_cycles = _lcm(len(s.tail.cycle) for s in descs)
        stab.append(tail_pref + tail_cycles)
        periods.append(tail_cycles)
        periods.append(_lcm(len(s.generator) for s in descs))
    return max(stab), _lcm(periods)


def projected_classes(
    structure: FiniteStructure, system: PowerSystem, i: int, classifier: AtomClassifier | None = None
) -> frozenset[ClassId]:
    """Class ids occurring in pi_i(system), computed directly from the data."""
    classifier = classifier or AtomClassifier(structure, system.variables)
    return frozenset(classifier.class_of(atom) for atom, _ in projection_entries(system, i))


@dataclass(frozen=True)
class CoordinateProfile:
    """Per-coordinate class sets: exact up to stabilization + period, repeating after.

    The repeat is certified at construction by recomputing one extra period and
    comparing, so callers may rely on classes_at for every coordinate.
    """

    stabilization: int
    period: int
    table: tuple[frozenset[ClassId], ...]  # length stabilization + period

    def classes_at(self, i: int) -> frozenset[ClassId]:
        if i < len(self.table):
            return self.table[i]
        return self.table[self.stabilization + (i - self.stabilization) % self.period]


def coordinate_profile(structure: FiniteStructure, system: PowerSystem) -> CoordinateProfile:
    stab, period = stream_horizon(system)
    classifier = AtomClassifier(structure, system.variables)
    table = tuple(projected_classes(structure, system, i, classifier) for i in range(stab + period))
    for i in range(stab, stab + period):
        if projected_classes(structure, system, i + period, classifier) != table[i]:
            raise RuntimeError(
                f"profile period certification failed at coordinate {i}; this is a bug"
            )
    return CoordinateProfile(stab, period, table)


def _point_horizon(system_stab: int, system_period: int, point: Sequence[PowerElement]) -> tuple[int, int]:
    stab = max([system_stab] + [len(pe.prefix) for pe in point])
    period = _lcm([system_period] + [len(pe.cycle) for pe in point])
    return stab, period


def satisfies(structure: FiniteStructure, system: PowerSystem, point: Sequence[PowerElement]) -> bool:
    """Exact membership of the point in the system's solution set.

    Coordinates below the joint stabilization + period of system and point are
    checked outright; beyond that both sides repeat, so the answer is exact.
    """
    if len(point) != len(system.variables):
        raise ValueError(f"point has {len(point)} entries for variables {system.variables}")
    stab, period = _point_horizon(*stream_horizon(system), point)
    for i in range(stab + period):
        assignment = {v: pe.at(i) for v, pe in zip(system.variables, point)}
        for atom, _ in projection_entries(system, i):
            if not evaluate(structure, atom, assignment):
                return False
    return True


@dataclass(frozen=True)
class InconsistencyCertificate:
    """A coordinate whose projection has no solution, with a minimal core.

    The core lists projected base equations; sources point back at the
    explicit equations or family members they came from, and lifted contains
    those power equations themselves (a finite inconsistent subsystem).
    """

    coordinate: int
    core: EquationSystem
    sources: tuple[SourceRef, ...]
    lifted: tuple[Equation, ...]


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    certificate: InconsistencyCertificate | None = None


def consistent(structure: FiniteStructure, system: PowerSystem) -> ConsistencyVerdict:
    """A system solves iff every coordinate projection solves; first failure certifies."""
    stab, period = stream_horizon(system)
    classifier = AtomClassifier(structure, system.variables)
    for i in range(stab + period):
        entries = projection_entries(system, i)
        if classifier.system_solutions(atom for atom, _ in entries):
            continue
        refs = dict(entries)
        core = minimal_inconsistent_subset(
            structure, EquationSystem(system.variables, tuple(atom for atom, _ in entries))
        )
        sources = tuple(refs[atom] for atom in core.equations)
        lifted = tuple(resolve_source(system, ref) for ref in sources)
        return ConsistencyVerdict(False, InconsistencyCertificate(i, core, sources, lifted))
    return ConsistencyVerdict(True)


def power_systems_equivalent(structure: FiniteStructure, first: PowerSystem, second: PowerSystem) -> bool:
    """Whether both systems carve out the same solution set in the power.

    Two inconsistent systems are equivalent regardless of where they fail;
    otherwise the per-coordinate solution sets must agree everywhere, checked
    over the joint horizon.
    """
    if first.variables != second.variables:
        raise ValueError(f"variable lists differ: {first.variables} vs {second.variables}")
    a = consistent(structure, first)
    b = consistent(structure, second)
    if not a.consistent or not b.consistent:
        return a.consistent == b.consistent
    stab_a, per_a = stream_horizon(first)
    stab_b, per_b = stream_horizon(second)
    stab, period = max(stab_a, stab_b), math.lcm(per_a, per_b)
    classifier = AtomClassifier(structure, first.variables)
    for i in range(stab + period):
        sols_a = classifier.system_solutions(atom for atom, _ in projection_entries(first, i))
        sols_b = classifier.system_solutions(atom for atom, _ in projection_entries(second, i))
        if sols_a != sols_b:
            return False
    return True


# --- JSON layout -----------------------------------------------------------
#
# {"variables": ["x"], "equations": [
#     {"rel": "E", "args": [{"var": "x"}, {"const": {"prefix": ["b"], "cycle": ["a"]}}]},
#     {"family": {"rel": "E", "args": [{"var": "x"},
#         {"staircase": {"generator": ["b", "c"], "tail": {"prefix": [], "cycle": ["a"]}}}]}}]}


def power_element_to_json_dict(pe: PowerElement) -> dict:
    return {"prefix": list(pe.prefix), "cycle": list(pe.cycle)}


def power_element_from_json_dict(doc: Any) -> PowerElement:
    if not isinstance(doc, Mapping) or set(doc) != {"prefix", "cycle"}:
        raise InputFormatError(f"stream constants must have keys {{'prefix','cycle'}}, got {doc!r}")
    prefix, cycle = doc["prefix"], doc["cycle"]
    if not isinstance(prefix, list) or not isinstance(cycle, list):
        raise InputFormatError("stream prefix and cycle must be lists")
    if not all(isinstance(v, str) for v in prefix + cycle):
        raise InputFormatError("stream entries must be strings")
    if not cycle:
        raise InputFormatError("stream cycle must be nonempty")
    return PowerElement(tuple(prefix), tuple(cycle))


def _encode_power_const(value: Any) -> Any:
    if not isinstance(value, PowerElement):
        raise InputFormatError(f"expected a stream constant, got {value!r}")
    return power_element_to_json_dict(value)


def _decode_power_const(doc: Any) -> Any:
    return power_element_from_json_dict(doc)


def staircase_to_json_dict(s: Staircase) -> dict:
    return {"generator": list(s.generator), "tail": power_element_to_json_dict(s.tail)}


def staircase_from_json_dict(doc: Any) -> Staircase:
    if not isinstance(doc, Mapping) or set(doc) != {"generator", "tail"}:
        raise InputFormatError(f"staircase must have keys {{'generator','tail'}}, got {doc!r}")
    generator = doc["generator"]
    if not isinstance(generator, list) or not all(isinstance(v, str) for v in generator) or not generator:
        raise InputFormatError("staircase generator must be a nonempty list of strings")
    return Staircase(tuple(generator), power_element_from_json_dict(doc["tail"]))


def family_to_json_dict(fam: StaircaseFamily) -> dict:
    body = equation_to_json_dict(fam.atom, staircase_to_json_dict)

    # constant slots carry staircase descriptors, so rename their payload key
    def rewrite(entry: Any) -> Any:
        if isinstance(entry, Mapping) and set(entry) == {"const"}:
            return {"staircase": entry["const"]}
        return entry

    if "args" in body:
        body["args"] = [rewrite(a) for a in body["args"]]
    else:
        body["eq"] = [rewrite(a) for a in body["eq"]]
    return {"family": body}


def family_from_json_dict(doc: Any) -> StaircaseFamily:
    if not isinstance(doc, Mapping) or set(doc) != {"family"}:
        raise InputFormatError(f"family entries must have the single key 'family', got {doc!r}")
    body = doc["family"]
    if not isinstance(body, Mapping):
        raise InputFormatError("family body must be an object")
    # translate staircase args into const args, then decode payloads
    def translate(entry: Any) -> Any:
        if isinstance(entry, Mapping) and set(entry) == {"staircase"}:
            return {"const": entry["staircase"]}
        if isinstance(entry, Mapping) and set(entry) == {"var"}:
            return entry
        raise InputFormatError(f"family arguments must be 'var' or 'staircase', got {entry!r}")

    body = dict(body)
    if set(body) == {"rel", "args"}:
        if not isinstance(body["args"], list):
            raise InputFormatError("family args must be a list")
        body["args"] = [translate(a) for a in body["args"]]
    elif set(body) == {"eq"}:
        if not isinstance(body["eq"], list) or len(body["eq"]) != 2:
            raise InputFormatError("family equality atoms take exactly two arguments")
        body["eq"] = [translate(a) for a in body["eq"]]
    else:
        raise InputFormatError(
            f"family body must have keys {{'rel','args'}} or {{'eq'}}, got {sorted(body)}"
        )
    atom = equation_from_json_dict(body, staircase_from_json_dict)
    return StaircaseFamily(atom)


def power_equation_to_json_dict(eq: Equation) -> dict:
    return equation_to_json_dict(eq, _encode_power_const)


def power_system_to_json_dict(system: PowerSystem) -> dict:
    entries: list[dict] = [power_equation_to_json_dict(eq) for eq in system.explicit]
    entries += [family_to_json_dict(fam) for fam in system.families]
    return {"variables": list(system.variables), "equations": entries}


def power_system_from_json_dict(doc: Any) -> PowerSystem:
    if not isinstance(doc, Mapping):
        raise InputFormatError("system document must be a JSON object")
    if set(doc) != {"variables", "equations"}:
        raise InputFormatError(
            f"system must have keys {{'variables','equations'}}, got {sorted(set(doc))}"
        )
    variables = doc["variables"]
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise InputFormatError("system variables must be a list of strings")
    entries = doc["equations"]
    if not isinstance(entries, list):
        raise InputFormatError("system equations must be a list")
    explicit = []
    families = []
    for entry in entries:
        if isinstance(entry, Mapping) and set(entry) == {"family"}:
            families.append(family_from_json_dict(entry))
        else:
            explicit.append(equation_from_json_dict(entry, _decode_power_const))
    return PowerSystem(tuple(variables), tuple(explicit), tuple(families))
