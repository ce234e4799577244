"""Compress an infinite staircase-presented system into a finite equivalent one.

The construction works per solution set of projected equations: collect one
representative equation per distinct solution set (with a source equation
realizing it), seed the output with the chosen sources, then add one equation
per solution set whose coordinate stream follows that set wherever it occurs
and falls back to the source stream elsewhere.  The output is equivalent to
the input coordinate by coordinate, which verify_wrap checks exhaustively over
a certified horizon.

Because there are at most 2^(k^n) solution sets over a k-element structure and
n variables, the output never exceeds 2^(k^n + 1) equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InputFormatError
from .power import (
    CoordinateProfile,
    PowerElement,
    PowerSystem,
    SourceRef,
    coordinate_profile,
    power_equation_to_json_dict,
    power_system_from_json_dict,
    power_system_to_json_dict,
    projection_entries,
    project_equation,
    resolve_source,
    stream_horizon,
)
from .solver import (
    AtomClassifier,
    Const,
    Equation,
    atom_args,
    equation_from_json_dict,
    equation_to_json_dict,
    fill_template,
    template_of,
)
from .structures import FiniteStructure

SolutionSet = frozenset[tuple[str, ...]]


@dataclass(frozen=True)
class EventuallyPeriodicIndexSet:
    """Set of coordinates given by explicit prefix membership plus a repeating cycle."""

    prefix: tuple[bool, ...]
    cycle: tuple[bool, ...]

    def __post_init__(self) -> None:
        if not self.cycle:
            raise ValueError("cycle must be nonempty")

    def contains(self, i: int) -> bool:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def complement(self) -> "EventuallyPeriodicIndexSet":
        return EventuallyPeriodicIndexSet(
            tuple(not b for b in self.prefix), tuple(not b for b in self.cycle)
        )

    def to_json_dict(self) -> dict:
        return {"prefix": list(self.prefix), "cycle": list(self.cycle)}

    @staticmethod
    def from_json_dict(doc: Mapping) -> "EventuallyPeriodicIndexSet":
        return EventuallyPeriodicIndexSet(
            tuple(bool(b) for b in doc["prefix"]), tuple(bool(b) for b in doc["cycle"])
        )


@dataclass(frozen=True)
class ClassRep:
    """One projected solution set with a representative equation and where it came from."""

    solutions: SolutionSet
    representative: Equation  # the source's projection at the coordinate
    coordinate: int
    source: SourceRef


@dataclass(frozen=True)
class WrapStep:
    representative: int  # index into the representatives list
    match: EventuallyPeriodicIndexSet  # coordinates where the solution set occurs
    merged: Equation  # the built power equation for this solution set


@dataclass(frozen=True)
class WrapTrace:
    stabilization: int
    period: int
    representatives: tuple[ClassRep, ...]
    seeds: tuple[Equation, ...]  # chosen source equations, deduplicated
    steps: tuple[WrapStep, ...]

    def source_pairs(self) -> tuple[tuple[int, SourceRef], ...]:
        return tuple((rep.coordinate, rep.source) for rep in self.representatives)


@dataclass(frozen=True)
class CoordinateMismatch:
    coordinate: int
    original_solutions: tuple[tuple[str, ...], ...]
    wrapped_solutions: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class WrapVerification:
    passed: bool
    horizon: int  # strict per-coordinate checks ran for i < horizon
    period: int  # and again for one extra period to re-certify the repeat
    mismatches: tuple[CoordinateMismatch, ...]


@dataclass(frozen=True)
class WrapResult:
    wrapped: PowerSystem
    trace: WrapTrace
    verified: bool
    bound_ok: bool


def _solution_sets(profile: CoordinateProfile, i: int) -> frozenset[SolutionSet]:
    return frozenset(cid.points for cid in profile.classes_at(i))


def _own_horizon(eq: Equation) -> int:
    """Coordinates after which a power equation's projections only repeat."""
    prefixes = [0]
    cycles = [1]
    for arg in atom_args(eq):
        if isinstance(arg, Const) and isinstance(arg.value, PowerElement):
            prefixes.append(len(arg.value.prefix))
            cycles.append(len(arg.value.cycle))
    out = 1
    for c in cycles:
        out = math.lcm(out, c)
    return max(prefixes) + out


def _candidates(system: PowerSystem, horizon: int) -> list[tuple[SourceRef, Equation]]:
    out = [(SourceRef("explicit", idx), eq) for idx, eq in enumerate(system.explicit)]
    for fidx, fam in enumerate(system.families):
        for n in range(1, horizon + 2):
            out.append((SourceRef("family", fidx, n), fam.member(n)))
    return out


def class_representatives(
    structure: FiniteStructure, system: PowerSystem, profile: CoordinateProfile | None = None
) -> tuple[ClassRep, ...]:
    """One representative per projected solution set, sources chosen greedily.

    Sets are ordered by first occurrence in the coordinate scan.  Sources are
    picked by repeatedly taking the candidate (explicit equations first, then
    family members by ascending index and n) that realizes the most still
    uncovered sets; each set then gets the least coordinate at which its
    chosen source realizes it.
    """
    profile = profile or coordinate_profile(structure, system)
    horizon = profile.stabilization + profile.period
    classifier = AtomClassifier(structure, system.variables)

    discovery: list[SolutionSet] = []
    seen: set[SolutionSet] = set()
    for i in range(horizon):
        for atom, _ in projection_entries(system, i):
            sols = classifier.solutions(atom)
            if sols not in seen:
                seen.add(sols)
                discovery.append(sols)

    # least coordinate per solution set realized by each candidate source
    coverage: list[tuple[SourceRef, Equation, dict[SolutionSet, int]]] = []
    for ref, eq in _candidates(system, horizon):
        realized: dict[SolutionSet, int] = {}
        for i in range(_own_horizon(eq)):
            sols = classifier.solutions(project_equation(eq, i))
            if sols in seen and sols not in realized:
                realized[sols] = i
        coverage.append((ref, eq, realized))

    uncovered = set(discovery)
    assignment: dict[SolutionSet, tuple[int, SourceRef, Equation]] = {}
    while uncovered:
        best = None
        best_gain = 0
        for ref, eq, realized in coverage:
            gain = sum(1 for sols in realized if sols in uncovered)
            if gain > best_gain:
                best, best_gain = (ref, eq, realized), gain
        if best is None:
            raise RuntimeError("uncovered projected solution set without a source; this is a bug")
        ref, eq, realized = best
        for sols, least_i in realized.items():
            if sols in uncovered:
                uncovered.discard(sols)
                assignment[sols] = (least_i, ref, eq)

    reps = []
    for sols in discovery:
        coord, ref, eq = assignment[sols]
        representative = project_equation(eq, coord)
        if classifier.solutions(representative) != sols:
            raise RuntimeError("representative does not realize its solution set; this is a bug")
        reps.append(ClassRep(sols, representative, coord, ref))
    return tuple(reps)


def seed_equations(
    structure: FiniteStructure, system: PowerSystem, reps: Iterable[ClassRep]
) -> tuple[Equation, ...]:
    """The chosen source equations, deduplicated in first-use order.

    Every representative solution set must occur among the projections of the
    seeds; that is rechecked here rather than assumed.
    """
    seeds: list[Equation] = []
    for rep in reps:
        eq = resolve_source(system, rep.source)
        if eq not in seeds:
            seeds.append(eq)
    classifier = AtomClassifier(structure, system.variables)
    for rep in reps:
        eq = resolve_source(system, rep.source)
        if classifier.solutions(project_equation(eq, rep.coordinate)) != rep.solutions:
            raise RuntimeError("seed equations do not realize every solution set; this is a bug")
    return tuple(seeds)


def _merged_equation(
    rep: ClassRep, source_eq: Equation, match: EventuallyPeriodicIndexSet, stab: int, period: int
) -> Equation:
    """Per-set equation: the set's value where it occurs, the source value elsewhere."""
    template = template_of(rep.representative)
    slots = [a.value for a in atom_args(source_eq) if isinstance(a, Const)]
    merged_values = []
    for slot in slots:
        if not isinstance(slot, PowerElement):
            raise ValueError("wrap needs explicit stream constants in source equations")
        rep_value = slot.at(rep.coordinate)
        pre_len = max(stab, len(slot.prefix))
        cyc_len = math.lcm(period, len(slot.cycle))
        prefix = tuple(rep_value if match.contains(l) else slot.at(l) for l in range(pre_len))
        cycle = tuple(
            rep_value if match.contains(l) else slot.at(l) for l in range(pre_len, pre_len + cyc_len)
        )
        merged_values.append(PowerElement(prefix, cycle))
    return fill_template(template, merged_values)


def wrap(structure: FiniteStructure, system: PowerSystem) -> WrapResult:
    """Compute the finite equivalent system plus the full construction trace."""
    profile = coordinate_profile(structure, system)
    stab, period = profile.stabilization, profile.period
    reps = class_representatives(structure, system, profile)
    seeds = seed_equations(structure, system, reps)

    steps = []
    for idx, rep in enumerate(reps):
        match = EventuallyPeriodicIndexSet(
            tuple(rep.solutions in _solution_sets(profile, i) for i in range(stab)),
            tuple(rep.solutions in _solution_sets(profile, stab + t) for t in range(period)),
        )
        source_eq = resolve_source(system, rep.source)
        steps.append(WrapStep(idx, match, _merged_equation(rep, source_eq, match, stab, period)))

    equations: list[Equation] = []
    for eq in list(seeds) + [st.merged for st in steps]:
        if eq not in equations:  # canonical stream form makes this structural equality
            equations.append(eq)
    wrapped = PowerSystem(system.variables, tuple(equations), ())

    trace = WrapTrace(stab, period, reps, seeds, tuple(steps))
    verification = verify_wrap(structure, system, wrapped)
    bound_ok = check_size_bounds(structure, system, reps, wrapped)
    return WrapResult(wrapped, trace, verification.passed, bound_ok)


def verify_wrap(
    structure: FiniteStructure, original: PowerSystem, wrapped: PowerSystem
) -> WrapVerification:
    """Per-coordinate equivalence over the joint horizon, plus one extra period."""
    if original.variables != wrapped.variables:
        raise ValueError("variable lists differ between original and wrapped systems")
    stab_a, per_a = stream_horizon(original)
    stab_b, per_b = stream_horizon(wrapped)
    stab, period = max(stab_a, stab_b), math.lcm(per_a, per_b)
    classifier = AtomClassifier(structure, original.variables)
    mismatches = []
    for i in range(stab + 2 * period):
        sols_orig = classifier.system_solutions(a for a, _ in projection_entries(original, i))
        sols_wrap = classifier.system_solutions(a for a, _ in projection_entries(wrapped, i))
        if sols_orig != sols_wrap:
            mismatches.append(
                CoordinateMismatch(i, tuple(sorted(sols_orig)), tuple(sorted(sols_wrap)))
            )
    return WrapVerification(not mismatches, stab + period, period, tuple(mismatches))


def check_size_bounds(
    structure: FiniteStructure, system: PowerSystem, reps: Iterable[ClassRep], wrapped: PowerSystem
) -> bool:
    """At most one set per subset of assignment space; at most 2 output equations per set."""
    reps = tuple(reps)
    cells = structure.size ** len(system.variables)
    return len(reps) <= 2 ** cells and len(wrapped.explicit) <= 2 * max(1, len(reps))


# --- JSON layout -----------------------------------------------------------


def class_rep_to_json_dict(rep: ClassRep) -> dict:
    return {
        "solutions": [list(p) for p in sorted(rep.solutions)],
        "equation": equation_to_json_dict(rep.representative),
        "coordinate": rep.coordinate,
        "source": rep.source.to_json_dict(),
    }


def class_rep_from_json_dict(doc: Mapping) -> ClassRep:
    return ClassRep(
        frozenset(tuple(p) for p in doc["solutions"]),
        equation_from_json_dict(doc["equation"]),
        int(doc["coordinate"]),
        SourceRef.from_json_dict(doc["source"]),
    )


def wrap_result_to_json_dict(result: WrapResult) -> dict:
    trace = result.trace
    return {
        "wrapped": power_system_to_json_dict(result.wrapped),
        "verified": result.verified,
        "bound_ok": result.bound_ok,
        "trace": {
            "stabilization": trace.stabilization,
            "period": trace.period,
            "representatives": [class_rep_to_json_dict(rep) for rep in trace.representatives],
            "source_pairs": [
                {"coordinate": coord, "source": ref.to_json_dict()}
                for coord, ref in trace.source_pairs()
            ],
            "seeds": [power_equation_to_json_dict(eq) for eq in trace.seeds],
            "steps": [
                {
                    "representative": st.representative,
                    "match": st.match.to_json_dict(),
                    "other": st.match.complement().to_json_dict(),
                    "merged": power_equation_to_json_dict(st.merged),
                }
                for st in trace.steps
            ],
        },
    }


def wrap_result_from_json_dict(doc: Mapping) -> WrapResult:
    from .power import _decode_power_const  # shared constant decoding

    if not isinstance(doc, Mapping) or set(doc) != {"wrapped", "verified", "bound_ok", "trace"}:
        raise InputFormatError("wrap result must have keys {'wrapped','verified','bound_ok','trace'}")
    tdoc = doc["trace"]
    reps = tuple(class_rep_from_json_dict(r) for r in tdoc["representatives"])
    seeds = tuple(equation_from_json_dict(e, _decode_power_const) for e in tdoc["seeds"])
    steps = tuple(
        WrapStep(
            int(s["representative"]),
            EventuallyPeriodicIndexSet.from_json_dict(s["match"]),
            equation_from_json_dict(s["merged"], _decode_power_const),
        )
        for s in tdoc["steps"]
    )
    trace = WrapTrace(int(tdoc["stabilization"]), int(tdoc["period"]), reps, seeds, steps)
    return WrapResult(
        power_system_from_json_dict(doc["wrapped"]),
        trace,
        bool(doc["verified"]),
        bool(doc["bound_ok"]),
    )
