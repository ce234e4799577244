"""Equation systems over direct powers of finite structures.

The library decides whether the direct power of a finite graph, poset, or
matroid is equationally Noetherian, expands every negative answer into a
verified witness family, and compresses staircase-presented infinite systems
into finite equivalents with a machine-checkable trace.
"""

from .errors import (
    InputFormatError,
    InvalidCertificateError,
    SignatureMismatchError,
    UnboundVariableError,
)
from .fixtures import (
    antichain_poset,
    chain_poset,
    complete_graph,
    cycle_graph,
    free_matroid,
    path_graph,
    rank_one_matroid,
    staircase_demo_system,
    triangle_graph,
)
from .noetherian import (
    NO_OBSTRUCTION_FOUND,
    NOETHERIAN,
    NOT_NOETHERIAN,
    NoetherianVerdict,
    WitnessPackage,
    build_witness_family,
    first_violated_member,
    graph_quasi_identity,
    graph_structural_check,
    matroid_independent_triple,
    poset_strict_pair,
    power_noetherian,
    verify_witness,
)
from .power import (
    ConsistencyVerdict,
    CoordinateProfile,
    InconsistencyCertificate,
    PowerElement,
    PowerSystem,
    SourceRef,
    Staircase,
    StaircaseFamily,
    consistent,
    constant_stream,
    coordinate_profile,
    power_system_from_json_dict,
    power_system_to_json_dict,
    power_systems_equivalent,
    project_equation,
    projected_system,
    satisfies,
    stream_horizon,
)
from .solver import (
    AlgebraicSet,
    AtomClassifier,
    ClassId,
    Const,
    EqualityAtom,
    Equation,
    EquationSystem,
    RelationAtom,
    Template,
    Var,
    class_of,
    equivalent,
    evaluate,
    minimal_inconsistent_subset,
    solve,
    system_from_json_dict,
    system_to_json_dict,
)
from .structures import (
    FiniteStructure,
    Signature,
    ValidationReport,
    graph_from_edges,
    graph_signature,
    matroid_signature,
    matroid_underlying_graph,
    poset_signature,
    star_bipartite_graph,
    structure_from_json_dict,
    structure_to_json_dict,
    validate,
)
from .wrap import (
    ClassRep,
    EventuallyPeriodicIndexSet,
    WrapResult,
    WrapTrace,
    WrapVerification,
    check_size_bounds,
    class_representatives,
    verify_wrap,
    wrap,
    wrap_result_from_json_dict,
    wrap_result_to_json_dict,
)

__all__ = [
    "AlgebraicSet",
    "AtomClassifier",
    "ClassId",
    "ClassRep",
    "ConsistencyVerdict",
    "Const",
    "CoordinateProfile",
    "EqualityAtom",
    "Equation",
    "EquationSystem",
    "EventuallyPeriodicIndexSet",
    "FiniteStructure",
    "InconsistencyCertificate",
    "InputFormatError",
    "InvalidCertificateError",
    "NO_OBSTRUCTION_FOUND",
    "NOETHERIAN",
    "NOT_NOETHERIAN",
    "NoetherianVerdict",
    "PowerElement",
    "PowerSystem",
    "RelationAtom",
    "Signature",
    "SignatureMismatchError",
    "SourceRef",
    "Staircase",
    "StaircaseFamily",
    "Template",
    "UnboundVariableError",
    "ValidationReport",
    "Var",
    "WitnessPackage",
    "WrapResult",
    "WrapTrace",
    "WrapVerification",
    "antichain_poset",
    "build_witness_family",
    "chain_poset",
    "check_size_bounds",
    "class_of",
    "class_representatives",
    "complete_graph",
    "consistent",
    "constant_stream",
    "coordinate_profile",
    "cycle_graph",
    "equivalent",
    "evaluate",
    "first_violated_member",
    "free_matroid",
    "graph_from_edges",
    "graph_quasi_identity",
    "graph_signature",
    "graph_structural_check",
    "matroid_independent_triple",
    "matroid_signature",
    "matroid_underlying_graph",
    "minimal_inconsistent_subset",
    "path_graph",
    "poset_signature",
    "poset_strict_pair",
    "power_noetherian",
    "rank_one_matroid",
    "power_system_from_json_dict",
    "power_system_to_json_dict",
    "power_systems_equivalent",
    "project_equation",
    "projected_system",
    "satisfies",
    "solve",
    "staircase_demo_system",
    "star_bipartite_graph",
    "stream_horizon",
    "structure_from_json_dict",
    "structure_to_json_dict",
    "system_from_json_dict",
    "system_to_json_dict",
    "triangle_graph",
    "validate",
    "verify_witness",
    "verify_wrap",
    "wrap",
    "wrap_result_from_json_dict",
    "wrap_result_to_json_dict",
]
