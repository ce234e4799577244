"""Verdicts on whether a direct power keeps the finite-subsystem property.

For a finite graph the power is equationally Noetherian exactly when every
walk of length three closes back to its start (a quasi-identity over all
vertex quadruples, repeats included).  For matroids the same criterion runs on
the underlying graph of independent pairs after ruling out independent
triples.  For posets any strict pair already refutes the property; no
sufficient condition is known here, so the positive answer stays an open
NO_OBSTRUCTION_FOUND rather than NOETHERIAN.

Every negative verdict carries a certificate, and every certificate expands
into a concrete witness family: an infinite staircase system none of whose
finite truncations is equivalent to the whole.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from .errors import InputFormatError, InvalidCertificateError
from .power import (
    PowerElement,
    PowerSystem,
    Staircase,
    StaircaseFamily,
    family_from_json_dict,
    family_to_json_dict,
    satisfies,
)
from .solver import Const, RelationAtom, Var
from .structures import (
    FiniteStructure,
    GRAPH_EDGE_SYMBOL,
    POSET_ORDER_SYMBOL,
    adjacency,
    graph_distances,
    has_triangle,
    matroid_underlying_graph,
    validate,
)

NOETHERIAN = "NOETHERIAN"
NOT_NOETHERIAN = "NOT_NOETHERIAN"
NO_OBSTRUCTION_FOUND = "NO_OBSTRUCTION_FOUND"


@dataclass(frozen=True)
class NoetherianVerdict:
    status: str
    kind: str
    certificate_kind: str | None = None  # "quadruple", "triple", or "pair"
    certificate: tuple[str, ...] | None = None
    transcript: str | None = None

    def to_json_dict(self) -> dict:
        doc: dict[str, Any] = {"status": self.status, "kind": self.kind}
        if self.certificate is not None:
            doc["certificate"] = {self.certificate_kind: list(self.certificate)}
        else:
            doc["certificate"] = None
        if self.transcript is not None:
            doc["transcript"] = self.transcript
        return doc

    @staticmethod
    def from_json_dict(doc: Mapping) -> "NoetherianVerdict":
        cert = doc.get("certificate")
        cert_kind = None
        values = None
        if cert is not None:
            if not isinstance(cert, Mapping) or len(cert) != 1:
                raise InputFormatError(f"bad certificate {cert!r}")
            ((cert_kind, payload),) = cert.items()
            values = tuple(str(v) for v in payload)
        return NoetherianVerdict(
            str(doc["status"]), str(doc["kind"]), cert_kind, values, doc.get("transcript")
        )


def _require_valid(structure: FiniteStructure, kind: str) -> None:
    report = validate(structure, kind)
    if not report.passed:
        raise ValueError(f"structure fails {kind} validation: {report.violations[:3]}")


def graph_quasi_identity(graph: FiniteStructure) -> tuple[str, str, str, str] | None:
    """First (lexicographically least) length-3 walk that does not close, else None.

    Quadruples range over all vertices with repeats allowed; only walks can
    violate, so the scan follows edges and stays lexicographic.
    """
    neigh = adjacency(graph)
    table = graph.index_table(GRAPH_EDGE_SYMBOL)
    for x1 in range(graph.size):
        for x2 in neigh[x1]:
            for x3 in neigh[x2]:
                for x4 in neigh[x3]:
                    if (x4, x1) not in table:
                        return tuple(graph.label(v) for v in (x1, x2, x3, x4))
    return None


def graph_structural_check(graph: FiniteStructure) -> bool:
    """Diagnostic only: triangle-free and every finite distance at most 3.

    This condition is NOT equivalent to the quasi-identity (the 4-path and the
    5-cycle satisfy it yet fail the quasi-identity), so verdicts never rely on
    it; it exists for reporting and for pinning that disagreement in tests.
    """
    if has_triangle(graph) is not None:
        return False
    return all(d == float("inf") or d <= 3 for d in graph_distances(graph).values())


def graph_power_noetherian(graph: FiniteStructure) -> NoetherianVerdict:
    _require_valid(graph, "graph")
    bad = graph_quasi_identity(graph)
    if bad is None:
        return NoetherianVerdict(
            NOETHERIAN, "graph", transcript=f"all {graph.size ** 4} vertex quadruples close their walks"
        )
    return NoetherianVerdict(NOT_NOETHERIAN, "graph", "quadruple", bad)


def poset_strict_pair(poset: FiniteStructure) -> tuple[str, str] | None:
    table = poset.index_table(POSET_ORDER_SYMBOL)
    for a in range(poset.size):
        for b in range(poset.size):
            if a != b and (a, b) in table:
                return (poset.label(a), poset.label(b))
    return None


def poset_power_noetherian(poset: FiniteStructure) -> NoetherianVerdict:
    """Any strict pair refutes; without one, no conclusion is available either way."""
    _require_valid(poset, "poset")
    pair = poset_strict_pair(poset)
    if pair is not None:
        return NoetherianVerdict(NOT_NOETHERIAN, "poset", "pair", pair)
    return NoetherianVerdict(
        NO_OBSTRUCTION_FOUND,
        "poset",
        transcript="no strict pair exists (the order is trivial); no refutation is known for this case",
    )


def matroid_independent_triple(matroid: FiniteStructure) -> tuple[str, str, str] | None:
    if not matroid.signature.has("P3"):
        return None
    rows = matroid.tuples("P3")
    return rows[0] if rows else None


def matroid_power_noetherian(matroid: FiniteStructure) -> NoetherianVerdict:
    _require_valid(matroid, "matroid")
    triple = matroid_independent_triple(matroid)
    if triple is not None:
        return NoetherianVerdict(NOT_NOETHERIAN, "matroid", "triple", triple)
    bad = graph_quasi_identity(matroid_underlying_graph(matroid))
    if bad is None:
        return NoetherianVerdict(
            NOETHERIAN,
            "matroid",
            transcript="no independent triple; all walks in the independent-pair graph close",
        )
    return NoetherianVerdict(NOT_NOETHERIAN, "matroid", "quadruple", bad)


def power_noetherian(structure: FiniteStructure, kind: str) -> NoetherianVerdict:
    if kind == "graph":
        return graph_power_noetherian(structure)
    if kind == "poset":
        return poset_power_noetherian(structure)
    if kind == "matroid":
        return matroid_power_noetherian(structure)
    raise ValueError(f"no decision procedure for kind {kind!r}")


@dataclass(frozen=True)
class WitnessPackage:
    """A certificate expanded into an infinite family plus a per-n witness point.

    witness_point(n) satisfies the first n family members but is not a
    solution of the whole family, so no truncation is equivalent to it.
    """

    kind: str
    certificate_kind: str
    certificate: tuple[str, ...]
    variable: str
    family: StaircaseFamily
    point_repeat: str  # leading entry of the witness point
    point_tail: str  # entry repeated forever after
    point_offset: int  # number of leading entries is n + point_offset

    def witness_point(self, n: int) -> tuple[PowerElement, ...]:
        if n < 1:
            raise ValueError("witness points are indexed from 1")
        head = (self.point_repeat,) * (n + self.point_offset)
        return (PowerElement(head, (self.point_tail,)),)

    def family_system(self) -> PowerSystem:
        return PowerSystem((self.variable,), (), (self.family,))

    def truncation(self, n: int) -> PowerSystem:
        members = tuple(self.family.member(m) for m in range(1, n + 1))
        return PowerSystem((self.variable,), members, ())

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "certificate": {self.certificate_kind: list(self.certificate)},
            "variable": self.variable,
            "family": family_to_json_dict(self.family),
            "witness_rule": {
                "repeat": self.point_repeat,
                "tail": self.point_tail,
                "offset": self.point_offset,
            },
        }

    @staticmethod
    def from_json_dict(doc: Mapping) -> "WitnessPackage":
        cert = doc["certificate"]
        if not isinstance(cert, Mapping) or len(cert) != 1:
            raise InputFormatError(f"bad certificate {cert!r}")
        ((cert_kind, payload),) = cert.items()
        rule = doc["witness_rule"]
        return WitnessPackage(
            str(doc["kind"]),
            str(cert_kind),
            tuple(str(v) for v in payload),
            str(doc["variable"]),
            family_from_json_dict(doc["family"]),
            str(rule["repeat"]),
            str(rule["tail"]),
            int(rule["offset"]),
        )


def _edge_family(symbol: str, variable: str, generator: str, tail: str) -> StaircaseFamily:
    stair = Staircase((generator,), PowerElement((), (tail,)))
    return StaircaseFamily(RelationAtom(symbol, (Var(variable), Const(stair))))


def build_witness_family(
    structure: FiniteStructure, kind: str, certificate: tuple[str, ...], variable: str = "x"
) -> WitnessPackage:
    """Turn a verified NOT_NOETHERIAN certificate into a concrete witness family.

    The certificate is re-verified against the structure first; a stale or
    wrong one raises InvalidCertificateError.
    """
    labels = tuple(certificate)
    for v in labels:
        if not structure.has_label(v):
            raise InvalidCertificateError(f"certificate element {v!r} is not in the universe")
    if kind == "graph" or (kind == "matroid" and len(labels) == 4):
        symbol = GRAPH_EDGE_SYMBOL if kind == "graph" else "P2"
        a1, a2, a3, a4 = labels
        walk_ok = (
            structure.holds(symbol, (a1, a2))
            and structure.holds(symbol, (a2, a3))
            and structure.holds(symbol, (a3, a4))
        )
        if not walk_ok or structure.holds(symbol, (a4, a1)):
            raise InvalidCertificateError(
                f"quadruple {labels} is not an open walk of length 3 under {symbol!r}"
            )
        # members pair the repeating a4 stream against the a2 tail; the point
        # puts n - 1 copies of a3 in front of a1 forever
        return WitnessPackage(
            kind, "quadruple", labels, variable, _edge_family(symbol, variable, a4, a2), a3, a1, -1
        )
    if kind == "poset":
        if len(labels) != 2:
            raise InvalidCertificateError(f"poset certificates are pairs, got {labels}")
        a, b = labels
        if a == b or not structure.holds(POSET_ORDER_SYMBOL, (a, b)):
            raise InvalidCertificateError(f"{labels} is not a strict ordered pair")
        return WitnessPackage(
            kind, "pair", labels, variable, _edge_family(POSET_ORDER_SYMBOL, variable, a, b), a, b, 0
        )
    if kind == "matroid":
        if len(labels) != 3:
            raise InvalidCertificateError(f"matroid certificates are triples or quadruples, got {labels}")
        a, b, c = labels
        if "P3" not in structure.signature.names() or not structure.holds("P3", (a, b, c)):
            raise InvalidCertificateError(f"{labels} is not an independent triple")
        return WitnessPackage(
            kind, "triple", labels, variable, _edge_family("P2", variable, b, a), c, b, 0
        )
    raise ValueError(f"no witness construction for kind {kind!r}")


def verify_witness(structure: FiniteStructure, package: WitnessPackage, n: int) -> bool:
    """Exact check that witness_point(n) solves the first n members but not the family."""
    point = package.witness_point(n)
    if not satisfies(structure, package.truncation(n), point):
        return False
    return not satisfies(structure, package.family_system(), point)


def first_violated_member(
    structure: FiniteStructure, package: WitnessPackage, n: int, search_limit: int = 8
) -> int | None:
    """Smallest member index beyond n that witness_point(n) fails, scanning a bounded range."""
    point = package.witness_point(n)
    for m in range(n + 1, n + 1 + search_limit):
        member = PowerSystem((package.variable,), (package.family.member(m),), ())
        if not satisfies(structure, member, point):
            return m
    return None
