"""Finite relational structures, kind-specific axiom checks, and graph helpers.

A structure is a finite labelled universe together with one relation table per
signature symbol.  Tables are stored extensionally; nothing is ever closed or
symmetrized implicitly, so a malformed input fails validation instead of being
repaired silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InputFormatError, SignatureMismatchError

GRAPH_EDGE_SYMBOL = "E"
POSET_ORDER_SYMBOL = "leq"
STRUCTURE_KINDS = ("graph", "poset", "matroid", "generic")


@dataclass(frozen=True)
class Signature:
    """Named relation symbols with positive arities; equality is always available."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple((str(n), int(a)) for n, a in self.symbols))
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate relation symbols: {sorted(names)}")
        for name, arity in self.symbols:
            if arity < 1:
                raise ValueError(f"relation {name!r} needs arity >= 1, got {arity}")

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        for sym, arity in self.symbols:
            if sym == name:
                return arity
        raise KeyError(f"unknown relation symbol {name!r}")

    def has(self, name: str) -> bool:
        return any(sym == name for sym, _ in self.symbols)


def graph_signature() -> Signature:
    return Signature(((GRAPH_EDGE_SYMBOL, 2),))


def poset_signature() -> Signature:
    return Signature(((POSET_ORDER_SYMBOL, 2),))


def matroid_signature(max_arity: int) -> Signature:
    if max_arity < 1:
        raise ValueError("matroid signatures need at least P1")
    return Signature(tuple((f"P{i}", i) for i in range(1, max_arity + 1)))


class FiniteStructure:
    """Finite universe plus an interpretation table for every signature symbol.

    Universe elements are identified by their labels; the label order given at
    construction is the canonical element order used for all deterministic
    iteration.  Missing tables are interpreted as empty relations.
    """

    def __init__(
        self,
        signature: Signature,
        universe: Sequence[str],
        tables: Mapping[str, Iterable[Sequence[str]]] | None = None,
    ) -> None:
        labels = tuple(str(u) for u in universe)
        if not labels:
            raise ValueError("universe must be nonempty")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate universe labels: {sorted(labels)}")
        self.signature = signature
        self.universe = labels
        self._index = {label: i for i, label in enumerate(labels)}
        self._tables: dict[str, frozenset[tuple[int, ...]]] = {}
        tables = dict(tables or {})
        for name in tables:
            if not signature.has(name):
                raise ValueError(f"table given for {name!r}, which is not in the signature")
        for name, arity in signature.symbols:
            rows = set()
            for row in tables.get(name, ()):
                row = tuple(str(v) for v in row)
                if len(row) != arity:
                    raise ValueError(f"{name!r} expects {arity}-tuples, got {row}")
                try:
                    rows.add(tuple(self._index[v] for v in row))
                except KeyError as exc:
                    raise ValueError(f"{name!r} tuple {row} mentions unknown element {exc.args[0]!r}") from None
            self._tables[name] = frozenset(rows)

    @property
    def size(self) -> int:
        return len(self.universe)

    def has_label(self, label: str) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown universe element {label!r}") from None

    def label(self, i: int) -> str:
        return self.universe[i]

    def holds(self, symbol: str, row: Sequence[str]) -> bool:
        if symbol not in self._tables:
            raise KeyError(f"unknown relation symbol {symbol!r}")
        return tuple(self._index[v] for v in row) in self._tables[symbol]

    def index_table(self, symbol: str) -> frozenset[tuple[int, ...]]:
        if symbol not in self._tables:
            raise KeyError(f"unknown relation symbol {symbol!r}")
        return self._tables[symbol]

    def tuples(self, symbol: str) -> tuple[tuple[str, ...], ...]:
        rows = sorted(self.index_table(symbol))
        return tuple(tuple(self.universe[i] for i in row) for row in rows)

    def _key(self):
        return (
            self.signature,
            self.universe,
            tuple(sorted((name, tuple(sorted(rows))) for name, rows in self._tables.items())),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"FiniteStructure(universe={list(self.universe)!r})"


def graph_from_edges(universe: Sequence[str], edges: Iterable[tuple[str, str]]) -> FiniteStructure:
    """Build a graph from undirected edge pairs; both orientations are stored."""
    rows = set()
    for a, b in edges:
        rows.add((a, b))
        rows.add((b, a))
    return FiniteStructure(graph_signature(), universe, {GRAPH_EDGE_SYMBOL: sorted(rows)})


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the kind-specific axiom check; passed iff violations is empty."""

    kind: str
    passed: bool
    violations: tuple[tuple[str, tuple[str, ...]], ...]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "violations": [{"axiom": axiom, "witness": list(w)} for axiom, w in self.violations],
        }

    @staticmethod
    def from_json_dict(doc: Mapping) -> "ValidationReport":
        violations = tuple(
            (str(entry["axiom"]), tuple(str(v) for v in entry["witness"]))
            for entry in doc["violations"]
        )
        return ValidationReport(str(doc["kind"]), bool(doc["passed"]), violations)


def _check_kind_signature(structure: FiniteStructure, kind: str) -> None:
    sig = structure.signature
    if kind == "graph":
        if sig != graph_signature():
            raise SignatureMismatchError(
                f"graph structures use exactly the binary symbol {GRAPH_EDGE_SYMBOL!r}, got {sig.symbols}"
            )
    elif kind == "poset":
        if sig != poset_signature():
            raise SignatureMismatchError(
                f"poset structures use exactly the binary symbol {POSET_ORDER_SYMBOL!r}, got {sig.symbols}"
            )
    elif kind == "matroid":
        names = sorted(sig.names())
        expected = sorted(f"P{i}" for i in range(1, len(names) + 1))
        if names != expected or any(sig.arity(f"P{i}") != i for i in range(1, len(names) + 1)):
            raise SignatureMismatchError(
                f"matroid structures use consecutive symbols P1..Pm with arity(Pi) = i, got {sig.symbols}"
            )
    elif kind != "generic":
        raise ValueError(f"unknown structure kind {kind!r}; expected one of {STRUCTURE_KINDS}")


def _graph_violations(structure: FiniteStructure) -> list[tuple[str, tuple[str, ...]]]:
    table = structure.index_table(GRAPH_EDGE_SYMBOL)
    out: list[tuple[str, tuple[str, ...]]] = []
    for x in range(structure.size):
        if (x, x) in table:
            out.append(("no loops", (structure.label(x),)))
    for x, y in sorted(table):
        if (y, x) not in table:
            out.append(("symmetry", (structure.label(x), structure.label(y))))
    return out


def _poset_violations(structure: FiniteStructure) -> list[tuple[str, tuple[str, ...]]]:
    table = structure.index_table(POSET_ORDER_SYMBOL)
    out: list[tuple[str, tuple[str, ...]]] = []
    for x in range(structure.size):
        if (x, x) not in table:
            out.append(("reflexivity", (structure.label(x),)))
    for x, y in sorted(table):
        if x != y and (y, x) in table:
            out.append(("antisymmetry", (structure.label(x), structure.label(y))))
    # the middle element is quantified universally, like the other two
    for x, y in sorted(table):
        for z in range(structure.size):
            if (y, z) in table and (x, z) not in table:
                out.append(("transitivity", (structure.label(x), structure.label(y), structure.label(z))))
    return out


def _matroid_violations(structure: FiniteStructure) -> list[tuple[str, tuple[str, ...]]]:
    m = len(structure.signature.symbols)
    tables = {n: structure.index_table(f"P{n}") for n in range(1, m + 1)}
    out: list[tuple[str, tuple[str, ...]]] = []

    def labels(row: tuple[int, ...]) -> tuple[str, ...]:
        return tuple(structure.label(i) for i in row)

    # tuples with a repeated entry are never independent
    for n in range(1, m + 1):
        for row in sorted(tables[n]):
            if len(set(row)) != len(row):
                out.append(("no repeated elements", labels(row)))
    # deleting any one position from an independent tuple stays independent
    for n in range(2, m + 1):
        for row in sorted(tables[n]):
            if any(row[:i] + row[i + 1 :] not in tables[n - 1] for i in range(n)):
                out.append(("hereditary", labels(row)))
    # a shorter independent tuple extends by some entry of any longer one
    for n in range(1, m):
        for short in sorted(tables[n]):
            for long in sorted(tables[n + 1]):
                if not any(short + (y,) in tables[n + 1] for y in long):
                    out.append(("exchange", labels(short) + labels(long)))
    return out


def validate(structure: FiniteStructure, kind: str) -> ValidationReport:
    """Check the axioms for the given kind; every violation is reported with a witness."""
    _check_kind_signature(structure, kind)
    if kind == "graph":
        violations = _graph_violations(structure)
    elif kind == "poset":
        violations = _poset_violations(structure)
    elif kind == "matroid":
        violations = _matroid_violations(structure)
    else:
        violations = []
    return ValidationReport(kind, not violations, tuple(violations))


def adjacency(graph: FiniteStructure) -> dict[int, tuple[int, ...]]:
    """Neighbor indices per vertex index, each list sorted ascending."""
    table = graph.index_table(GRAPH_EDGE_SYMBOL)
    neigh: dict[int, list[int]] = {i: [] for i in range(graph.size)}
    for x, y in table:
        neigh[x].append(y)
    return {i: tuple(sorted(vs)) for i, vs in neigh.items()}


def has_triangle(graph: FiniteStructure) -> tuple[str, str, str] | None:
    """Lexicographically least triple (x1, x2, x3) of pairwise adjacent vertices, if any."""
    neigh = adjacency(graph)
    table = graph.index_table(GRAPH_EDGE_SYMBOL)
    for x1 in range(graph.size):
        for x2 in neigh[x1]:
            for x3 in neigh[x2]:
                if (x3, x1) in table:
                    return (graph.label(x1), graph.label(x2), graph.label(x3))
    return None


def graph_distances(graph: FiniteStructure) -> dict[tuple[str, str], float]:
    """All-pairs hop distances; unreachable pairs map to math.inf."""
    neigh = adjacency(graph)
    out: dict[tuple[str, str], float] = {}
    for start in range(graph.size):
        dist = {start: 0}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for w in neigh[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        for v in range(graph.size):
            out[(graph.label(start), graph.label(v))] = dist.get(v, math.inf)
    return out


def star_bipartite_graph(n: int) -> FiniteStructure:
    """Vertices x0..x{n+1}; x0 and x{n+1} are both joined to every middle vertex.

    The result is the complete bipartite graph with parts {x0, x{n+1}} and
    {x1..xn}, so it has n + 2 vertices.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = [f"x{i}" for i in range(n + 2)]
    edges = [(labels[0], labels[i]) for i in range(1, n + 1)]
    edges += [(labels[i], labels[n + 1]) for i in range(1, n + 1)]
    return graph_from_edges(labels, edges)


def matroid_underlying_graph(matroid: FiniteStructure) -> FiniteStructure:
    """Graph on the same universe whose edges are the independent pairs.

    Both orientations are stored outright, so the result always passes graph
    validation when the input is a valid matroid (no loops by the repetition
    axiom, symmetry by construction).
    """
    _check_kind_signature(matroid, "matroid")
    edges = []
    if matroid.signature.has("P2"):
        for a, b in matroid.tuples("P2"):
            edges.append((a, b))
    return graph_from_edges(matroid.universe, edges)


def structure_to_json_dict(structure: FiniteStructure, kind: str) -> dict:
    relations = {}
    for name, arity in structure.signature.symbols:
        relations[name] = {"arity": arity, "tuples": [list(row) for row in structure.tuples(name)]}
    return {"kind": kind, "universe": list(structure.universe), "relations": relations}


def _require_keys(doc: Mapping, allowed: set[str], required: set[str], what: str) -> None:
    keys = set(doc)
    unknown = keys - allowed
    if unknown:
        raise InputFormatError(f"{what}: unknown keys {sorted(unknown)}")
    missing = required - keys
    if missing:
        raise InputFormatError(f"{what}: missing keys {sorted(missing)}")


def structure_from_json_dict(doc: Mapping) -> tuple[str, FiniteStructure]:
    """Parse {"kind", "universe", "relations"}; unknown keys are rejected."""
    if not isinstance(doc, Mapping):
        raise InputFormatError("structure document must be a JSON object")
    _require_keys(doc, {"kind", "universe", "relations"}, {"kind", "universe", "relations"}, "structure")
    kind = doc["kind"]
    if kind not in STRUCTURE_KINDS:
        raise InputFormatError(f"structure kind must be one of {STRUCTURE_KINDS}, got {kind!r}")
    universe = doc["universe"]
    if not isinstance(universe, list) or not all(isinstance(u, str) for u in universe):
        raise InputFormatError("structure universe must be a list of strings")
    relations = doc["relations"]
    if not isinstance(relations, Mapping):
        raise InputFormatError("structure relations must be an object")
    symbols = []
    tables = {}
    for name, entry in relations.items():
        if not isinstance(entry, Mapping):
            raise InputFormatError(f"relation {name!r} must be an object")
        _require_keys(entry, {"arity", "tuples"}, {"arity", "tuples"}, f"relation {name!r}")
        arity = entry["arity"]
        if not isinstance(arity, int) or arity < 1:
            raise InputFormatError(f"relation {name!r} arity must be a positive integer")
        rows = entry["tuples"]
        if not isinstance(rows, list):
            raise InputFormatError(f"relation {name!r} tuples must be a list")
        parsed_rows = []
        for row in rows:
            if not isinstance(row, list) or not all(isinstance(v, str) for v in row):
                raise InputFormatError(f"relation {name!r} tuples must be lists of strings")
            parsed_rows.append(tuple(row))
        symbols.append((str(name), arity))
        tables[str(name)] = parsed_rows
    try:
        structure = FiniteStructure(Signature(tuple(symbols)), universe, tables)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None
    return kind, structure
