"""Test-local helpers and independent oracles.

Everything here recomputes results from first principles (plain nested loops
over raw tables) so library behavior is checked against genuinely separate
logic, not against itself.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations, product

from eqpower.power import PowerElement, PowerSystem, Staircase, StaircaseFamily
from eqpower.solver import Const, EqualityAtom, RelationAtom, Var
from eqpower.structures import FiniteStructure, Signature, graph_from_edges, matroid_signature


def enumerate_graphs(n: int):
    """All labeled graphs on vertices v1..vn, by edge subset."""
    labels = [f"v{i}" for i in range(1, n + 1)]
    pairs = list(combinations(labels, 2))
    for bits in range(2 ** len(pairs)):
        yield graph_from_edges(labels, [p for i, p in enumerate(pairs) if bits >> i & 1])


def enumerate_graphs_up_to(n: int):
    for size in range(1, n + 1):
        yield from enumerate_graphs(size)


def quasi_identity_oracle(graph: FiniteStructure):
    """First violating quadruple by brute product scan, or None.

    Scans every quadruple in index order and tests premises explicitly, so it
    shares no traversal logic with the library's adjacency-driven version.
    """
    labels = graph.universe
    for x1, x2, x3, x4 in product(labels, repeat=4):
        if (
            graph.holds("E", (x1, x2))
            and graph.holds("E", (x2, x3))
            and graph.holds("E", (x3, x4))
            and not graph.holds("E", (x4, x1))
        ):
            return (x1, x2, x3, x4)
    return None


def disjoint_union(g: FiniteStructure, h: FiniteStructure) -> FiniteStructure:
    labels = [f"a_{u}" for u in g.universe] + [f"b_{u}" for u in h.universe]
    edges = [(f"a_{x}", f"a_{y}") for x, y in g.tuples("E")]
    edges += [(f"b_{x}", f"b_{y}") for x, y in h.tuples("E")]
    return graph_from_edges(labels, edges)


def enumerate_independence_systems(universe_size: int):
    """Every assignment of P1..Pu tables over repeat-free tuples, validated or not."""
    labels = [f"e{i}" for i in range(1, universe_size + 1)]
    sig = matroid_signature(universe_size)
    per_arity = [list(permutations(labels, k)) for k in range(1, universe_size + 1)]
    choices = []
    for rows in per_arity:
        choices.append(
            [[rows[i] for i in range(len(rows)) if bits >> i & 1] for bits in range(2 ** len(rows))]
        )
    for combo in product(*choices):
        tables = {f"P{k + 1}": rows for k, rows in enumerate(combo)}
        yield FiniteStructure(sig, labels, tables)


def random_stream(rng: random.Random, labels) -> PowerElement:
    prefix = tuple(rng.choice(labels) for _ in range(rng.randint(0, 2)))
    cycle = tuple(rng.choice(labels) for _ in range(rng.randint(1, 3)))
    return PowerElement(prefix, cycle)


def random_staircase(rng: random.Random, labels) -> Staircase:
    generator = tuple(rng.choice(labels) for _ in range(rng.randint(1, 3)))
    return Staircase(generator, random_stream(rng, labels))


def random_relational_structure(rng: random.Random, max_size: int = 3) -> FiniteStructure:
    k = rng.randint(1, max_size)
    labels = [f"u{i}" for i in range(1, k + 1)]
    rows = [(a, b) for a in labels for b in labels if rng.random() < 0.5]
    return FiniteStructure(Signature((("R", 2),)), labels, {"R": rows})


def random_power_system(rng: random.Random, structure: FiniteStructure) -> PowerSystem:
    """Mixed staircase families and explicit equations over one binary symbol."""
    labels = list(structure.universe)
    variables = ("x", "y")[: rng.randint(1, 2)]

    def var_or(maker):
        if rng.random() < 0.55:
            return Var(rng.choice(variables))
        return Const(maker(rng, labels))

    families = []
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.7:
            atom = RelationAtom("R", (var_or(random_staircase), var_or(random_staircase)))
        else:
            atom = EqualityAtom(Var(rng.choice(variables)), Const(random_staircase(rng, labels)))
        if not any(isinstance(a, Const) for a in _args(atom)):
            atom = RelationAtom("R", (Var(variables[0]), Const(random_staircase(rng, labels))))
        families.append(StaircaseFamily(atom))
    explicit = tuple(
        RelationAtom("R", (var_or(random_stream), var_or(random_stream)))
        for _ in range(rng.randint(0, 2))
    )
    return PowerSystem(variables, explicit, tuple(families))


def _args(atom):
    return atom.args if isinstance(atom, RelationAtom) else (atom.lhs, atom.rhs)


def edge_staircase_family(rng: random.Random, labels) -> PowerSystem:
    """Single-variable edge family with a random generator and tail."""
    stair = random_staircase(rng, labels)
    atom = RelationAtom("E", (Var("x"), Const(stair)))
    return PowerSystem(("x",), (), (StaircaseFamily(atom),))
