import json

import pytest

import support
from eqpower.errors import InvalidCertificateError
from eqpower.fixtures import (
    antichain_poset,
    chain_poset,
    cycle_graph,
    free_matroid,
    path_graph,
    rank_one_matroid,
    triangle_graph,
)
from eqpower.noetherian import (
    NO_OBSTRUCTION_FOUND,
    NOETHERIAN,
    NOT_NOETHERIAN,
    NoetherianVerdict,
    WitnessPackage,
    build_witness_family,
    first_violated_member,
    graph_power_noetherian,
    graph_quasi_identity,
    graph_structural_check,
    matroid_independent_triple,
    matroid_power_noetherian,
    poset_power_noetherian,
    poset_strict_pair,
    power_noetherian,
    verify_witness,
)
from eqpower.power import satisfies
from eqpower.structures import FiniteStructure, matroid_signature, star_bipartite_graph


def test_quasi_identity_matches_oracle_exhaustively():
    for g in support.enumerate_graphs_up_to(4):
        assert graph_quasi_identity(g) == support.quasi_identity_oracle(g)


def test_quasi_identity_pinned():
    assert graph_quasi_identity(triangle_graph()) == ("a", "b", "c", "a")
    assert graph_quasi_identity(star_bipartite_graph(4)) is None
    assert graph_quasi_identity(FiniteStructure(triangle_graph().signature, ["a"])) is None


def test_structural_check_disagrees_on_path_and_cycle():
    # triangle-free with distances <= 3, yet the closing condition fails
    assert graph_structural_check(path_graph(4))
    assert graph_quasi_identity(path_graph(4)) is not None
    assert graph_structural_check(cycle_graph(5))
    assert graph_quasi_identity(cycle_graph(5)) is not None
    assert not graph_structural_check(triangle_graph())
    assert graph_structural_check(star_bipartite_graph(3))


def test_graph_verdicts():
    verdict = graph_power_noetherian(triangle_graph())
    assert verdict.status == NOT_NOETHERIAN
    assert verdict.certificate_kind == "quadruple"
    a1, a2, a3, a4 = verdict.certificate
    g = triangle_graph()
    assert g.holds("E", (a1, a2)) and g.holds("E", (a2, a3)) and g.holds("E", (a3, a4))
    assert not g.holds("E", (a4, a1))

    passing = graph_power_noetherian(star_bipartite_graph(2))
    assert passing.status == NOETHERIAN
    assert passing.certificate is None


def test_graph_verdict_requires_valid_graph():
    loop = FiniteStructure(triangle_graph().signature, ["a"], {"E": [("a", "a")]})
    with pytest.raises(ValueError):
        graph_power_noetherian(loop)


def test_poset_verdicts():
    assert poset_strict_pair(chain_poset(2)) == ("c1", "c2")
    assert poset_strict_pair(antichain_poset(2)) is None

    verdict = poset_power_noetherian(chain_poset(3))
    assert verdict.status == NOT_NOETHERIAN and verdict.certificate_kind == "pair"

    open_case = poset_power_noetherian(antichain_poset(3))
    assert open_case.status == NO_OBSTRUCTION_FOUND
    assert open_case.certificate is None
    assert open_case.transcript


def test_matroid_verdicts():
    assert matroid_independent_triple(free_matroid(3)) == ("e1", "e2", "e3")
    assert matroid_independent_triple(free_matroid(2)) is None

    assert matroid_power_noetherian(free_matroid(3)).status == NOT_NOETHERIAN
    assert matroid_power_noetherian(free_matroid(2)).status == NOETHERIAN
    assert matroid_power_noetherian(rank_one_matroid(3)).status == NOETHERIAN


def test_matroid_quadruple_path():
    """No independent triple, but independent pairs form a triangle."""
    labels = ["e1", "e2", "e3"]
    pairs = [(a, b) for a in labels for b in labels if a != b]
    m = FiniteStructure(
        matroid_signature(3),
        labels,
        {"P1": [(u,) for u in labels], "P2": pairs, "P3": []},
    )
    verdict = matroid_power_noetherian(m)
    assert verdict.status == NOT_NOETHERIAN
    assert verdict.certificate_kind == "quadruple"


def test_power_noetherian_dispatch():
    assert power_noetherian(triangle_graph(), "graph").status == NOT_NOETHERIAN
    assert power_noetherian(chain_poset(2), "poset").status == NOT_NOETHERIAN
    assert power_noetherian(free_matroid(2), "matroid").status == NOETHERIAN
    with pytest.raises(ValueError):
        power_noetherian(triangle_graph(), "generic")


def test_graph_witness_family():
    g = triangle_graph()
    package = build_witness_family(g, "graph", ("a", "b", "c", "a"))
    for n in range(1, 7):
        assert verify_witness(g, package, n)
        assert first_violated_member(g, package, n) == n + 1
    assert not satisfies(g, package.family_system(), package.witness_point(3))
    assert satisfies(g, package.truncation(3), package.witness_point(3))


def test_poset_witness_family():
    p = chain_poset(2)
    package = build_witness_family(p, "poset", ("c1", "c2"))
    for n in range(1, 7):
        assert verify_witness(p, package, n)
        assert first_violated_member(p, package, n) == n + 2


def test_matroid_witness_family():
    m = free_matroid(3)
    package = build_witness_family(m, "matroid", ("e1", "e2", "e3"))
    for n in range(1, 6):
        assert verify_witness(m, package, n)
        assert first_violated_member(m, package, n) == n + 2


def test_witness_rejects_bogus_certificates():
    g = star_bipartite_graph(2)  # closing walk everywhere, nothing to witness
    with pytest.raises(InvalidCertificateError):
        build_witness_family(g, "graph", ("x0", "x1", "x3", "x1"))
    with pytest.raises(InvalidCertificateError):
        build_witness_family(chain_poset(2), "poset", ("c2", "c1"))
    with pytest.raises(InvalidCertificateError):
        build_witness_family(free_matroid(2), "matroid", ("e1", "e2", "e1"))


def test_union_of_passing_graphs_passes_small():
    passing = [g for g in support.enumerate_graphs_up_to(3) if graph_quasi_identity(g) is None]
    for g in passing:
        for h in passing:
            assert graph_quasi_identity(support.disjoint_union(g, h)) is None


def test_verdict_json_round_trip():
    for verdict in [
        graph_power_noetherian(triangle_graph()),
        poset_power_noetherian(antichain_poset(2)),
        matroid_power_noetherian(free_matroid(2)),
    ]:
        doc = json.loads(json.dumps(verdict.to_json_dict()))
        assert NoetherianVerdict.from_json_dict(doc) == verdict


def test_witness_package_json_round_trip():
    package = build_witness_family(triangle_graph(), "graph", ("a", "b", "c", "a"))
    doc = json.loads(json.dumps(package.to_json_dict()))
    assert WitnessPackage.from_json_dict(doc) == package
