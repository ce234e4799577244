import json

import pytest

from eqpower.errors import InputFormatError
from eqpower.fixtures import staircase_demo_system, triangle_graph
from eqpower.power import (
    PowerElement,
    PowerSystem,
    SourceRef,
    power_systems_equivalent,
)
from eqpower.solver import Const, EqualityAtom, RelationAtom, Var
from eqpower.wrap import (
    EventuallyPeriodicIndexSet,
    class_representatives,
    check_size_bounds,
    seed_equations,
    verify_wrap,
    wrap,
    wrap_result_from_json_dict,
    wrap_result_to_json_dict,
)


def edge(stream: PowerElement) -> RelationAtom:
    return RelationAtom("E", (Var("x"), Const(stream)))


MEMBER3 = edge(PowerElement(("b", "c"), ("a",)))


def test_index_set_membership_and_complement():
    s = EventuallyPeriodicIndexSet((True, False), (False, True))
    assert [s.contains(i) for i in range(6)] == [True, False, False, True, False, True]
    c = s.complement()
    assert [c.contains(i) for i in range(6)] == [False, True, True, False, True, False]
    with pytest.raises(ValueError):
        EventuallyPeriodicIndexSet((), ())


def test_index_set_json_round_trip():
    s = EventuallyPeriodicIndexSet((True,), (False, True))
    assert EventuallyPeriodicIndexSet.from_json_dict(json.loads(json.dumps(s.to_json_dict()))) == s


def test_demo_class_representatives():
    g = triangle_graph()
    reps = class_representatives(g, staircase_demo_system())
    assert [rep.solutions for rep in reps] == [
        frozenset({("b",), ("c",)}),
        frozenset({("a",), ("c",)}),
        frozenset({("a",), ("b",)}),
    ]
    # one source equation, the three-step family member, covers all classes
    assert {rep.source for rep in reps} == {SourceRef("family", 0, 3)}
    assert [rep.coordinate for rep in reps] == [2, 0, 1]
    assert [rep.representative for rep in reps] == [
        RelationAtom("E", (Var("x"), Const("a"))),
        RelationAtom("E", (Var("x"), Const("b"))),
        RelationAtom("E", (Var("x"), Const("c"))),
    ]


def test_demo_seeds():
    g = triangle_graph()
    system = staircase_demo_system()
    reps = class_representatives(g, system)
    assert seed_equations(g, system, reps) == (MEMBER3,)


def test_demo_wrap_output_pinned():
    g = triangle_graph()
    result = wrap(g, staircase_demo_system())
    assert result.verified and result.bound_ok
    assert result.trace.stabilization == 1 and result.trace.period == 2
    assert result.wrapped.families == ()
    assert result.wrapped.explicit == (
        MEMBER3,
        edge(PowerElement((), ("a",))),
        edge(PowerElement(("b", "c"), ("b", "a"))),
        edge(PowerElement(("b",), ("c", "a"))),
    )
    assert result.trace.source_pairs() == (
        (2, SourceRef("family", 0, 3)),
        (0, SourceRef("family", 0, 3)),
        (1, SourceRef("family", 0, 3)),
    )


def test_demo_match_sets():
    result = wrap(triangle_graph(), staircase_demo_system())
    by_solutions = {
        result.trace.representatives[st.representative].solutions: st.match
        for st in result.trace.steps
    }
    assert by_solutions[frozenset({("b",), ("c",)})] == EventuallyPeriodicIndexSet(
        (True,), (True, True)
    )
    assert by_solutions[frozenset({("a",), ("c",)})] == EventuallyPeriodicIndexSet(
        (True,), (False, True)
    )
    assert by_solutions[frozenset({("a",), ("b",)})] == EventuallyPeriodicIndexSet(
        (False,), (True, False)
    )


def test_wrapped_system_is_equivalent_to_original():
    g = triangle_graph()
    system = staircase_demo_system()
    result = wrap(g, system)
    assert power_systems_equivalent(g, system, result.wrapped)


def test_wrap_of_finite_system_is_stable():
    g = triangle_graph()
    once = wrap(g, staircase_demo_system())
    again = wrap(g, once.wrapped)
    assert again.verified and again.bound_ok
    assert power_systems_equivalent(g, once.wrapped, again.wrapped)


def test_verify_wrap_reports_first_bad_coordinate():
    g = triangle_graph()
    incomplete = PowerSystem(("x",), (MEMBER3,), ())
    verification = verify_wrap(g, staircase_demo_system(), incomplete)
    assert not verification.passed
    assert verification.mismatches[0].coordinate == 0
    assert verification.mismatches[0].original_solutions == (("c",),)
    assert verification.mismatches[0].wrapped_solutions == (("a",), ("c",))


def test_verify_wrap_rejects_variable_mismatch():
    g = triangle_graph()
    other = PowerSystem(("y",), (), ())
    with pytest.raises(ValueError):
        verify_wrap(g, staircase_demo_system(), other)


def test_wrap_inconsistent_system_still_verifies():
    g = triangle_graph()
    system = PowerSystem(
        ("x",),
        (
            EqualityAtom(Var("x"), Const(PowerElement((), ("a",)))),
            EqualityAtom(Var("x"), Const(PowerElement((), ("b",)))),
        ),
        (),
    )
    result = wrap(g, system)
    assert result.verified and result.bound_ok
    assert power_systems_equivalent(g, system, result.wrapped)


def test_size_bound_check():
    g = triangle_graph()
    system = staircase_demo_system()
    result = wrap(g, system)
    reps = result.trace.representatives
    assert check_size_bounds(g, system, reps, result.wrapped)
    padded = PowerSystem(
        ("x",),
        tuple(edge(PowerElement((label,) * k, ("a",))) for k in range(7) for label in "bc"),
        (),
    )
    assert not check_size_bounds(g, system, reps, padded)


def test_wrap_result_json_round_trip():
    result = wrap(triangle_graph(), staircase_demo_system())
    doc = json.loads(json.dumps(wrap_result_to_json_dict(result)))
    assert wrap_result_from_json_dict(doc) == result


def test_wrap_result_rejects_malformed_documents():
    result = wrap(triangle_graph(), staircase_demo_system())
    doc = wrap_result_to_json_dict(result)
    broken = dict(doc)
    del broken["wrapped"]
    with pytest.raises(InputFormatError):
        wrap_result_from_json_dict(broken)
    extra = dict(doc)
    extra["surprise"] = 1
    with pytest.raises(InputFormatError):
        wrap_result_from_json_dict(extra)
