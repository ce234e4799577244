import json
from itertools import product

import pytest

from eqpower.errors import InputFormatError, UnboundVariableError
from eqpower.fixtures import chain_poset, triangle_graph
from eqpower.solver import (
    AtomClassifier,
    Const,
    EqualityAtom,
    EquationSystem,
    RelationAtom,
    Var,
    check_equation,
    class_of,
    const_values,
    equation_from_json_dict,
    equation_to_json_dict,
    equivalent,
    evaluate,
    fill_template,
    minimal_inconsistent_subset,
    solve,
    system_from_json_dict,
    system_to_json_dict,
    template_of,
)


def E(*args):
    return RelationAtom("E", args)


x, y = Var("x"), Var("y")


def brute_solutions(structure, system):
    """Independent solver: evaluate every atom against every assignment directly."""
    pts = set()
    for combo in product(structure.universe, repeat=len(system.variables)):
        env = dict(zip(system.variables, combo))

        def val(a):
            return env[a.name] if isinstance(a, Var) else a.value

        ok = True
        for eq in system.equations:
            if isinstance(eq, RelationAtom):
                ok = structure.holds(eq.symbol, tuple(val(a) for a in eq.args))
            else:
                ok = val(eq.lhs) == val(eq.rhs)
            if not ok:
                break
        if ok:
            pts.add(combo)
    return frozenset(pts)


def test_template_round_trip():
    eq = E(x, Const("a"), y)
    t = template_of(eq)
    assert t.kind == "rel" and t.symbol == "E"
    assert t.slots == (("var", "x"), ("const",), ("var", "y"))
    assert t.const_slot_count() == 1
    assert fill_template(t, ["b"]) == E(x, Const("b"), y)
    assert const_values(eq) == ("a",)

    eq2 = EqualityAtom(x, Const("a"))
    t2 = template_of(eq2)
    assert t2.kind == "eq" and t2.symbol is None
    assert fill_template(t2, ["c"]) == EqualityAtom(x, Const("c"))


def test_system_rejects_duplicate_variables():
    with pytest.raises(ValueError):
        EquationSystem(("x", "x"), ())


def test_evaluate():
    g = triangle_graph()
    assert evaluate(g, E(x, y), {"x": "a", "y": "b"})
    assert not evaluate(g, E(x, y), {"x": "a", "y": "a"})
    assert evaluate(g, EqualityAtom(x, Const("a")), {"x": "a"})
    assert evaluate(g, E(Const("a"), Const("b")), {})


def test_check_equation_errors():
    g = triangle_graph()
    with pytest.raises(KeyError):
        check_equation(g, ("x",), RelationAtom("F", (x,)))
    with pytest.raises(ValueError):
        check_equation(g, ("x",), RelationAtom("E", (x,)))
    with pytest.raises(UnboundVariableError):
        check_equation(g, ("x",), E(x, y))
    with pytest.raises(ValueError):
        check_equation(g, ("x",), E(x, Const("zz")))


def test_solve_pinned():
    g = triangle_graph()
    result = solve(g, EquationSystem(("x",), (E(x, Const("a")),)))
    assert result.points == {("b",), ("c",)}
    assert result.sorted_points() == (("b",), ("c",))

    both = solve(g, EquationSystem(("x",), (E(x, Const("a")), E(x, Const("b")))))
    assert both.points == {("c",)}

    empty_system = solve(g, EquationSystem(("x", "y"), ()))
    assert len(empty_system.points) == 9

    none = solve(g, EquationSystem(("x",), (E(x, Const("a")), EqualityAtom(x, Const("a")))))
    assert none.is_empty


def test_solve_matches_brute_force():
    g = triangle_graph()
    p = chain_poset(3)
    systems = [
        (g, EquationSystem(("x", "y"), (E(x, y), E(y, Const("a"))))),
        (g, EquationSystem(("x", "y"), (EqualityAtom(x, y),))),
        (g, EquationSystem(("x",), (E(Const("a"), Const("b")), E(x, Const("c"))))),
        (p, EquationSystem(("x", "y"), (RelationAtom("leq", (x, y)), RelationAtom("leq", (y, Const("c2")))))),
    ]
    for structure, system in systems:
        assert solve(structure, system).points == brute_solutions(structure, system)


def test_equivalent():
    g = triangle_graph()
    a = EquationSystem(("x",), (E(x, Const("a")), E(x, Const("a"))))
    b = EquationSystem(("x",), (E(x, Const("a")),))
    assert equivalent(g, a, b)
    c = EquationSystem(("x",), (E(x, Const("b")),))
    assert not equivalent(g, b, c)
    with pytest.raises(ValueError):
        equivalent(g, b, EquationSystem(("y",), (E(y, Const("a")),)))


def test_class_of_distinguishes_templates():
    g = triangle_graph()
    # same solution set {b, c}, different shapes
    rel = class_of(g, E(x, Const("a")), ("x",))
    assert rel.points == {("b",), ("c",)}
    again = class_of(g, E(x, Const("a")), ("x",))
    assert rel == again
    eqcls = class_of(g, EqualityAtom(x, Const("a")), ("x",))
    assert eqcls.points == {("a",)}
    assert rel != eqcls


def test_classifier_memoizes():
    g = triangle_graph()
    clf = AtomClassifier(g, ("x",))
    first = clf.solutions(E(x, Const("a")))
    assert clf.solutions(E(x, Const("a"))) is first
    assert clf.system_solutions([E(x, Const("a")), E(x, Const("b"))]) == {("c",)}


def test_minimal_inconsistent_subset():
    g = triangle_graph()
    consistent = EquationSystem(("x",), (E(x, Const("a")),))
    assert minimal_inconsistent_subset(g, consistent) is None

    system = EquationSystem(
        ("x",), (E(x, Const("a")), EqualityAtom(x, Const("a")), E(x, Const("b")))
    )
    core = minimal_inconsistent_subset(g, system)
    assert core.equations == (E(x, Const("a")), EqualityAtom(x, Const("a")))
    # deletion-minimal: the core is inconsistent, every remove-one subset is not
    assert solve(g, core).is_empty
    for i in range(len(core.equations)):
        rest = EquationSystem(core.variables, core.equations[:i] + core.equations[i + 1 :])
        assert not solve(g, rest).is_empty


def test_equation_json_round_trip():
    for eq in [E(x, Const("a")), EqualityAtom(x, y), EqualityAtom(Const("a"), Const("b"))]:
        doc = json.loads(json.dumps(equation_to_json_dict(eq)))
        assert equation_from_json_dict(doc) == eq


def test_system_json_round_trip():
    system = EquationSystem(("x", "y"), (E(x, y), EqualityAtom(x, Const("a"))))
    doc = json.loads(json.dumps(system_to_json_dict(system)))
    assert system_from_json_dict(doc) == system


@pytest.mark.parametrize(
    "doc",
    [
        "nope",
        {"rel": "E"},
        {"rel": "E", "args": [{"var": "x"}], "extra": 1},
        {"rel": 3, "args": []},
        {"eq": [{"var": "x"}]},
        {"rel": "E", "args": [{"var": "x"}, {"const": 5}]},
        {"rel": "E", "args": [{"bad": "x"}, {"const": "a"}]},
    ],
)
def test_equation_json_rejects_malformed(doc):
    with pytest.raises(InputFormatError):
        equation_from_json_dict(doc)
