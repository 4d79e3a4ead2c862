import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocus.dimacs import ParseError, parse_dimacs, serialize_dimacs
from ocus.formula import CnfFormula, FormulaError, Group, cost, interpretation, negate_set
from ocus.problem import ProblemError, assemble_ocus_formula, parse_problem


def test_parse_dimacs_basic():
    F = parse_dimacs(b"p cnf 2 2\n1 2 0\n-1 0\n")
    assert F.clauses == ((1, 2), (-1,))
    assert F.atom_count == 2
    assert F.weights == (1, 1)
    assert set(F.groups) == {Group.SPECIFIC}


def test_parse_dimacs_empty_formula():
    F = parse_dimacs("p cnf 1 0\n")
    assert len(F) == 0 and F.atom_count == 1


def test_parse_dimacs_comments_and_multiline_clause():
    F = parse_dimacs("c hello\np cnf 3 1\n1 -2\n 3 0\n")
    assert F.clauses == ((1, -2, 3),)


@pytest.mark.parametrize("text, line", [
    ("p cnf 1 1\n1 -1 0\n", 2),          # tautology
    ("p cnf 1 1\n2 0\n", 2),             # literal beyond declared variables
    ("p cnf 2 1\n1 2\n", 2),             # missing terminating 0
    ("p cnf x 1\n1 0\n", 1),             # malformed header
    ("p dnf 1 1\n1 0\n", 1),
])
def test_parse_dimacs_errors_name_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_dimacs(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_parse_dimacs_missing_header():
    with pytest.raises(ParseError):
        parse_dimacs("1 2 0\n")


clause_st = st.lists(st.integers(1, 6), min_size=0, max_size=4, unique=True).flatmap(
    lambda atoms: st.tuples(*[st.sampled_from([a, -a]) for a in atoms]))


@settings(max_examples=100, deadline=None)
@given(st.lists(clause_st, max_size=10))
def test_dimacs_round_trip(clauses):
    F = CnfFormula.build(clauses, atom_count=6)
    G = parse_dimacs(serialize_dimacs(F))
    assert G.clauses == F.clauses
    assert G.atom_count == F.atom_count


def test_duplicate_clauses_and_literals():
    F = CnfFormula.build([[1], [1], [2, 2, 3]])
    assert F.clauses == ((1,), (1,), (2, 3))


def test_cost_examples(example1_formula):
    assert cost(example1_formula, {0, 1, 4, 6}) == 122
    assert cost(example1_formula, set()) == 0
    assert cost(example1_formula, {5}) == 1
    with pytest.raises(FormulaError):
        cost(example1_formula, {7})


@settings(max_examples=50, deadline=None)
@given(st.sets(st.integers(0, 6)), st.sets(st.integers(0, 6)))
def test_cost_monotone(a, b):
    F = CnfFormula.build([[1]] * 7, [60, 60, 100, 100, 1, 1, 1])
    assert cost(F, a) <= cost(F, a | b)


def test_negate_set():
    assert negate_set({2, -3}) == {-2, 3}
    assert negate_set(set()) == frozenset()
    assert negate_set(negate_set({1})) == {1}


def test_interpretation_rejects_inconsistency():
    with pytest.raises(FormulaError):
        interpretation({1, -1})


def test_parse_problem_example1(example1_problem):
    p = example1_problem
    assert len(p.constraints) == 4
    assert p.constraints.weights == (60, 60, 100, 100)
    assert p.initial == {1}


def test_parse_problem_default_weights():
    p = parse_problem('{"atoms": ["a"], "clauses": [{"lits": [1], "group": "agnostic"}], "initial": []}')
    assert p.constraints.weights == (60,)
    assert p.weights.fact == 1


@pytest.mark.parametrize("doc", [
    '{"atoms": ["a"], "clauses": [], "initial": [1, -1]}',
    '{"atoms": ["a"], "clauses": [{"lits": [1], "group": "specific"}], "initial": [-1]}',
    '{"atoms": ["a"], "clauses": [{"lits": [1], "group": "hard"}], "initial": []}',
    '{"atoms": ["a"], "clauses": [{"lits": [2]}], "initial": []}',
    '{"atoms": ["a"], "clause": []}',
    '[1, 2]',
    'not json',
])
def test_parse_problem_errors(doc):
    with pytest.raises(ProblemError):
        parse_problem(doc)


def test_assemble_example1(example1_problem):
    F, D = assemble_ocus_formula(example1_problem, {1})
    assert len(F) == 7
    assert F.clauses[4:] == ((1,), (2,), (-3,))
    assert F.groups[4:] == (Group.DERIVED, Group.NEGATED, Group.NEGATED)
    assert F.weights == (60, 60, 100, 100, 1, 1, 1)
    assert D == {5, 6}


def test_assemble_single_remaining_literal(example1_problem):
    F, D = assemble_ocus_formula(example1_problem, {1, 3})
    assert len(D) == 1
    assert F.clauses[sorted(D)[0]] == (2,)


def test_assemble_nothing_left(example1_problem):
    with pytest.raises(ProblemError):
        assemble_ocus_formula(example1_problem, {1, -2, 3})


@pytest.mark.parametrize("I", [{1}, {1, 3}, {1, -2}])
def test_assemble_shape(example1_problem, I):
    F, D = assemble_ocus_formula(example1_problem, I)
    C = example1_problem.constraints
    assert F.clauses[:len(C)] == C.clauses and F.weights[:len(C)] == C.weights
    assert F.groups.count(Group.DERIVED) == len(I)
    assert F.groups.count(Group.NEGATED) == len(example1_problem.target - I) == len(D)
