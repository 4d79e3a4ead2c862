import random

import pytest

from ocus.engine import (MAX_ACTUAL_UNIF, NO_GROW, GrowStrategy, SatSubsetCache, Status, grow, ocus,
                         ous_bounded, soft_weights)
from ocus.formula import CnfFormula
from ocus.hitting_set import TRIVIALLY_TRUE, ExactlyOne, HittingSetSolver
from ocus.sat import SatOracle, hint_from_literals, solve_subset

from conftest import EXAMPLE1_CLAUSES, EXAMPLE1_END, EXAMPLE1_WEIGHTS, exhaustive_ocus, random_formula

HINT = hint_from_literals(EXAMPLE1_END)
ACTUAL = range(5)
ALL_GROWS = [GrowStrategy.from_label(label) for label in GrowStrategy.labels()]


def run_example1(strategy=MAX_ACTUAL_UNIF, **kw):
    F = CnfFormula.build([[-1, -2, 3], [-1, 2, 3], [1], [-2, -3], [1], [2], [-3]],
                         [60, 60, 100, 100, 1, 1, 1])
    trace = []
    result = ocus(F, ExactlyOne({5, 6}), strategy, hint=HINT, actual_domain=ACTUAL, trace=trace, **kw)
    return result, trace


def test_example1_found_122():
    result, trace = run_example1()
    assert result.status is Status.FOUND
    assert result.subset == {0, 1, 4, 6}
    assert result.cost == 122
    assert [t.verdict for t in trace][-1] == "unsat"
    assert all(t.verdict == "sat" for t in trace[:-1])
    costs = [t.cost for t in trace]
    assert costs == sorted(costs)
    assert trace[0].hitting_set == (5,) and trace[1].hitting_set == (6,)


def test_example1_grow_columns():
    # with fresh MaxSAT calls the hint decides between the tied optima
    model = solve_subset(CnfFormula.build(EXAMPLE1_CLAUSES), {6}, hint=HINT)
    F = CnfFormula.build(EXAMPLE1_CLAUSES, EXAMPLE1_WEIGHTS)
    assert grow(F, {6}, model, MAX_ACTUAL_UNIF, ACTUAL, HINT) == {0, 2, 3, 4, 6}    # {c1,c3,c4,c5,c7}
    model = solve_subset(F, {1, 6}, hint=HINT)
    assert grow(F, {1, 6}, model, MAX_ACTUAL_UNIF, ACTUAL, HINT) == {1, 2, 3, 4, 5, 6}  # {c2..c7}


@pytest.mark.parametrize("strategy", ALL_GROWS, ids=lambda g: g.label)
def test_example1_every_grow_strategy_reaches_122(strategy):
    result, _ = run_example1(strategy)
    assert (result.subset, result.cost) == ({0, 1, 4, 6}, 122)


def test_every_stored_set_is_a_correction_subset():
    _, trace = run_example1()
    F = CnfFormula.build([[-1, -2, 3], [-1, 2, 3], [1], [-2, -3], [1], [2], [-3]])
    for t in trace:
        if t.verdict == "sat":
            assert set(t.new_set) == set(range(7)) - set(t.grown)
            assert solve_subset(F, t.grown) is not None


def test_satisfiable_formula_none_exists(example1_problem):
    result = ocus(example1_problem.constraints, TRIVIALLY_TRUE)
    assert result.status is Status.NONE_EXISTS
    assert not result.found


def test_exactly_one_domain_edge_cases():
    F = CnfFormula.build([[1], [-1], [2]])
    # every unsatisfiable subset needs both 0 and 1
    assert ocus(F, ExactlyOne({0, 1})).status is Status.NONE_EXISTS
    # a useless domain element can still be dragged along
    assert ocus(F, ExactlyOne({2})).subset == {0, 1, 2}
    assert ocus(F, TRIVIALLY_TRUE).subset == {0, 1}


def test_grow_examples(example1_formula):
    model = solve_subset(example1_formula, set(), hint=HINT)
    assert grow(example1_formula, set(), model, MAX_ACTUAL_UNIF, ACTUAL, HINT) == {0, 1, 2, 3, 4}
    model = solve_subset(example1_formula, {6}, hint=HINT)
    assert grow(example1_formula, {6}, model, MAX_ACTUAL_UNIF, ACTUAL, HINT) == {0, 2, 3, 4, 6}
    assert grow(example1_formula, {6}, model, NO_GROW, ACTUAL, HINT) == {6}
    assert grow(example1_formula, {6}, model, GrowStrategy.from_label("model")) == \
        {6} | {i for i, c in enumerate(example1_formula.clauses) if any(l in model for l in c)}


def test_soft_weight_schemes(example1_formula):
    assert soft_weights(example1_formula, [0, 2, 4], "unif") == {0: 1, 2: 1, 4: 1}
    assert soft_weights(example1_formula, [0, 2, 4], "pos") == {0: 60, 2: 100, 4: 1}
    assert soft_weights(example1_formula, [0, 2, 4], "inv") == {0: 41, 2: 1, 4: 100}


def test_grow_strategy_labels_round_trip():
    for label in GrowStrategy.labels():
        assert GrowStrategy.from_label(label).label == label
    with pytest.raises(ValueError):
        GrowStrategy.from_label("max-everything")


@pytest.mark.parametrize("seed", range(4))
def test_grow_results_are_satisfiable_supersets(seed):
    rng = random.Random(seed)
    for _ in range(15):
        F = random_formula(rng, max_atoms=10, max_clauses=16)
        S = {i for i in range(len(F)) if rng.random() < 0.3}
        model = solve_subset(F, S)
        if model is None:
            continue
        domain = [i for i in range(len(F)) if rng.random() < 0.7]
        for strategy in ALL_GROWS:
            G = grow(F, S, model, strategy, domain)
            assert G >= S
            assert solve_subset(F, G) is not None


def test_greedy_is_maximal_within_scan():
    rng = random.Random(10)
    greedy = GrowStrategy.from_label("greedy")
    checked = 0
    while checked < 40:
        F = random_formula(rng, max_atoms=10, max_clauses=25)
        S = {i for i in range(len(F)) if rng.random() < 0.2}
        model = solve_subset(F, S)
        if model is None:
            continue
        G = grow(F, S, model, greedy)
        for i in set(range(len(F))) - G:
            assert solve_subset(F, G | {i}) is None
        checked += 1


def test_ous_bounded_examples():
    # Example 1 without c6: explaining x3 only, c7 sits at index 5
    F = CnfFormula.build([[-1, -2, 3], [-1, 2, 3], [1], [-2, -3], [1], [-3]],
                         [60, 60, 100, 100, 1, 1])
    found = ous_bounded(F, 1000, hint=HINT, actual_domain=range(5))
    assert found.status is Status.FOUND and (found.subset, found.cost) == ({0, 1, 4, 5}, 122)
    assert exhaustive_ocus(F, {5})[0] == 122
    assert ous_bounded(F, 100, hint=HINT, actual_domain=range(5)).status is Status.EXCEEDS_BOUND
    unbounded = ous_bounded(F, None, hint=HINT, actual_domain=range(5))
    assert (unbounded.subset, unbounded.cost) == (found.subset, found.cost)
    assert ous_bounded(F, 122, hint=HINT).cost == 122  # the bound is strict


def test_bounded_keeps_learned_sets():
    F = CnfFormula.build([[-1, -2, 3], [-1, 2, 3], [1], [-2, -3], [1], [-3]],
                         [60, 60, 100, 100, 1, 1])
    hs = HittingSetSolver(range(6), dict(enumerate(F.weights)))
    cache = SatSubsetCache()
    assert ous_bounded(F, 100, hs=hs, cache=cache, hint=HINT).status is Status.EXCEEDS_BOUND
    learned = len(hs.sets)
    assert learned > 0 and len(cache) > 0
    assert ous_bounded(F, 1000, hs=hs, cache=cache, hint=HINT).cost == 122
    assert len(hs.sets) >= learned


def test_theorem1_against_exhaustive_enumeration():
    rng = random.Random(2024)
    for _ in range(120):
        F = random_formula(rng, max_atoms=6, max_clauses=11)
        domain = set(rng.sample(range(len(F)), rng.randint(1, len(F))))
        for constraint, dom in ((TRIVIALLY_TRUE, None), (ExactlyOne(domain), domain)):
            expected = exhaustive_ocus(F, dom)
            result = ocus(F, constraint, rng.choice(ALL_GROWS))
            if expected is None:
                assert result.status is Status.NONE_EXISTS
            else:
                assert result.status is Status.FOUND
                assert result.cost == expected[0]
                assert result.subset in expected[1]


def test_grow_independence_and_cache_soundness():
    rng = random.Random(77)
    for _ in range(40):
        F = random_formula(rng, max_atoms=6, max_clauses=12)
        domain = set(rng.sample(range(len(F)), rng.randint(1, len(F))))
        results = {(r.status, r.subset, r.cost) for r in
                   (ocus(F, ExactlyOne(domain), g) for g in ALL_GROWS)}
        assert len(results) == 1
        # a cache filled by an unrelated call over the same universe
        cache = SatSubsetCache()
        ocus(F, TRIVIALLY_TRUE, MAX_ACTUAL_UNIF, cache=cache)
        warm = ocus(F, ExactlyOne(domain), MAX_ACTUAL_UNIF, cache=cache)
        assert (warm.status, warm.subset, warm.cost) in results


def test_cache_entries_are_satisfiable():
    rng = random.Random(8)
    for _ in range(30):
        F = random_formula(rng, max_atoms=6, max_clauses=12)
        cache = SatSubsetCache()
        ocus(F, TRIVIALLY_TRUE, cache=cache)
        with SatOracle(F) as oracle:
            assert all(oracle.is_sat(sorted(S)) for S in cache)


def test_no_hitting_set_repeats_in_trace():
    rng = random.Random(12)
    for _ in range(30):
        F = random_formula(rng, max_atoms=5, max_clauses=8)
        trace = []
        ocus(F, TRIVIALLY_TRUE, NO_GROW, trace=trace)
        seen = [t.hitting_set for t in trace]
        assert len(seen) == len(set(seen))
