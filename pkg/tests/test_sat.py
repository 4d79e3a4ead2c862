import random
from itertools import product

import pytest

from ocus.formula import CnfFormula, FormulaError, clause_satisfied
from ocus.maxsat import HardClausesUnsatisfiable, MaxSatInstance, maximize, satisfied_weight
from ocus.sat import SatOracle, hint_from_literals, model_satisfied_clauses, solve_subset

from conftest import EXAMPLE1_END, random_formula


def truth_table_sat(F, subset, assumptions=()):
    for values in product((False, True), repeat=F.atom_count):
        model = {a if v else -a for a, v in zip(range(1, F.atom_count + 1), values)}
        if all(l in model for l in assumptions) and all(clause_satisfied(F[i], model) for i in subset):
            return True
    return False


def test_example1_empty_subset_follows_hint(example1_formula):
    model = solve_subset(example1_formula, set(), hint=hint_from_literals(EXAMPLE1_END))
    assert model == {1, -2, 3}


def test_example1_row6_unsat(example1_formula):
    assert solve_subset(example1_formula, {0, 1, 4, 6}) is None


def test_assumption_conflict():
    F = CnfFormula.build([[1]])
    assert solve_subset(F, {0}, assumptions=[-1]) is None
    with pytest.raises(FormulaError):
        solve_subset(F, {0}, assumptions=[5])


def test_agrees_with_truth_table_and_models_replay():
    rng = random.Random(11)
    for _ in range(300):
        F = random_formula(rng, max_atoms=rng.choice([4, 8, 12]), max_clauses=30)
        with SatOracle(F) as oracle:
            for _ in range(4):
                S = {i for i in range(len(F)) if rng.random() < 0.6}
                assume = [a if rng.random() < 0.5 else -a for a in rng.sample(range(1, F.atom_count + 1),
                                                                           rng.randint(0, min(2, F.atom_count)))]
                model = oracle.solve(sorted(S), assume)
                assert (model is not None) == truth_table_sat(F, S, assume)
                if model is not None:
                    assert len(model) == F.atom_count
                    assert all(clause_satisfied(F[i], model) for i in S)
                    assert all(l in model for l in assume)


def test_monotone_unsat():
    rng = random.Random(5)
    for _ in range(100):
        F = random_formula(rng, max_atoms=5, max_clauses=14)
        with SatOracle(F) as oracle:
            S = [i for i in range(len(F)) if rng.random() < 0.5]
            if oracle.solve(S) is None:
                extra = [i for i in range(len(F)) if rng.random() < 0.5]
                assert oracle.solve(sorted(set(S) | set(extra))) is None


def test_unsat_core_is_unsat_subset():
    rng = random.Random(9)
    for _ in range(100):
        F = random_formula(rng, max_atoms=5, max_clauses=14)
        with SatOracle(F) as oracle:
            core = oracle.core(range(len(F)))
            if core is not None:
                assert not truth_table_sat(F, core)


def test_hint_determinism_fresh_instances():
    rng = random.Random(3)
    for _ in range(50):
        F = random_formula(rng, max_atoms=10, max_clauses=15)
        hint = {a: rng.random() < 0.5 for a in range(1, F.atom_count + 1)}
        S = [i for i in range(len(F)) if rng.random() < 0.5]
        assert solve_subset(F, S, hint=hint) == solve_subset(F, S, hint=hint)


def test_hint_is_branched_first_when_free():
    F = CnfFormula.build([[1, 2, 3]], atom_count=4)
    hint = {1: False, 2: True, 3: False, 4: True}
    assert solve_subset(F, {0}, hint=hint) == {-1, 2, -3, 4}
    # default polarity is negative
    assert solve_subset(CnfFormula.build([], atom_count=2), set()) == {-1, -2}


def test_model_satisfied_clauses(example1_formula):
    assert model_satisfied_clauses(example1_formula, {1, -2, 3}) == {0, 1, 2, 3, 4}
    G = CnfFormula.build([[1], [-1]])
    assert model_satisfied_clauses(G, {1}) == {0}
    H = CnfFormula.build([[1, 2], [2]])
    assert model_satisfied_clauses(H, {1, 2}) == {0, 1}
    with pytest.raises(FormulaError):
        model_satisfied_clauses(H, {1})


# -- MaxSAT -----------------------------------------------------------------


def test_maxsat_example1_row1(example1_formula):
    inst = MaxSatInstance(example1_formula, frozenset(), {i: 1 for i in range(5)},
                          hint_from_literals(EXAMPLE1_END))
    model, satisfied = maximize(inst)
    assert model == {1, -2, 3}
    assert satisfied >= {0, 1, 2, 3, 4}


def test_maxsat_forced_by_hard():
    F = CnfFormula.build([[1], [-1], [1, 2]])
    model, satisfied = maximize(MaxSatInstance(F, frozenset({0}), {1: 5, 2: 1}))
    assert 1 in model
    assert satisfied == {0, 2}
    assert satisfied_weight(MaxSatInstance(F, frozenset({0}), {1: 5, 2: 1}), model) == 1


def test_maxsat_unsat_hard():
    F = CnfFormula.build([[1], [-1]])
    with pytest.raises(HardClausesUnsatisfiable):
        maximize(MaxSatInstance(F, frozenset({0, 1}), {}))


def brute_force_maxsat(inst):
    F = inst.formula
    best = None
    for values in product((False, True), repeat=F.atom_count):
        model = {a if v else -a for a, v in zip(range(1, F.atom_count + 1), values)}
        if not all(clause_satisfied(F[i], model) for i in inst.hard):
            continue
        w = sum(wt for i, wt in inst.soft.items() if clause_satisfied(F[i], model))
        best = w if best is None else max(best, w)
    return best


@pytest.mark.parametrize("seed", range(6))
def test_maxsat_matches_enumeration(seed):
    rng = random.Random(seed)
    done = 0
    while done < 25:
        F = random_formula(rng, max_atoms=8, max_clauses=20)
        idx = list(range(len(F)))
        rng.shuffle(idx)
        k = rng.randint(0, len(idx) // 3)
        hard, soft_idx = frozenset(idx[:k]), idx[k:]
        inst = MaxSatInstance(F, hard, {i: rng.randint(1, 9) for i in soft_idx},
                              {a: rng.random() < 0.5 for a in range(1, F.atom_count + 1)})
        expected = brute_force_maxsat(inst)
        if expected is None:
            with pytest.raises(HardClausesUnsatisfiable):
                maximize(inst)
            continue
        model, satisfied = maximize(inst)
        assert all(clause_satisfied(F[i], model) for i in hard)
        assert satisfied_weight(inst, model) == expected
        assert satisfied == hard | {i for i in inst.soft if clause_satisfied(F[i], model)}
        done += 1


def test_maxsat_uniform_is_max_cardinality():
    rng = random.Random(21)
    for _ in range(30):
        F = random_formula(rng, max_atoms=6, max_clauses=14)
        inst = MaxSatInstance(F, frozenset(), {i: 1 for i in range(len(F))})
        _, satisfied = maximize(inst)
        assert len(satisfied) == brute_force_maxsat(inst)
