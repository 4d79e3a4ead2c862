from __future__ import annotations

import random
from importlib import resources

import numpy as np
import pytest

from ocus.formula import CnfFormula
from ocus.problem import load_problem
from ocus.puzzle import load_puzzle

# Example 1 clauses c1..c7 live at indices 0..6.
EXAMPLE1_CLAUSES = [[-1, -2, 3], [-1, 2, 3], [1], [-2, -3], [1], [2], [-3]]
EXAMPLE1_WEIGHTS = [60, 60, 100, 100, 1, 1, 1]
EXAMPLE1_END = [1, -2, 3]


def data_path(*parts):
    return resources.files("ocus").joinpath("/".join(("data",) + parts))


SAMPLE_PUZZLES = ["grid2x2", "grid3x3", "zebra4x4"]


@pytest.fixture
def example1_formula():
    return CnfFormula.build(EXAMPLE1_CLAUSES, EXAMPLE1_WEIGHTS)


@pytest.fixture
def example1_problem():
    return load_problem(data_path("example1.json"))


_puzzle_cache = {}


def puzzle(name):
    if name not in _puzzle_cache:
        _puzzle_cache[name] = load_puzzle(data_path("puzzles", f"{name}.json")).with_target()
    return _puzzle_cache[name]


def random_formula(rng: random.Random, max_atoms=8, max_clauses=12, max_weight=100, min_clauses=1):
    n = rng.randint(1, max_atoms)
    m = rng.randint(min_clauses, max_clauses)
    clauses = []
    for _ in range(m):
        k = rng.randint(1, min(3, n))
        atoms = rng.sample(range(1, n + 1), k)
        clauses.append([a if rng.random() < 0.5 else -a for a in atoms])
    weights = [rng.randint(1, max_weight) for _ in range(m)]
    return CnfFormula.build(clauses, weights, atom_count=n)


def exhaustive_hitting_set(sets, weights, active, constraint):
    """Reference optimum over every subset of ``active`` by vectorised enumeration.

    Minimises the cost, then the sum of 2**i over the chosen indices.
    Returns ``(indices, cost)`` or ``None``.
    """
    elems = sorted(active)
    masks = np.arange(1 << len(elems), dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(len(elems))) & 1).astype(bool)
    ok = np.ones(len(masks), dtype=bool)
    for H in sets:
        cols = [b for b, e in enumerate(elems) if e in H]
        ok &= bits[:, cols].any(axis=1) if cols else False
    domain = getattr(constraint, "domain", None)
    if domain is not None:
        cols = [b for b, e in enumerate(elems) if e in domain]
        ok &= bits[:, cols].sum(axis=1) == 1
    if not ok.any():
        return None
    w = np.array([weights[e] for e in elems], dtype=np.int64)
    tie = np.array([1 << e for e in elems], dtype=object)
    costs = bits @ w
    best_cost = costs[ok].min()
    rows = np.flatnonzero(ok & (costs == best_cost))
    best = min(rows, key=lambda r: sum(tie[bits[r]]))
    return frozenset(e for b, e in enumerate(elems) if bits[best, b]), int(best_cost)


def unsat_table(formula):
    """Boolean array indexed by clause-subset bitmask: True where the subset is unsatisfiable."""
    n, m = formula.atom_count, len(formula)
    models = np.arange(1 << n, dtype=np.int64)
    values = ((models[:, None] >> np.arange(n)) & 1).astype(bool)  # atom a+1 true at column a
    sat_mask = np.zeros(len(models), dtype=np.int64)
    for i, clause in enumerate(formula.clauses):
        hit = np.zeros(len(models), dtype=bool)
        for l in clause:
            hit |= values[:, abs(l) - 1] if l > 0 else ~values[:, abs(l) - 1]
        sat_mask |= hit.astype(np.int64) << i
    subsets = np.arange(1 << m, dtype=np.int64)
    satisfiable = np.zeros(len(subsets), dtype=bool)
    for mm in np.unique(sat_mask):
        satisfiable |= (subsets & mm) == subsets
    return ~satisfiable


def exhaustive_ocus(formula, domain=None):
    """Cheapest unsatisfiable subset (with exactly one element of ``domain`` if given).

    Returns ``(cost, winners)`` or ``None``.
    """
    m = len(formula)
    unsat = unsat_table(formula)
    subsets = np.arange(1 << m, dtype=np.int64)
    bits = ((subsets[:, None] >> np.arange(m)) & 1).astype(bool)
    ok = unsat.copy()
    if domain is not None:
        ok &= bits[:, sorted(domain)].sum(axis=1) == 1
    if not ok.any():
        return None
    costs = bits @ np.array(formula.weights, dtype=np.int64)
    best = costs[ok].min()
    winners = [frozenset(np.flatnonzero(bits[r]).tolist()) for r in np.flatnonzero(ok & (costs == best))]
    return int(best), winners
