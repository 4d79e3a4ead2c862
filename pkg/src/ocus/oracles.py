"""Deletion-based MUS extraction, backbones, and exhaustive subset enumerators.

The enumerators work from a truth table of the formula, so they are only
meant for tiny formulas; they serve as independent references for the
hitting-set based algorithms.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable

from .formula import CnfFormula, FormulaError, interpretation
from .sat import SatOracle

BRUTE_FORCE_LIMIT = 14
TRUTH_TABLE_ATOMS = 20


class SatisfiableInput(ValueError):
    """An operation that needs an unsatisfiable clause set got a satisfiable one."""


class UnsatisfiableBase(ValueError):
    pass


def mus_deletion(formula: CnfFormula, start: Iterable[int], oracle: SatOracle | None = None) -> frozenset:
    """Shrink the unsatisfiable subset ``start`` to a subset-minimal one.

    Clauses are tried for removal in descending index order.  After each
    unsatisfiable check the working set is cut down to the solver's core.
    """
    own = oracle is None
    oracle = oracle or SatOracle(formula)
    try:
        current = set(formula.check_subset(start))
        core = oracle.core(sorted(current))
        if core is None:
            raise SatisfiableInput("the starting subset is satisfiable")
        current &= core
        for i in sorted(current, reverse=True):
            if i not in current:
                continue
            trial = sorted(current - {i})
            core = oracle.core(trial)
            if core is not None:
                current = set(trial) & core
        return frozenset(current)
    finally:
        if own:
            oracle.close()


def consequences(constraints: CnfFormula, initial: Iterable[int] = ()) -> frozenset:
    """Literals true in every model of ``constraints`` plus the unit facts ``initial``."""
    initial = interpretation(initial)
    for l in initial:
        if abs(l) > constraints.atom_count:
            raise FormulaError(f"literal {l} is not an atom of the formula")
    with SatOracle(constraints) as oracle:
        everything = range(len(constraints))
        model = oracle.solve(everything, initial)
        if model is None:
            raise UnsatisfiableBase("constraints together with the initial facts are unsatisfiable")
        backbone = set(initial)
        for lit in sorted(model - initial, key=abs):
            if oracle.solve(everything, [*initial, -lit]) is None:
                backbone.add(lit)
        return frozenset(backbone)


# -- exhaustive references ------------------------------------------------


def model_masks(formula: CnfFormula) -> set:
    """Bitmask of satisfied clauses for every assignment of the formula's atoms."""
    n = formula.atom_count
    if n > TRUTH_TABLE_ATOMS:
        raise ValueError(f"truth table over {n} atoms is too large")
    clause_bits = [(1 << i, cl) for i, cl in enumerate(formula.clauses)]
    masks = set()
    for values in product((False, True), repeat=n):
        m = 0
        for bit, cl in clause_bits:
            for l in cl:
                if values[abs(l) - 1] == (l > 0):
                    m |= bit
                    break
        masks.add(m)
    return masks


def satisfiability_table(formula: CnfFormula) -> list:
    """``table[mask]`` tells whether the clause subset encoded by ``mask`` is satisfiable."""
    n = len(formula)
    if n > BRUTE_FORCE_LIMIT + 6:
        raise ValueError(f"{n} clauses exceed the brute-force limit")
    table = [False] * (1 << n)
    for m in model_masks(formula):
        table[m] = True
    # a subset of a satisfiable set is satisfiable
    for b in range(n):
        bit = 1 << b
        for m in range((1 << n) - 1, -1, -1):
            if m & bit and table[m]:
                table[m ^ bit] = True
    return table


def _to_set(mask: int) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _check_limit(formula, limit):
    if len(formula) > limit:
        raise ValueError(f"formula has {len(formula)} clauses, brute-force limit is {limit}")


def enumerate_mus(formula: CnfFormula, limit: int = BRUTE_FORCE_LIMIT) -> set:
    _check_limit(formula, limit)
    table = satisfiability_table(formula)
    n = len(formula)
    out = set()
    for m in range(1 << n):
        if table[m]:
            continue
        if all(table[m ^ (1 << b)] for b in range(n) if m >> b & 1):
            out.add(_to_set(m))
    return out


def enumerate_mcs(formula: CnfFormula, limit: int = BRUTE_FORCE_LIMIT) -> set:
    """All minimal correction subsets; a satisfiable formula has exactly one, the empty set."""
    _check_limit(formula, limit)
    table = satisfiability_table(formula)
    n = len(formula)
    full = (1 << n) - 1
    out = set()
    for m in range(1 << n):
        if not table[full ^ m]:
            continue
        # minimal: putting back any removed clause breaks satisfiability
        if all(not table[(full ^ m) | (1 << b)] for b in range(n) if m >> b & 1):
            out.add(_to_set(m))
    return out


def minimal_hitting_sets(sets: Iterable[frozenset], universe: Iterable[int]) -> set:
    """Subset-minimal hitting sets by exhaustive enumeration over ``universe``."""
    sets = [frozenset(s) for s in sets]
    elems = sorted(universe)
    hitting = []
    for mask in range(1 << len(elems)):
        S = frozenset(e for b, e in enumerate(elems) if mask >> b & 1)
        if all(not S.isdisjoint(H) for H in sets):
            hitting.append(S)
    hitting.sort(key=len)
    minimal = []
    for S in hitting:
        if not any(M < S for M in minimal):
            minimal.append(S)
    return set(minimal)


def brute_force_optimum(formula: CnfFormula, predicate=None, subsets_of=None):
    """Cheapest unsatisfiable subset satisfying ``predicate``, by exhaustive search.

    Returns ``(cost, subsets)`` with every optimal subset, or ``None``.
    ``subsets_of`` restricts the search to subsets of the given indices.
    """
    table = satisfiability_table(formula)
    allowed = 0
    for i in (range(len(formula)) if subsets_of is None else subsets_of):
        allowed |= 1 << i
    best, winners = None, []
    w = formula.weights
    m = allowed
    while True:
        if not table[m]:
            S = _to_set(m)
            if predicate is None or predicate(S):
                c = sum(w[i] for i in S)
                if best is None or c < best:
                    best, winners = c, [S]
                elif c == best:
                    winners.append(S)
        if m == 0:
            break
        m = (m - 1) & allowed
    if best is None:
        return None
    return best, winners
