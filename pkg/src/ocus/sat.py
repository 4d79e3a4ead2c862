"""Subset satisfiability on top of an incremental Minisat instance.

Each clause ``i`` of the formula is loaded once as ``(-s_i | C_i)`` with a
fresh selector atom ``s_i``; asking about a subset ``S`` means assuming the
selectors of ``S``.  Selector atoms never appear in returned models.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from pysat.solvers import Solver

from .formula import CnfFormula, FormulaError
from .maxsat import IncrementalMaxSat


def hint_from_literals(lits: Iterable[int]) -> dict:
    """Turn an interpretation into a polarity hint ``{atom: preferred value}``."""
    return {abs(l): l > 0 for l in lits}


class SatOracle:
    """Complete SAT oracle over clause subsets of one fixed formula.

    Atoms without a hint are branched negatively first.  The instance is
    stateful (learnt clauses survive between calls) and single-threaded.
    """

    def __init__(self, formula: CnfFormula, solver: str = "m22"):
        self.formula = formula
        self.n_atoms = formula.atom_count
        self._selector = [self.n_atoms + 1 + i for i in range(len(formula))]
        self._solver = Solver(name=solver)
        for i, cl in enumerate(formula.clauses):
            self._solver.add_clause([-self._selector[i], *cl])
        self.calls = 0
        self._maxsat = None

    def close(self):
        self._solver.delete()
        if self._maxsat is not None:
            self._maxsat.close()

    @property
    def maxsat(self) -> IncrementalMaxSat:
        """MaxSAT companion over the same formula, created on first use."""
        if self._maxsat is None:
            self._maxsat = IncrementalMaxSat(self.formula)
        return self._maxsat

    def selector(self, i: int) -> int:
        return self._selector[i]

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _set_phases(self, hint: Mapping[int, bool] | None):
        hint = hint or {}
        phases = [a if hint.get(a, False) else -a for a in range(1, self.n_atoms + 1)]
        phases.extend(-s for s in self._selector)
        self._solver.set_phases(phases)

    def solve(self, subset: Iterable[int], assumptions: Iterable[int] = (),
              hint: Mapping[int, bool] | None = None):
        """Return a total model (frozenset of literals) or ``None`` if unsatisfiable."""
        assumptions = list(assumptions)
        for l in assumptions:
            if l == 0 or abs(l) > self.n_atoms:
                raise FormulaError(f"assumption literal {l} is not an atom of the formula")
        sel = self._selector
        assume = [sel[i] for i in subset] + assumptions
        self._set_phases(hint)
        self.calls += 1
        if not self._solver.solve(assumptions=assume):
            return None
        model = self._solver.get_model()
        return frozenset(model[: self.n_atoms])

    def is_sat(self, subset: Iterable[int], assumptions: Iterable[int] = ()) -> bool:
        return self.solve(subset, assumptions) is not None

    def core(self, subset: Iterable[int]):
        """``None`` if ``subset`` is satisfiable, else the indices of an unsatisfiable core of it."""
        sel = self._selector
        assume = [sel[i] for i in subset]
        self._set_phases(None)
        self.calls += 1
        if self._solver.solve(assumptions=assume):
            return None
        base = self.n_atoms + 1
        return {s - base for s in (self._solver.get_core() or ())}


def solve_subset(formula: CnfFormula, subset: Iterable[int], assumptions: Iterable[int] = (),
                 hint: Mapping[int, bool] | None = None):
    """One-shot :meth:`SatOracle.solve` on a fresh oracle."""
    subset = formula.check_subset(subset)
    with SatOracle(formula) as oracle:
        return oracle.solve(sorted(subset), assumptions, hint)


def model_satisfied_clauses(formula: CnfFormula, model) -> frozenset:
    """Indices of the clauses of ``formula`` satisfied by a total ``model``."""
    model = frozenset(model)
    for a in range(1, formula.atom_count + 1):
        if a not in model and -a not in model:
            raise FormulaError(f"model is partial: atom {a} unassigned")
    return formula.satisfied_by(model)
