"""Exact weighted partial MaxSAT over clause subsets of a formula.

Used by the MaxSAT grow strategies.  The search itself is RC2; this module
maps clause indices in and out and pushes the polarity hint into RC2's SAT
oracle so that ties between optimal models are broken towards the hint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from pysat.examples.rc2 import RC2, RC2Stratified
from pysat.formula import WCNF
from pysat.solvers import Solver

from .formula import CnfFormula, clause_satisfied


class HardClausesUnsatisfiable(ValueError):
    pass


@dataclass
class MaxSatInstance:
    formula: CnfFormula
    hard: frozenset
    soft: Mapping[int, int]
    hint: Mapping[int, bool] = field(default_factory=dict)

    def __post_init__(self):
        self.hard = self.formula.check_subset(self.hard)
        self.formula.check_subset(self.soft)
        if self.hard & set(self.soft):
            raise ValueError("hard and soft clause indices overlap")
        for i, w in self.soft.items():
            if w <= 0:
                raise ValueError(f"soft weight of clause {i} must be positive, got {w}")


def maximize(inst: MaxSatInstance):
    """Return ``(model, satisfied)`` maximising the satisfied soft weight.

    ``model`` is a total assignment over the formula's atoms and
    ``satisfied`` is ``hard`` plus the soft indices the model satisfies.
    Raises :class:`HardClausesUnsatisfiable` if the hard part has no model.
    """
    F = inst.formula
    n = F.atom_count
    # Soft clauses are handed over already relaxed: each becomes the hard
    # clause C_i | ~r_i plus the unit soft clause r_i.  RC2 would do the
    # same itself, but much more slowly on formulas with a thousand clauses.
    wcnf = WCNF()
    for i in sorted(inst.hard):
        if not F[i]:
            raise HardClausesUnsatisfiable(f"hard clause {i} is empty")
    soft = [i for i in sorted(inst.soft) if F[i]]
    wcnf.nv = n + len(soft)
    wcnf.hard = [list(F[i]) for i in sorted(inst.hard)]
    wcnf.hard.extend([*F[i], -(n + 1 + k)] for k, i in enumerate(soft))
    hint = inst.hint or {}
    wcnf.soft = [[n + 1 + k] for k in range(len(soft))]
    wcnf.wght = [inst.soft[i] for i in soft]
    wcnf.topw = sum(wcnf.wght) + 1
    phases = [a if hint.get(a, False) else -a for a in range(1, n + 1)]
    with RC2(wcnf, solver="m22") as rc2:
        rc2.oracle.set_phases(phases)
        model = rc2.compute()
    if model is None:
        raise HardClausesUnsatisfiable("hard clauses are unsatisfiable")
    model = _complete(model, n)
    sat = F.satisfied_by(model)
    return model, inst.hard | frozenset(i for i in inst.soft if i in sat)


def _complete(model, n):
    assigned = {abs(l): l for l in model if abs(l) <= n}
    return frozenset(assigned.get(a, -a) for a in range(1, n + 1))


def satisfied_weight(inst: MaxSatInstance, model) -> int:
    return sum(w for i, w in inst.soft.items() if clause_satisfied(inst.formula[i], model))


class _ScopedSolver:
    """One RC2 run's view of a shared, persistent SAT solver.

    Clauses RC2 adds (totalizers, hardened units) are guarded by a fresh
    activation literal and retired when the run ends, so the shared solver
    keeps only its learnt clauses.  The hard clauses are switched on by
    assuming their selectors on every call.
    """

    def __init__(self, solver, fixed, act, n_atoms):
        self._solver = solver
        self._n_atoms = n_atoms
        self._act = act
        self._fixed = [*fixed, act]
        self._strip = set(self._fixed)
        self._open = True

    def add_clause(self, clause, no_return=True):
        self._solver.add_clause([*clause, -self._act])

    def solve(self, assumptions=()):
        return self._solver.solve(assumptions=self._fixed + list(assumptions))

    def solve_limited(self, assumptions=(), expect_interrupt=False):
        return self._solver.solve_limited(assumptions=self._fixed + list(assumptions),
                                          expect_interrupt=expect_interrupt)

    def get_core(self):
        core = self._solver.get_core()
        return None if core is None else [l for l in core if l not in self._strip]

    def get_model(self):
        return self._solver.get_model()[: self._n_atoms]

    def get_status(self):
        return self._solver.get_status()

    def supports_atmost(self):
        return False

    def set_phases(self, literals):
        self._solver.set_phases(literals)

    def delete(self):
        if self._open:
            self._solver.add_clause([-self._act])
            self._open = False


class _Identity:
    """Variable map under which every atom keeps its own id."""

    def __contains__(self, v):
        return True

    def __getitem__(self, v):
        return v


class _SharedMixin:
    """Makes an RC2 variant work on selector literals already in a shared solver."""

    def __init__(self, view, selectors, weights, top):
        self._view = view
        wcnf = WCNF()
        wcnf.nv = top
        wcnf.soft = [[s] for s in selectors]
        wcnf.wght = list(weights)
        wcnf.topw = sum(weights) + 1
        super().__init__(wcnf, solver="m22")

    def init(self, formula, incr=False):
        self.oracle = self._view
        for i, (cl, w) in enumerate(zip(formula.soft, formula.wght)):
            s = cl[0]
            self.sels.append(s)
            self.wght[s] = w
            self.smap[s] = i
        self.sels_set = set(self.sels)
        self.sall = self.sels[:]
        self.garbage = set()
        self.vmap = type(self.vmap)(e2i=_Identity(), i2e=_Identity())


class _SharedRC2(_SharedMixin, RC2):
    pass


class _SharedRC2Stratified(_SharedMixin, RC2Stratified):
    pass


class IncrementalMaxSat:
    """Persistent MaxSAT over clause subsets of one formula.

    Each clause ``C_i`` is loaded once as ``-s_i | C_i``; a call assumes the
    selectors of the hard clauses and lets RC2 relax the selectors of the
    soft ones.  Every RC2 run leaves retired totalizer clauses behind, so
    the solver is rebuilt from scratch every ``refresh`` calls.
    """

    def __init__(self, formula: CnfFormula, refresh: int = 40):
        self.formula = formula
        self.refresh = refresh
        self.calls = 0
        self._solver = None
        self._empty = frozenset(i for i, cl in enumerate(formula.clauses) if not cl)

    def _fresh(self):
        F = self.formula
        n = F.atom_count
        if self._solver is not None:
            self._solver.delete()
        self._solver = Solver(name="m22")
        for i, cl in enumerate(F.clauses):
            self._solver.add_clause([-(n + 1 + i), *cl])
        self._top = n + len(F)
        self._since = 0

    def close(self):
        if self._solver is not None:
            self._solver.delete()
            self._solver = None

    def _phases(self, hint):
        hint = hint or {}
        n = self.formula.atom_count
        return [a if hint.get(a, False) else -a for a in range(1, n + 1)]

    def maximize(self, hard: Iterable[int], soft: Mapping[int, int],
                 hint: Mapping[int, bool] | None = None):
        """Same contract as :func:`maximize`."""
        if self._solver is None or self._since >= self.refresh:
            self._fresh()
        self._since += 1
        self.calls += 1
        F = self.formula
        n = F.atom_count
        hard = frozenset(hard)
        soft = {i: w for i, w in soft.items() if i not in hard and i not in self._empty}
        self._top += 1
        view = _ScopedSolver(self._solver, [n + 1 + i for i in sorted(hard)], self._top, n)
        order = sorted(soft)
        weights = [soft[i] for i in order]
        kind = _SharedRC2 if len(set(weights)) <= 1 else _SharedRC2Stratified
        rc2 = kind(view, [n + 1 + i for i in order], weights, self._top)
        try:
            self._solver.set_phases(self._phases(hint))
            model = rc2.compute()
            self._top = max(self._top, rc2.pool.top)
        finally:
            rc2.delete()
        if model is None:
            raise HardClausesUnsatisfiable("hard clauses are unsatisfiable")
        model = _complete(model, n)
        sat = F.satisfied_by(model)
        return model, hard | frozenset(i for i in soft if i in sat)
