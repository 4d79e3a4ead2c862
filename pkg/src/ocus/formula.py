"""Weighted, group-tagged CNF formulas and partial interpretations.

Literals are DIMACS-style signed integers: atom ``p`` is ``p`` and its
negation is ``-p``.  Interpretations are frozensets of such literals.
Subset reasoning everywhere in the package uses clause *indices* into a
:class:`CnfFormula`, never clause objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class FormulaError(ValueError):
    """Raised for ill-formed clauses, interpretations or index sets."""


class Group(enum.Enum):
    AGNOSTIC = "agnostic"
    SPECIFIC = "specific"
    FACT = "fact"
    DERIVED = "derived"
    NEGATED = "negated"


Clause = tuple  # tuple[int, ...], literals in input order, no duplicates


def make_clause(lits: Iterable[int]) -> Clause:
    """Normalise an iterable of literals into a clause.

    Repeated literals are collapsed (first occurrence wins); a clause holding
    both ``p`` and ``-p`` is rejected.
    """
    out = []
    seen = set()
    for lit in lits:
        lit = int(lit)
        if lit == 0:
            raise FormulaError("literal 0 is not allowed inside a clause")
        if -lit in seen:
            raise FormulaError(f"tautological clause (contains {abs(lit)} and {-abs(lit)})")
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def is_consistent(lits: Iterable[int]) -> bool:
    s = set(lits)
    return not any(-l in s for l in s)


def interpretation(lits: Iterable[int]) -> frozenset:
    """Build a consistent interpretation, raising on ``{p, -p}``."""
    s = frozenset(int(l) for l in lits)
    if 0 in s:
        raise FormulaError("literal 0 is not allowed")
    if not is_consistent(s):
        bad = sorted(abs(l) for l in s if -l in s)
        raise FormulaError(f"inconsistent interpretation: atom(s) {bad} appear with both signs")
    return s


def negate_set(lits: Iterable[int]) -> frozenset:
    return frozenset(-l for l in lits)


@dataclass(frozen=True)
class CnfFormula:
    """Indexed clause list with a non-negative integer weight and a group per clause."""

    clauses: tuple
    weights: tuple
    groups: tuple
    atom_count: int

    def __post_init__(self):
        n = len(self.clauses)
        if len(self.weights) != n or len(self.groups) != n:
            raise FormulaError("every clause needs exactly one weight and one group")
        for w in self.weights:
            if w < 0 or int(w) != w:
                raise FormulaError(f"weights must be non-negative integers, got {w!r}")
        for cl in self.clauses:
            for lit in cl:
                if abs(lit) > self.atom_count:
                    raise FormulaError(f"literal {lit} exceeds atom count {self.atom_count}")

    @classmethod
    def build(cls, clauses: Iterable[Iterable[int]], weights=None, groups=None,
              atom_count: int | None = None) -> "CnfFormula":
        cls_ = tuple(make_clause(c) for c in clauses)
        n = len(cls_)
        if weights is None:
            weights = (1,) * n
        elif isinstance(weights, int):
            weights = (weights,) * n
        if groups is None:
            groups = (Group.SPECIFIC,) * n
        elif isinstance(groups, Group):
            groups = (groups,) * n
        if atom_count is None:
            atom_count = max((abs(l) for c in cls_ for l in c), default=0)
        return cls(cls_, tuple(int(w) for w in weights), tuple(groups), int(atom_count))

    def __len__(self) -> int:
        return len(self.clauses)

    def __getitem__(self, i: int) -> Clause:
        return self.clauses[i]

    @property
    def indices(self) -> frozenset:
        return frozenset(range(len(self.clauses)))

    @cached_property
    def _literal_table(self) -> np.ndarray:
        # Row i holds the literals of clause i shifted by atom_count; padding
        # points at the sentinel slot 2 * atom_count + 1, which is never true.
        n = self.atom_count
        width = max((len(c) for c in self.clauses), default=0) or 1
        table = np.full((len(self.clauses), width), 2 * n + 1, dtype=np.int64)
        for i, c in enumerate(self.clauses):
            table[i, :len(c)] = [l + n for l in c]
        return table

    def satisfied_by(self, model: Iterable[int]) -> frozenset:
        """Indices of the clauses containing at least one literal of ``model``."""
        n = self.atom_count
        truth = np.zeros(2 * n + 2, dtype=bool)
        lits = np.fromiter((l for l in model if 0 < abs(l) <= n), dtype=np.int64)
        truth[lits + n] = True
        return frozenset(np.flatnonzero(truth[self._literal_table].any(axis=1)).tolist())

    def indices_in(self, *groups: Group) -> frozenset:
        return frozenset(i for i, g in enumerate(self.groups) if g in groups)

    def check_subset(self, subset: Iterable[int]) -> frozenset:
        s = frozenset(subset)
        n = len(self.clauses)
        for i in s:
            if not 0 <= i < n:
                raise FormulaError(f"clause index {i} out of range for formula with {n} clauses")
        return s

    def extend(self, clauses: Sequence[Iterable[int]], weights: Sequence[int],
               groups: Sequence[Group]) -> "CnfFormula":
        """Return a new formula with clauses appended; existing indices are unchanged."""
        extra = tuple(make_clause(c) for c in clauses)
        atoms = max([self.atom_count] + [abs(l) for c in extra for l in c])
        return CnfFormula(self.clauses + extra, self.weights + tuple(int(w) for w in weights),
                          self.groups + tuple(groups), atoms)


def cost(formula: CnfFormula, subset: Iterable[int]) -> int:
    """Sum of clause weights over ``subset``."""
    s = formula.check_subset(subset)
    return sum(formula.weights[i] for i in s)


def clause_satisfied(clause: Clause, model) -> bool:
    return any(l in model for l in clause)


def format_literal(lit: int, names=None) -> str:
    if names is None:
        return str(lit)
    name = names[abs(lit) - 1]
    return name if lit > 0 else "~" + name


def format_clause(clause: Clause, names=None) -> str:
    if not clause:
        return "<empty>"
    return " | ".join(format_literal(l, names) for l in clause)
