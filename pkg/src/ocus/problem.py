"""Explanation problems: constraints, initial facts, target, and cost scheme."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .formula import CnfFormula, FormulaError, Group, interpretation, negate_set
from .sat import SatOracle


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class WeightScheme:
    agnostic: int = 60
    specific: int = 100
    fact: int = 1

    def weight(self, group: Group) -> int:
        if group is Group.AGNOSTIC:
            return self.agnostic
        if group is Group.SPECIFIC:
            return self.specific
        return self.fact


def lit_key(lit: int):
    return (abs(lit), lit < 0)


def sorted_lits(lits) -> list:
    return sorted(lits, key=lit_key)


@dataclass(frozen=True)
class ExplanationProblem:
    """``constraints`` hold only agnostic/specific clauses, already weighted by ``weights``."""

    constraints: CnfFormula
    initial: frozenset
    target: frozenset | None = None
    weights: WeightScheme = field(default_factory=WeightScheme)
    atoms: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "initial", interpretation(self.initial))
        if self.target is not None:
            object.__setattr__(self, "target", interpretation(self.target))
            if not self.initial <= self.target:
                raise ProblemError("initial facts must be contained in the target")
        for g in self.constraints.groups:
            if g not in (Group.AGNOSTIC, Group.SPECIFIC):
                raise ProblemError(f"constraint clauses must be agnostic or specific, got {g.value}")
        n = self.constraints.atom_count
        for l in self.initial | (self.target or frozenset()):
            if abs(l) > n:
                raise ProblemError(f"literal {l} refers to an unknown atom (atom count {n})")
        if self.atoms and len(self.atoms) != n:
            raise ProblemError(f"{len(self.atoms)} atom names given for {n} atoms")

    @property
    def atom_names(self):
        return self.atoms or tuple(f"x{i}" for i in range(1, self.constraints.atom_count + 1))

    def with_target(self) -> "ExplanationProblem":
        """Return a copy whose target is filled in with the backbone when absent."""
        if self.target is not None:
            return self
        from .oracles import consequences

        return ExplanationProblem(self.constraints, self.initial,
                                  consequences(self.constraints, self.initial),
                                  self.weights, self.atoms, self.name)

    def check_satisfiable(self) -> None:
        with SatOracle(self.constraints) as oracle:
            if oracle.solve(range(len(self.constraints)), self.initial) is None:
                raise ProblemError("constraints together with the initial facts are unsatisfiable")


def build_problem(clauses, groups, initial, target=None, weights=WeightScheme(), atoms=(),
                  atom_count=None, name="") -> ExplanationProblem:
    """Weight ``clauses`` by group, validate, and return the problem."""
    groups = tuple(groups)
    if atom_count is None:
        atom_count = len(atoms) if atoms else None
    try:
        F = CnfFormula.build(clauses, [weights.weight(g) for g in groups], groups, atom_count)
        problem = ExplanationProblem(F, interpretation(initial),
                                     None if target is None else interpretation(target),
                                     weights, tuple(atoms), name)
    except FormulaError as e:
        raise ProblemError(str(e)) from None
    problem.check_satisfiable()
    return problem


_GROUPS = {"agnostic": Group.AGNOSTIC, "specific": Group.SPECIFIC}


def parse_problem(text) -> ExplanationProblem:
    """Parse the JSON problem document.

    Fields: ``atoms`` (names), ``clauses`` (``{"lits": [...], "group": ...}``),
    ``initial``, optional ``target``, optional ``weights`` with keys
    ``agnostic``/``specific``/``fact``.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ProblemError("problem document must be a JSON object")
    unknown = set(doc) - {"atoms", "clauses", "initial", "target", "weights", "name"}
    if unknown:
        raise ProblemError(f"unknown field(s): {sorted(unknown)}")
    atoms = doc.get("atoms")
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise ProblemError("'atoms' must be a list of names")
    raw = doc.get("weights", {})
    if not isinstance(raw, dict) or set(raw) - {"agnostic", "specific", "fact"}:
        raise ProblemError("'weights' must be an object with keys agnostic/specific/fact")
    for k, v in raw.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ProblemError(f"weight {k!r} must be a non-negative integer")
    weights = WeightScheme(**raw)
    clauses, groups = [], []
    for n, entry in enumerate(doc.get("clauses", [])):
        if not isinstance(entry, dict) or not isinstance(entry.get("lits"), list):
            raise ProblemError(f"clause {n}: expected an object with a 'lits' list")
        group = entry.get("group", "specific")
        if group not in _GROUPS:
            raise ProblemError(f"clause {n}: group must be 'agnostic' or 'specific', got {group!r}")
        clauses.append(_lits(entry["lits"], f"clause {n}"))
        groups.append(_GROUPS[group])
    initial = _lits(doc.get("initial", []), "initial")
    target = doc.get("target")
    if target is not None:
        target = _lits(target, "target")
    return build_problem(clauses, groups, initial, target, weights, atoms,
                         atom_count=len(atoms), name=doc.get("name", ""))


def _lits(values, where):
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise ProblemError(f"{where}: expected a list of signed integers")
    return values


def load_problem(path) -> ExplanationProblem:
    with open(path, "rb") as f:
        problem = parse_problem(f.read())
    if not problem.name:
        from pathlib import Path

        object.__setattr__(problem, "name", Path(path).stem)
    return problem


def problem_to_document(problem: ExplanationProblem) -> dict:
    inv = {v: k for k, v in _GROUPS.items()}
    doc = {
        "name": problem.name,
        "atoms": list(problem.atom_names),
        "weights": {"agnostic": problem.weights.agnostic, "specific": problem.weights.specific,
                    "fact": problem.weights.fact},
        "clauses": [{"lits": list(c), "group": inv[g]}
                    for c, g in zip(problem.constraints.clauses, problem.constraints.groups)],
        "initial": sorted_lits(problem.initial),
    }
    if problem.target is not None:
        doc["target"] = sorted_lits(problem.target)
    return doc


def assemble_ocus_formula(problem: ExplanationProblem, I) -> tuple:
    """Build ``F_C & I & ~(target \\ I)`` and the indices of the negated-target units.

    Constraint clauses keep their indices; facts of ``I`` follow as
    ``DERIVED`` units and the negations of the still-unexplained target
    literals come last as ``NEGATED`` units, each in atom order.
    """
    problem = problem.with_target()
    I = interpretation(I)
    if not problem.initial <= I:
        raise ProblemError("interpretation must contain the initial facts")
    if not I <= problem.target:
        raise ProblemError("interpretation must be contained in the target")
    todo = problem.target - I
    if not todo:
        raise ProblemError("nothing left to explain: interpretation equals the target")
    fc = problem.weights.fact
    facts = sorted_lits(I)
    negs = sorted_lits(negate_set(todo))
    F = problem.constraints.extend([[l] for l in facts] + [[l] for l in negs],
                                   [fc] * (len(facts) + len(negs)),
                                   [Group.DERIVED] * len(facts) + [Group.NEGATED] * len(negs))
    start = len(problem.constraints) + len(facts)
    return F, frozenset(range(start, start + len(negs)))
