"""Optimal constrained unsatisfiable subsets (OCUS) and step-wise explanations.

The package computes cost-optimal unsatisfiable subsets of weighted CNF
formulas with the implicit hitting-set method and uses them to explain, one
cheap inference step at a time, why a satisfiable problem forces its
solution.  Logic-grid puzzles are the running example.
"""

from __future__ import annotations

from .dimacs import ParseError, parse_dimacs, read_dimacs, serialize_dimacs, write_dimacs
from .engine import (MAX_ACTUAL_UNIF, NO_GROW, GrowStrategy, OcusResult, SatSubsetCache, Status, grow,
                     ocus, ous_bounded)
from .explain import (ConfigError, ExplanationError, ExplanationSequence, ExplanationStep,
                      ExplanationTimeout, Explainer, SequenceConfig, compare_with_optimal,
                      explain_full, explain_one_step_mus, explain_one_step_ocus, explain_one_step_ous,
                      verify_sequence)
from .formula import CnfFormula, FormulaError, Group, cost, interpretation, negate_set
from .hitting_set import TRIVIALLY_TRUE, ExactlyOne, HittingSetSolver
from .maxsat import MaxSatInstance, maximize
from .oracles import consequences, enumerate_mcs, enumerate_mus, mus_deletion
from .problem import (ExplanationProblem, ProblemError, WeightScheme, assemble_ocus_formula,
                      load_problem, parse_problem)
from .puzzle import PuzzleSpec, encode, load_puzzle, parse_puzzle
from .sat import SatOracle, model_satisfied_clauses, solve_subset

__version__ = "0.1.0"

__all__ = [
    "ParseError",
    "parse_dimacs",
    "read_dimacs",
    "serialize_dimacs",
    "write_dimacs",
    "MAX_ACTUAL_UNIF",
    "NO_GROW",
    "GrowStrategy",
    "OcusResult",
    "SatSubsetCache",
    "Status",
    "grow",
    "ocus",
    "ous_bounded",
    "ConfigError",
    "ExplanationError",
    "ExplanationSequence",
    "ExplanationStep",
    "ExplanationTimeout",
    "Explainer",
    "SequenceConfig",
    "compare_with_optimal",
    "explain_full",
    "explain_one_step_mus",
    "explain_one_step_ocus",
    "explain_one_step_ous",
    "verify_sequence",
    "CnfFormula",
    "FormulaError",
    "Group",
    "cost",
    "interpretation",
    "negate_set",
    "TRIVIALLY_TRUE",
    "ExactlyOne",
    "HittingSetSolver",
    "MaxSatInstance",
    "maximize",
    "consequences",
    "enumerate_mcs",
    "enumerate_mus",
    "mus_deletion",
    "ExplanationProblem",
    "ProblemError",
    "WeightScheme",
    "assemble_ocus_formula",
    "load_problem",
    "parse_problem",
    "PuzzleSpec",
    "encode",
    "load_puzzle",
    "parse_puzzle",
    "SatOracle",
    "model_satisfied_clauses",
    "solve_subset",
]
