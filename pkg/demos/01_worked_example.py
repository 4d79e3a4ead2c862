"""The seven-clause worked example: one OCUS call with its hitting-set trace.

Clauses c1..c7 are stored at indices 0..6.  The last two unit clauses are the
negated target literals, and exactly one of them must appear in the answer.
"""
from __future__ import annotations

from ocus.engine import MAX_ACTUAL_UNIF, ocus
from ocus.formula import CnfFormula
from ocus.hitting_set import ExactlyOne
from ocus.sat import hint_from_literals

CLAUSES = [[-1, -2, 3], [-1, 2, 3], [1], [-2, -3], [1], [2], [-3]]
WEIGHTS = [60, 60, 100, 100, 1, 1, 1]


def main() -> None:
    formula = CnfFormula.build(CLAUSES, WEIGHTS)
    trace: list = []
    result = ocus(formula, ExactlyOne({5, 6}), MAX_ACTUAL_UNIF,
                  hint=hint_from_literals([1, -2, 3]), actual_domain=range(5), trace=trace)
    for rec in trace:
        names = " ".join(f"c{i + 1}" for i in rec.hitting_set)
        print(f"{rec.iteration:2d}  {{{names}}}  cost={rec.cost}  {rec.verdict}")
    print("OCUS:", sorted(f"c{i + 1}" for i in result.subset), "cost", result.cost)


if __name__ == "__main__":
    main()
