"""Explain a logic-grid puzzle step by step and check the result independently."""
from __future__ import annotations

import sys
from importlib import resources

from ocus.explain import SequenceConfig, explain_full, verify_sequence
from ocus.puzzle import load_puzzle

name = sys.argv[1] if len(sys.argv) > 1 else "grid3x3"
problem = load_puzzle(resources.files("ocus").joinpath(f"data/puzzles/{name}.json")).with_target()
names = problem.atom_names


def show(lit: int) -> str:
    return names[abs(lit) - 1] if lit > 0 else "~" + names[abs(lit) - 1]


seq = explain_full(problem, SequenceConfig.from_label("ocus+shared+max-actual-unif"))
for k, step in enumerate(seq.steps):
    facts = ", ".join(show(l) for l in sorted(step.facts_used, key=abs)) or "-"
    new = ", ".join(show(l) for l in sorted(step.derived, key=abs))
    print(f"{k:3d} cost {step.cost:4d}  {len(step.constraints_used)} constraints + [{facts}]  =>  {new}")
print("total cost", seq.total_cost, "valid:", verify_sequence(problem, seq).valid)
