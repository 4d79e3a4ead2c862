"""Bounded OUS: per-literal searches that give up once they cannot beat the best step so far."""
from __future__ import annotations

from importlib import resources

from ocus.explain import Explainer, SequenceConfig
from ocus.puzzle import load_puzzle

problem = load_puzzle(resources.files("ocus").joinpath("data/puzzles/grid3x3.json")).with_target()
ex = Explainer(problem, SequenceConfig.from_label("ousb+perlit+max-actual-unif"))
try:
    seq = ex.run()
finally:
    ex.close()
for k, (step, stats) in enumerate(zip(seq.steps, ex.step_stats)):
    print(f"step {k:2d} cost {step.cost:4d}  literals left {stats['remaining']:2d}  "
          f"cut short by the bound {stats['exceeds_bound']:2d}")
