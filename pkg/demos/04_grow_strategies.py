"""Time every grow strategy on one puzzle; the step costs never change, only the speed."""
from __future__ import annotations

import time
from importlib import resources

from ocus.engine import GrowStrategy
from ocus.explain import ExplanationTimeout, SequenceConfig, explain_full
from ocus.puzzle import load_puzzle

problem = load_puzzle(resources.files("ocus").joinpath("data/puzzles/grid3x3.json")).with_target()
for label in ("none", "model", "greedy", "max-full-unif", "max-actual-unif", "max-actual-inv"):
    start = time.perf_counter()
    try:
        seq = explain_full(problem, SequenceConfig("ocus", "ss", GrowStrategy.from_label(label)), timeout=10)
    except ExplanationTimeout as e:
        print(f"{label:18s} gave up after 10 s with {len(e.partial.steps)} steps done")
        continue
    print(f"{label:18s} {time.perf_counter() - start:6.2f} s  total cost {seq.total_cost}")
