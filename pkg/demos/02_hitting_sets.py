"""Incremental minimum-cost hitting sets, with and without an exactly-one side constraint."""
from __future__ import annotations

from ocus.hitting_set import TRIVIALLY_TRUE, ExactlyOne, HittingSetSolver, brute_force_hitting_set

weights = {0: 60, 1: 60, 2: 100, 3: 100, 4: 1, 5: 1, 6: 1}
sets = [{5, 6}, {3, 6}, {1, 5}, {0}, {2, 4}]

for constraint in (TRIVIALLY_TRUE, ExactlyOne({5, 6})):
    hs = HittingSetSolver(weights, weights, constraint)
    print(constraint)
    for H in sets:
        hs.add_set(H)
        hit = hs.solve()
        print(f"  after {sorted(H)}: {sorted(hit.indices)} cost {hit.cost}")
    print("  exhaustive:", brute_force_hitting_set(sets, weights, set(weights), constraint))
