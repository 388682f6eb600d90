"""Instances where no plan with fewer than (r-1)m strokes is fair.

Kind j sits evenly on its own r-1 cookies, so each of those must be cut.
The exhaustive oracle confirms it, and probes the conjectured bound.
"""
from bundlesplit import oracle_optimal, probe_conjecture, tight_instance

for m, r, n in [(1, 3, 4), (2, 2, 4), (2, 3, 5)]:
    inst = tight_instance(m, r, n)
    budget = (r - 1) * m
    short = oracle_optimal(inst, r, budget - 1)
    enough = oracle_optimal(inst, r, budget)
    print(f"m={m} r={r} n={n}: {budget - 1} strokes fair? {short.feasible}; "
          f"{budget} strokes fair? {enough.feasible}, best min whole {enough.best_min_full}")

report = probe_conjecture(5, 2, [2, 3], 30, seed=4)
print("probe:", report.as_dict())
