"""Composite numbers of children and how the guarantees compare.

Six children are handled as two groups of three; eight by repeated halving.
The product trace records each stage's promise and what it delivered.
"""
import random

from bundlesplit import bounds_table, random_instance, solve, verify

rng = random.Random(1)
tray = random_instance(24, 2, rng)
for r in (4, 6, 8):
    trace = []
    report = verify(tray, solve(tray, r, trace), r)
    print(f"r={r}: fair={report.fair}, strokes={report.strokes}/{(r - 1) * tray.m}, min whole {min(report.full_per_agent)}")
    for rec in trace:
        print(f"   {rec.b} groups then {rec.a} each: groups got {min(rec.group_full)} (>= {rec.group_bound}), "
              f"children got {min(rec.child_full)} (>= {rec.child_bound})")
    print(bounds_table(tray.n, tray.m, r).render())
    print()
