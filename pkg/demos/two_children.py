"""Split a tray of frosted cookies between two children.

Shows the moment-curve solver, the cheaper two-kind construction, and what
the verifier reports for each plan.
"""
from bundlesplit import Instance, guarantee_two, solve_two, solve_two_m2, verify
from bundlesplit.core import format_fraction

tray = Instance.of([(5, 1), (1, 4), (3, 3), (2, 2), ("1/2", "7/3"), (4, 0), (0, 2)])
print(f"{tray.n} cookies, {tray.m} kinds of frosting, totals {[format_fraction(t) for t in tray.totals()]}")
print(f"each child is promised {guarantee_two(tray.n, tray.m)} whole cookies\n")

for name, solver in [("moment curve", solve_two), ("two-kind pairing", solve_two_m2)]:
    alloc = solver(tray)
    report = verify(tray, alloc, 2)
    print(f"{name}: fair={report.fair}, strokes={report.strokes}, whole cookies {report.full_per_agent}")
    for i, row in enumerate(alloc.shares):
        if len(row) > 1:
            parts = ", ".join(f"child {a} takes {format_fraction(q)}" for a, q in row)
            print(f"  cookie {i} is cut: {parts}")
    print()
