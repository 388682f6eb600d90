"""Three children: the labeled-partition search for a prime number of agents.

The line of cookies is cut into (r-1)m + 1 intervals; each interval carries a
label, and a cookie's share goes to child (cookie + label) mod r.
"""
from bundlesplit import Instance, guarantee_main, layout, solve_prime, verify
from bundlesplit.core import count_bad_cuts, format_fraction, to_allocation

tray = Instance.of([(1, 0), (2, 1), (1, 1), (3, 2), (0, 1), (1, 3), (2, 2), (1, 0)])
board = layout(tray)
part = solve_prime(board, 3)
print("cuts  ", [format_fraction(z) for z in part.cuts])
print("labels", part.labels)
print("bad cuts", count_bad_cuts(part))

alloc = to_allocation(board, part, tray.n)
report = verify(tray, alloc, 3)
print(f"fair={report.fair}, strokes={report.strokes} (at most {2 * tray.m})")
print(f"whole cookies {report.full_per_agent}, promised {guarantee_main(tray.n, tray.m, 3)}")
