"""Enumerate extreme cycles exactly and generate the spectrum they seed.

Cycle points are exact rationals (fixed points of composed dual maps), and
extremity |m_B| = 1 reduces to integrality of <b, x>, so the whole search
is certificate-grade: no floating point is involved.
"""

from speclab import (common_extreme_cycles, dynamically_simple_spectrum,
                     find_extreme_cycles, triple)
from speclab.cycles import search_summary

for r, b, l in [(4, [0, 2], [0, 1]), (2, [0, 1], [0, 1]),
                (4, [0, 2], [0, 3]), (2, [0, 3], [0, 1])]:
    t = triple(r, b, l)
    cycles = find_extreme_cycles(t, m_max=6)
    pts = [[str(x) for p in c.points for x in p] for c in cycles]
    print(f"(R={r}, B={b}, L={l}): {len(cycles)} cycle(s): {pts}")

print("\nnote the thirds cycle above: <3, 1/3> = 1 is an integer, so")
print("{1/3, 2/3} is extreme for B = {0, 3} but not for B = {0, 1}.")

family = [triple(2, [0, 1], [0, 1]), triple(2, [0, 3], [0, 1])]
shared = common_extreme_cycles(family, m_max=6)
print(f"\ncycles extreme for the whole family: "
      f"{[[str(x) for p in c.points for x in p] for c in shared]}")

t = triple(4, [0, 2], [0, 1])
cycles = find_extreme_cycles(t, 6)
print("\nspectrum generated by the cycles of the scale-4 {0,2} measure:")
for n in range(4):
    level = [p[0] for p in dynamically_simple_spectrum(t, cycles, n)]
    print(f"  level {n}: {level}")

print("\nsearch certificate:")
summary = search_summary(t, cycles, 6)
print(f"  complete for periods <= {summary['complete_for_periods_up_to']}, "
      f"all cycle points inside radius {summary['containment_radius']:.4f}")
