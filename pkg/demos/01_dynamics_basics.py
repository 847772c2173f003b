"""A first tour of two-color majority dynamics.

Builds a few tiny graphs by hand to show the update rules (ties keep the
current color; the biased rule shifts the tie point one step toward color 1),
then runs a larger random instance day by day.
"""

from majlab import (ColoredGraph, FixedGap, GraphParams, UpdateRule,
                    default_cap, run, sample_gnp, step)

# A triangle with a 2:1 split: the minority vertex is outvoted immediately,
# while the two majority vertices sit at a 1-1 tie and keep their color.
triangle = ColoredGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)], [1, 1, 2])
print("triangle day 1:", step(triangle).colors.tolist())

# An alternating 4-cycle flips wholesale every day: the classic 2-cycle.
ring = ColoredGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)],
                               [1, 2, 1, 2])
trace = run(ring, UpdateRule.STANDARD, cap=10)
print("alternating ring:", trace.termination_record())

# Under the biased rule a vertex keeps its color only when the color-1
# neighbours are exactly one short; here every leaf sits on that margin.
star = ColoredGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)], [2, 1, 1, 1])
print("star, biased day 1:", step(star, UpdateRule.BIASED).colors.tolist())

# A real instance: n = 2000, p = 0.05, initial gap 40.
n, p = 2000, 0.05
g = sample_gnp(GraphParams(n, p, seed=7), FixedGap.from_delta(20))
trace = run(g, UpdateRule.STANDARD, cap=default_cap(n, p))
print(f"\nn={n}, p={p}, gap=20:")
for day, c1 in trace.counts:
    print(f"  day {day}: {c1} vs {n - c1}")
print("  outcome:", trace.termination_record())
