"""The structural sets behind the day-1 and day-2 analysis.

For a focal vertex w, rhat(w) collects the vertices that would be color 1 on
day 1 *if* adjacent to w; intersected with the actual neighbourhood it gives
exactly w's color-1 neighbours on day 1.  For a color-1 pair (u, v), the
sets s1 / s2 / s_star classify everyone else by how their day-1 fate depends
on the edges to u and v, and the day-1 margin at u decomposes exactly
through them.
"""

import numpy as np

from majlab import (FixedGap, GraphParams, UpdateRule, compute_r_hat,
                    compute_s_sets, day2_identity_sides, sample_gnp, step)

g = sample_gnp(GraphParams(30, 0.2, seed=11), FixedGap.from_delta(3))
ones = np.flatnonzero(g.colors == 1)
u, v = int(ones[0]), int(ones[1])

w = int(ones[2])
rhat = compute_r_hat(g, w)
day1 = step(g, UpdateRule.STANDARD)
neighbours = set(g.neighbors(w).tolist())
print(f"focal vertex w={w}: |rhat|={len(rhat)}")
print("  rhat cap N(w)      :", sorted(set(rhat.tolist()) & neighbours))
print("  day-1 color-1 nbrs :",
      sorted(x for x in neighbours if day1.colors[x] == 1))

rep = compute_s_sets(g, u, v)
print(f"\nfocal pair ({u}, {v}):")
print(f"  |s1|={len(rep.s1)}  |s2|={len(rep.s2)}  |s_star|={len(rep.s_star)}"
      f"  (partition of the other {g.n - 2})")
print(f"  double neighbours inside s_star: i_g = {rep.i_g}")

if not g.is_edge(u, v):
    lhs, rhs = day2_identity_sides(g, u, v)
    print(f"  day-1 margin at u: {lhs} == decomposition {rhs}")

# The sets ignore the focal edges entirely: rewire everything at u and v and
# recompute.
edges = [(a, b) for a, b in g.edges() if u not in (a, b) and v not in (a, b)]
stripped = type(g).from_edges(g.n, edges, g.colors.tolist())
rep2 = compute_s_sets(stripped, u, v)
print("  unchanged after deleting every focal edge:",
      (rep.s1, rep.s2, rep.s_star) == (rep2.s1, rep2.s2, rep2.s_star))
