"""Exact answers on tiny graphs, and the Monte Carlo cross-check.

For n <= 6 every statistic is an exact rational: the oracle integrates over
all 2^C(n,2) edge configurations.  The same statistics estimated by sampling
must land within a few standard errors, which is the package's standing
integration test.
"""

from fractions import Fraction

from majlab import (ExpectedCount, MomentZ, OracleQuery, SetStat, WinProb,
                    oracle_eval, oracle_vs_mc)

q = OracleQuery(3, Fraction(1, 2), (1, 1, 2), WinProb(color=1))
print("P(color 1 wins | triangle-coloring 112, p=1/2) =",
      oracle_eval(q).value)

q = OracleQuery(5, Fraction(1, 3), (1, 1, 1, 2, 2), ExpectedCount(day=1))
print("E|C_{1,1}| at n=5, p=1/3:", oracle_eval(q).value)

# The centered day-1 indicators have mean zero by construction -- exactly.
q = OracleQuery(5, Fraction(1, 3), (1, 1, 1, 2, 2), MomentZ(k=1))
print("E[Z] =", oracle_eval(q).value)
q = OracleQuery(5, Fraction(1, 3), (1, 1, 1, 2, 2), MomentZ(k=2))
print("E[Z^2] =", oracle_eval(q).value)

# The double-neighbour count inside s_star has mean exactly p^2 E|s_star|.
colors = (1, 1, 2, 2, 2)
ss = oracle_eval(OracleQuery(5, Fraction(1, 4), colors, SetStat("s_star")))
ig = oracle_eval(OracleQuery(5, Fraction(1, 4), colors, SetStat("i_g")))
print("E|s_star| =", ss.value, " E[i_g] =", ig.value,
      " ratio =", ig.value / ss.value, "(= p^2)")

print("\nMonte Carlo agreement at 100k trials:")
for q in [
    OracleQuery(5, 0.5, (1, 1, 1, 2, 2), WinProb(color=1)),
    OracleQuery(6, 0.25, (1, 1, 1, 1, 2, 2), ExpectedCount(day=2)),
    OracleQuery(6, 0.3, (1, 1, 1, 2, 2, 2), SetStat("s_star")),
]:
    ag = oracle_vs_mc(q, 100_000, master_seed=5)
    print(f"  exact {ag.oracle_value:.6f}  mc {ag.mc_estimate:.6f} "
          f"(+-{ag.mc_stderr:.6f})  z={ag.z_score:.2f}")
