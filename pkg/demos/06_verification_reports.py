"""The two verification surfaces: inequality grids and the bound report.

The inequality grid recomputes both sides of every binomial/normal bound
from exact pmf tables over hundreds of parameter points.  The bound report
estimates each tracked quantity of the dynamics and tabulates it against its
stated bound, flagging which hypotheses actually hold at desk scale (several
need n beyond exp(3e6) and are shown but never asserted).
"""

from majlab import lemma_report, verify_appendix_a
from majlab.appendix_a import small_grid

report = verify_appendix_a(small_grid())
print("inequality checks (thinned grid):")
for lemma, s in report.summary().items():
    print(f"  {lemma:22s} points={s['points']:4d} asserted={s['asserted']:4d} "
          f"failures={s['failures']}")
print("all asserted points pass:", report.all_pass)

print("\nbound report at n=300, p=0.15, gap=5 (300 trials):")
rep = lemma_report(300, 0.15, 5, trials=300, master_seed=3)
for r in rep.records:
    mark = "ASSERTED" if r.asserted else (
        "hyp-not-met" if not r.hypotheses_met else "report-only")
    lhs = "None" if r.lhs is None else f"{r.lhs:.4g}"
    rhs = "None" if r.rhs is None else f"{r.rhs:.4g}"
    print(f"  {r.lemma_id:24s} {lhs:>12s} {r.direction:2s} {rhs:<12s} "
          f"sat={r.satisfied!s:5s} [{mark}]")
