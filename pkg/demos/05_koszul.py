"""
Koszul cohomology windows
=========================

The twisted cubic is projectively normal; a hyperelliptic canonical ring is not,
and K_{0,2} = g - 2 measures the failure.
"""
import random

from syzygy.curvering import HypCurve, canonical_ring
from syzygy.koszul import betti_table, np_verdict, pr_report, verdict_text, veronese_ring

cubic = veronese_ring(3, 3)
t = betti_table(cubic, 4, 2)
print(t.to_csv(), verdict_text(np_verdict(t)))

for g in range(3, 7):
    R = canonical_ring(HypCurve.random(g, random.Random(g)), 3)
    t = betti_table(R, 1, 2)
    print(f"g={g}: K02={t[0, 2]}, {verdict_text(np_verdict(t))}")

# dimension audit for wedge^r of the rank-2 bundle
for r in range(3):
    print(pr_report(7, r).dims)
