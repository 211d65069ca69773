"""
The kernel element z and its contractions
=========================================

z lives in the kernel of the extended multiplication map. Pairing it against
dual wedge vectors gives elements of Ker(S^r H (x) S^(g-1-r) H -> S^(g-1) H)
that span the whole kernel.
"""
from syzygy import hypmodel
from syzygy.curvering import HypCurve
import random

g, r = 4, 1

print("w_hat =", hypmodel.what_element(g, r))
z = hypmodel.z_element(g, r)
print("z =", z)
print("p_hat(z) =", hypmodel.p_hat(g, r, z))

for e, res in hypmodel.contract_z(g, r):
    print("contract with", e, "->", res)

# on an actual curve, the connecting map sees the same span
for gg in (4, 5, 6):
    curve = HypCurve.random(gg, random.Random(gg))
    rep = hypmodel.lemma35_check(gg, 1, curve)
    print(gg, rep.verdict, rep.dims)
