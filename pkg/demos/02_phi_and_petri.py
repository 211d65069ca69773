"""
The maps phi_r and p, and the inverse q
=======================================

phi_r embeds wedge^r S^(g-1)H* into the sections of wedge^r E;
p is the multiplication map on W^r (x) S^(g-1-r)H, inverted exactly by q.
"""
import math

from syzygy import exactla, hypmodel

g, r = 6, 2

phi = hypmodel.phir(g, r)
print(f"phi_{r} for g={g}: {phi.matrix.rows}x{phi.matrix.cols}, rank {exactla.rank(phi.matrix)} = C({g},{r}) = {math.comb(g, r)}")

# one image, written out
print("phi_2(1 ^ y) =", hypmodel.phir_image((0, 1), g))

p, q = hypmodel.p_map(g, r), hypmodel.q_map(g, r)
print("p o q = Id:", (p.matrix @ q.matrix) == exactla.Matrix.identity(p.matrix.rows))
print("q o p = Id:", (q.matrix @ p.matrix) == exactla.Matrix.identity(p.matrix.cols))

# the whole range in one report per pair
for gg, rr in hypmodel.valid_pairs(3, 8):
    rep = hypmodel.verify_pq(gg, rr)
    print(gg, rr, rep.verdict, rep.dims["rank_p"])
