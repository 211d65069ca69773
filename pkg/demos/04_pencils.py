"""
Pencils and their connecting image
==================================

For u = s0 (x) t s1 - s1 (x) t s0 the connecting map gives b = -t Wr(s0, s1),
which factors through the common zeros of the pencil.
"""
from syzygy.curvering import HypCurve, PencilDatum, lemma22_check, parse_poly

curve = HypCurve.from_coeffs(5, [2, 0, 0, 1] + [0] * 8 + [1])

# s0 = x^2 - 1 and s1 = x^2 - x share the factor x - 1
pd = PencilDatum(2, parse_poly("-1,0,1"), parse_poly("0,-1,1"), parse_poly("1"))
rep = lemma22_check(curve, pd)
print(rep.verdict)
print(rep.witnesses[-1])
print(rep.dims)
