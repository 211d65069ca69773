import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from syzygy import exactla
from syzygy.curvering import (
    X,
    HypCurve,
    PencilDatum,
    canonical_ring,
    coeffs,
    connecting_D,
    element,
    h0_coordinates,
    lemma22_check,
    mult_sections,
    parse_poly,
    poly,
    tensor_of_polys,
    wronskian,
)
from syzygy.hypmodel import product_kernel
from syzygy.report import ParameterError

C3 = HypCurve.from_coeffs(3, [1] + [0] * 7 + [1])  # y^2 = x^8 + 1
C3b = HypCurve.from_coeffs(3, [1, 1] + [0] * 6 + [1])  # y^2 = x^8 + x + 1


def test_curve_validation():
    with pytest.raises(ParameterError):
        HypCurve.from_coeffs(3, [1, 1, 1])
    with pytest.raises(ParameterError):
        HypCurve.from_coeffs(3, [1, 0, 0, 0, 2, 0, 0, 0, 1])  # (x^4 + 1)^2
    with pytest.raises(ParameterError):
        HypCurve.from_coeffs(1, [1, 0, 0, 0, 1])


@pytest.mark.parametrize("g", range(2, 9))
def test_h0_dimensions(g):
    c = HypCurve.random(g, random.Random(g))
    assert c.h0_dim(1) == g
    for q in range(2, 5):
        assert c.h0_dim(q) == (2 * q - 1) * (g - 1) == len(c.basis(q))


def test_mult_constants():
    one = element(C3, 1, [1])
    prod = mult_sections(one, one)
    assert prod.q == 2 and coeffs(prod.a) == [1] and prod.b.is_zero


def test_mult_y_squared_is_f():
    y = element(C3, 2, (), [1])
    prod = mult_sections(y, y)
    assert prod.q == 4 and prod.a == C3.f and prod.b.is_zero


def test_mult_level_cap():
    y = element(C3, 2, (), [1])
    with pytest.raises(ParameterError):
        mult_sections(y, y, qmax=3)


@pytest.mark.parametrize("g", range(3, 8))
def test_image_of_V_tensor_V(g):
    c = HypCurve.random(g, random.Random(100 + g))
    V = [element(c, 1, [0] * i + [1]) for i in range(g)]
    images = [h0_coordinates(mult_sections(u, v)) for u in V for v in V]
    assert exactla.span_rank(images, c.h0_dim(2)) == 2 * g - 1


def test_connecting_D_examples():
    assert coeffs(connecting_D(C3, 1, {(0, 1): 1, (1, 0): -1}).b) == [-1]
    c4 = HypCurve.from_coeffs(4, [1, 1] + [0] * 8 + [1])
    D = connecting_D(c4, 1, {(0, 2): 1, (1, 1): -1})
    assert coeffs(D.b) == [0, -1] and D.a.is_zero
    assert connecting_D(C3, 1, {}).is_zero


def test_connecting_D_rejects_non_kernel():
    with pytest.raises(ParameterError, match="not a Petri kernel element"):
        connecting_D(C3, 1, {(0, 1): 1})


def _wronskian_sum(w, first):
    """sum q_i p_i' (first=True) or sum p_i q_i' over monomials."""
    out = 0
    for (i, j), c in w.items():
        out += c * (i * X ** (i + j - 1) if first and i else 0) + c * (j * X ** (i + j - 1) if not first and j else 0)
    return sympy.expand(out)


@pytest.mark.parametrize("g,m", [(4, 1), (5, 2), (6, 2), (7, 3), (8, 3)])
def test_connecting_D_antisymmetry_and_degree(g, m, rng):
    c = HypCurve.random(g, rng)
    kern = product_kernel(g, m)
    for _ in range(5):
        w = {}
        for k in kern:
            a = Fraction(rng.randint(-5, 5))
            for lab, v in k.items():
                w[lab] = w.get(lab, 0) + a * v
        D = connecting_D(c, m, w)
        assert sympy.expand(D.b.as_expr() + _wronskian_sum(w, first=False)) == 0
        assert sympy.expand(D.b.as_expr() - _wronskian_sum(w, first=True)) == 0
        assert D.b.is_zero or D.b.degree() <= g - 3


def test_lemma22_g3():
    pd = PencilDatum(1, poly([1]), poly([0, 1]), poly([1]))
    rep = lemma22_check(C3b, pd)
    assert rep.ok
    assert rep.witnesses[-1]["b"] == "-1"


def test_lemma22_g5_common_factor():
    c5 = HypCurve.from_coeffs(5, [2, 0, 0, 1] + [0] * 8 + [1])
    pd = PencilDatum(2, parse_poly("-1,0,1"), parse_poly("0,-1,1"), parse_poly("1"))
    rep = lemma22_check(c5, pd)
    assert rep.ok
    w = rep.witnesses[-1]
    assert w["gcd"] == "-1,1"  # x - 1
    assert w["reduced_wronskian"] == "1"  # Wr(x + 1, x)
    assert w["b"] == "-1,2,-1"  # -(x - 1)^2


def test_lemma22_preconditions():
    with pytest.raises(ParameterError):
        lemma22_check(C3b, PencilDatum(1, poly([1]), poly([0, 1]), poly([0])))
    with pytest.raises(ParameterError):
        lemma22_check(C3b, PencilDatum(1, poly([0, 1]), poly([0, 2]), poly([1])))
    with pytest.raises(ParameterError):
        lemma22_check(C3b, PencilDatum(2, poly([1]), poly([0, 1]), poly([1])))


@given(st.integers(0, 10**6), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_pencil_equivariance(seed, mat):
    a, b, c, d = mat
    det = a * d - b * c
    if det == 0:
        return
    g, m = 5, 2
    rng = random.Random(seed)
    pd = PencilDatum.random(g, m, rng)
    curve = HypCurve.random(g, rng)

    def D(s0, s1):
        u = tensor_of_polys(s0, pd.t * s1)
        for k, v in tensor_of_polys(s1, pd.t * s0).items():
            u[k] = u.get(k, 0) - v
        return connecting_D(curve, m, {k: v for k, v in u.items() if v}).b

    base = D(pd.s0, pd.s1)
    moved = D(pd.s0 * a + pd.s1 * b, pd.s0 * c + pd.s1 * d)
    assert moved == base * det


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_random_pencils_pass(g):
    rng = random.Random(g)
    for m in range(1, (g - 1) // 2 + 1):
        for _ in range(3):
            assert lemma22_check(HypCurve.random(g, rng), PencilDatum.random(g, m, rng)).ok


def test_wronskian_scales_by_gcd_squared():
    d = poly([3, 1])
    s0, s1 = poly([1, 2]), poly([0, 0, 1])
    assert wronskian(d * s0, d * s1) == d**2 * wronskian(s0, s1)


def test_canonical_ring_dims():
    R = canonical_ring(C3, 2)
    assert R.dims[1:] == (3, 6)
    c4 = HypCurve.from_coeffs(4, [1, 1] + [0] * 8 + [1])
    R4 = canonical_ring(c4, 2)
    assert R4.dims[2] == 9
    images = [R4.mult[1][i][j] for i in range(4) for j in range(4)]
    assert exactla.span_rank(images, 9) == 7


def test_canonical_ring_genus_2_rejected():
    with pytest.raises(ParameterError):
        canonical_ring(HypCurve.from_coeffs(2, [1] + [0] * 5 + [1]), 2)


def test_canonical_ring_commutes():
    canonical_ring(C3b, 4).check_commuting()


def test_ring_json_shape():
    import json

    d = json.loads(canonical_ring(C3, 2).to_json())
    assert d["dims"] == [1, 3, 6]
    assert len(d["mult"]) == 2 and len(d["mult"][1]) == 3 and len(d["mult"][1][0]) == 3
    assert len(d["mult"][1][0][0]) == 6
