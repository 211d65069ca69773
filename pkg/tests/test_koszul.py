import math
import random

import pytest

from syzygy import exactla
from syzygy.curvering import HypCurve, canonical_ring
from syzygy.koszul import (
    BettiTable,
    betti_table,
    chain_dim,
    check_d_squared,
    koszul_differential,
    kpq,
    np_verdict,
    pr_report,
    strand_euler,
    veronese_ring,
    verdict_text,
)
from syzygy.report import ParameterError


@pytest.fixture(scope="module")
def cubic():
    return veronese_ring(3, 3)


def test_veronese_dims(cubic):
    assert cubic.dims == (1, 4, 7, 10)
    assert cubic.vdim == 4


def test_d_squared(cubic):
    check_d_squared(cubic)
    check_d_squared(canonical_ring(HypCurve.random(4, random.Random(1)), 3))


def test_twisted_cubic_table(cubic):
    t = betti_table(cubic, 4, 2)
    assert t[0, 0] == 1
    assert t[1, 1] == 3 and t[2, 1] == 2
    assert t[0, 2] == 0 and t[1, 2] == 0
    assert np_verdict(t) == 0
    assert verdict_text(np_verdict(t)) == "N0 holds"


def test_p2_q0_rank(cubic):
    # wedge^2 V -> V (x) B_1 is injective: rank C(4, 2)
    assert exactla.rank(koszul_differential(cubic, 2, 0).matrix) == 6


def test_p0_differential_has_empty_target(cubic):
    d = koszul_differential(cubic, 0, 1)
    assert d.matrix.rows == 0 and d.matrix.cols == cubic.dims[1]


def test_differential_out_of_range(cubic):
    with pytest.raises(ParameterError):
        koszul_differential(cubic, 1, 3)
    with pytest.raises(ParameterError):
        koszul_differential(cubic, 5, 0)


def test_kpq_needs_next_degree(cubic):
    with pytest.raises(ParameterError):
        kpq(cubic, 1, 3)
    assert kpq(cubic, 7, 1) == 0


def test_veronese_line():
    R = veronese_ring(1, 3)
    assert kpq(R, 0, 1) == 0
    assert kpq(R, 1, 0) == 0
    assert np_verdict(betti_table(R, 2, 2)) == 0


@pytest.mark.parametrize("g", range(3, 7))
def test_hyperelliptic_K02(g):
    R = canonical_ring(HypCurve.random(g, random.Random(g)), 3)
    K02 = kpq(R, 0, 2)
    assert K02 == g - 2
    t = betti_table(R, 1, 2)
    assert np_verdict(t) is None


@pytest.mark.parametrize("n", [2, 3])
def test_strand_euler(cubic, n):
    chains, homology = strand_euler(cubic, n)
    assert chains == homology


def test_rank_nullity(cubic):
    for p in range(1, 5):
        for q in range(0, 3):
            d = koszul_differential(cubic, p, q).matrix
            assert exactla.rank(d) + len(exactla.kernel_basis(d)) == chain_dim(cubic, p, q)


def test_modular_table_agrees(cubic):
    cfg = exactla.ModularConfig(exactla.random_primes(2, rng=random.Random(3)), exactla.Mode.MODULAR_PROBE)
    assert betti_table(cubic, 4, 2, cfg).entries == betti_table(cubic, 4, 2).entries


def test_np_verdict_cases():
    zero = BettiTable(2, 3, {(p, q): 0 for p in range(3) for q in range(4)})
    assert np_verdict(zero) == 2
    capped = BettiTable(2, 2, {(p, q): 0 for p in range(3) for q in range(3)})
    assert np_verdict(capped) == 0
    bad = dict(zero.entries)
    bad[1, 2] = 1
    assert np_verdict(BettiTable(2, 3, bad)) == 0
    bad[0, 3] = 1
    assert np_verdict(BettiTable(2, 3, bad)) is None
    with pytest.raises(ParameterError):
        np_verdict(BettiTable(1, 1, {(p, q): 0 for p in range(2) for q in range(2)}))


def test_betti_window_checks(cubic):
    with pytest.raises(ParameterError):
        betti_table(cubic, 2, 1)
    with pytest.raises(ParameterError):
        betti_table(cubic, 2, 3)


def test_csv_and_dict(cubic):
    t = betti_table(cubic, 2, 2)
    lines = t.to_csv().splitlines()
    assert lines[0] == "q\\p,0,1,2"
    assert lines[2] == "1,0,3,2"
    assert t.to_dict()["rows"][1] == [0, 3, 2]


@pytest.mark.parametrize("g,r,src,tgt,cok", [(4, 1, 4, 6, 2), (5, 2, 10, 18, 8), (6, 0, 1, 1, 0)])
def test_pr_examples(g, r, src, tgt, cok):
    d = pr_report(g, r).dims
    assert (d["wedge_H0K_dual"], d["h0_wedge_E"], d["cokernel"]) == (src, tgt, cok)
    assert d["surjective"] == (cok == 0)


@pytest.mark.parametrize("g", range(3, 13))
def test_pr_sweep(g):
    for r in range(0, (g - 1) // 2 + 1):
        rep = pr_report(g, r)
        assert rep.ok
        assert rep.dims["cokernel"] == math.comb(g - 1, r) * (r + 1) - math.comb(g, r)
        assert rep.dims["surjective"] == (r == 0)


def test_pr_rejects():
    with pytest.raises(ParameterError):
        pr_report(2, 0)
    with pytest.raises(ParameterError):
        pr_report(5, 5)
