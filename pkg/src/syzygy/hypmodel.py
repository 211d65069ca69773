"""Coordinates for sections of wedge^r E on a hyperelliptic curve.

On a hyperelliptic curve with pencil ``H = H^0(L)`` one has
``E = S^(g-2) H* (x) L`` (after trivialising ``wedge^2 H*``), so every space
here is a tensor product of wedge powers of ``S^k H*`` with some ``S^k H``.
Labels: a wedge factor is a strictly increasing tuple of ``y``-exponents, a
symmetric factor is an ``x``-exponent.

Spaces used below, for genus ``g`` and exterior degree ``r``::

    top(g, r)  = wedge^r S^(g-1) H*             WedgeBasis(r, g)
    low(g, r)  = wedge^r S^(g-2) H*             WedgeBasis(r, g - 1)
    H0(wedge^r E)      = low (x) S^r H
    domain of p        = top (x) S^(g-1-r) H
    codomain of p      = low (x) S^(g-1) H
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from . import exactla
from .exactla import Matrix, ModularConfig
from .report import ParameterError, Report, VerificationError, serialize_element, timed
from .sl2poly import (
    LinearMap,
    SymBasis,
    TensorSpace,
    WedgeBasis,
    add_into,
    clamp_power,
    contract_pair,
    sym_mult,
    to_vector,
)


def check_params(g: int, r: int) -> None:
    if g < 3:
        raise ParameterError(f"genus must be >= 3, got g={g}")
    if r < 1:
        raise ParameterError(f"exterior degree must be >= 1, got r={r}")
    if r > g - 1 - r:
        raise ParameterError(f"need r <= g-1-r, got g={g}, r={r}")


def valid_pairs(gmin: int, gmax: int, r: int | None = None) -> list[tuple[int, int]]:
    out = []
    for g in range(gmin, gmax + 1):
        rs = [r] if r is not None else range(1, (g - 1) // 2 + 1)
        for rr in rs:
            check_params(g, rr)
            out.append((g, rr))
    return out


def binomial_balance(g: int, r: int) -> int:
    """Side of the square Petri matrix; both dimension counts must agree."""
    left = math.comb(g, r) * (g - r)
    right = math.comb(g - 1, r) * g
    if left != right:
        raise VerificationError("binomial balance fails", {"g": g, "r": r})
    return left


def top_space(g: int, r: int) -> WedgeBasis:
    return WedgeBasis(r, g)


def low_space(g: int, r: int) -> WedgeBasis:
    return WedgeBasis(r, g - 1)


def sections_space(g: int, r: int) -> TensorSpace:
    return TensorSpace([low_space(g, r), SymBasis(r)])


# ---------------------------------------------------------------- phi maps


def phi1(g: int) -> LinearMap:
    """y^k -> y^k (x) x - y^(k-1) (x) 1 into S^(g-2)H* (x) H."""
    if g < 3:
        raise ParameterError("genus must be >= 3")
    dom = SymBasis(g - 1, dual=True)
    cod = TensorSpace([SymBasis(g - 2, dual=True), SymBasis(1)])

    def image(k):
        out = {}
        if clamp_power(k, g - 2) is not None:
            out[k, 1] = 1
        if clamp_power(k - 1, g - 2) is not None:
            out[k - 1, 0] = -1
        return out

    return LinearMap.from_images(dom, cod, image)


def _phir_terms(ks: tuple[int, ...], g: int):
    """Nonzero terms of phi_r(y^k1 ^ ... ^ y^kr): (wedge tuple, x-exponent, sign)."""
    r = len(ks)
    for eps in itertools.product((0, 1), repeat=r):
        w = tuple(k - e for k, e in zip(ks, eps))
        if any(clamp_power(a, g - 2) is None for a in w):
            continue
        if any(a >= b for a, b in zip(w, w[1:])):
            continue
        yield w, r - sum(eps), (-1) ** sum(eps)


def phir_image(ks: tuple[int, ...], g: int) -> dict:
    return {(w, e): Fraction(s) for w, e, s in _phir_terms(ks, g)}


def phir(g: int, r: int) -> LinearMap:
    check_params(g, r)
    return LinearMap.from_images(top_space(g, r), sections_space(g, r), lambda ks: phir_image(ks, g))


def phir_leading_certificate(g: int, r: int) -> bool:
    """Injectivity of phi_r from its leading terms.

    Every column must have a unique term of maximal joint degree in x and y,
    and those leading positions must be pairwise distinct.
    """
    m = phir(g, r)
    labels = m.codomain.labels()
    seen = set()
    for col in m.matrix.columns():
        degs = {i: sum(labels[i][0]) + labels[i][1] for i in col}
        top = max(degs.values())
        lead = [i for i, d in degs.items() if d == top]
        if len(lead) != 1 or lead[0] in seen:
            return False
        seen.add(lead[0])
    return True


# ---------------------------------------------------------------- Petri map and inverse


def p_domain(g: int, r: int) -> TensorSpace:
    return TensorSpace([top_space(g, r), SymBasis(g - 1 - r)])


def p_codomain(g: int, r: int) -> TensorSpace:
    return TensorSpace([low_space(g, r), SymBasis(g - 1)])


def p_map(g: int, r: int) -> LinearMap:
    """(Id (x) product) o (phi_r (x) Id) on top (x) S^(g-1-r)H."""
    check_params(g, r)

    def image(lab):
        ks, a = lab
        out: dict = {}
        for w, e, s in _phir_terms(ks, g):
            add_into(out, (w, e + a), s)
        return out

    return LinearMap.from_images(p_domain(g, r), p_codomain(g, r), image)


def q_image(js: tuple[int, ...], b: int, g: int) -> dict:
    """The explicit inverse of p on the basis element y^j1 ^ ... ^ y^jr (x) x^b."""
    r = len(js)
    jj = (-1,) + tuple(js) + (g - 1,)
    l = next(l for l in range(r + 1) if jj[l] + 1 <= b <= jj[l + 1])
    sign = (-1) ** (r - l)
    ranges = [range(0, jj[i] - jj[i - 1]) for i in range(1, l + 1)]
    ranges += [range(1, jj[i + 1] - jj[i] + 1) for i in range(l + 1, r + 1)]
    out: dict = {}
    for steps in itertools.product(*ranges):
        ts, ss = steps[:l], steps[l:]
        w = tuple(jj[i + 1] - t for i, t in enumerate(ts)) + tuple(
            jj[l + 1 + i] + s for i, s in enumerate(ss)
        )
        e = b - r - sum(ts) + sum(ss)
        if not 0 <= e <= g - 1 - r:
            raise VerificationError("q exponent out of range", {"j": js, "b": b, "e": e})
        if not (0 <= w[0] and w[-1] <= g - 1 and all(u < v for u, v in zip(w, w[1:]))):
            raise VerificationError("q wedge tuple not increasing", {"j": js, "b": b, "w": w})
        add_into(out, (w, e), sign)
    return out


def q_map(g: int, r: int) -> LinearMap:
    check_params(g, r)
    return LinearMap.from_images(p_codomain(g, r), p_domain(g, r), lambda lab: q_image(lab[0], lab[1], g))


def _first_bad_column(m: Matrix) -> int | None:
    bad = {j for (i, j), v in m.items() if i != j or v != 1}
    diag = {j for (i, j), v in m.items() if i == j and v == 1}
    bad |= set(range(m.cols)) - diag
    return min(bad) if bad else None


def verify_pq(g: int, r: int, cfg: ModularConfig = exactla.EXACT) -> Report:
    """p o q = Id, q o p = Id and full rank of p; hence Ker p = 0."""
    check_params(g, r)
    rep = Report("verify_pq", {"g": g, "r": r})
    with timed(rep):
        side = binomial_balance(g, r)
        p = p_map(g, r)
        q = q_map(g, r)
        rep.dims["side"] = side
        for name, prod, basis in (("p o q", p.matrix @ q.matrix, p.codomain), ("q o p", q.matrix @ p.matrix, p.domain)):
            bad = _first_bad_column(prod)
            if bad is not None:
                rep.fail(f"{name} != Id", {"basis_index": bad, "label": basis.labels()[bad]})
        rr = exactla.rank_report(p.matrix, cfg)
        rep.dims["rank_p"] = rr.rank
        if rr.modular:
            rep.dims["modular_ranks"] = {str(k): v for k, v in rr.modular.items()}
        if rr.skipped:
            rep.dims["skipped_primes"] = rr.skipped
        if rr.rank != side:
            rep.fail("p is not of full rank", {"rank": rr.rank, "side": side})
        rep.dims["ker_p"] = side - rr.rank
    return rep


# ---------------------------------------------------------------- kernel element z


def what_element(g: int, r: int, check: bool = True) -> dict:
    """sum_j (-1)^j (1 ^ y ^ .. omit y^j .. ^ y^r) (x) x^(r-j), in H0(wedge^r E)."""
    check_params(g, r)
    w = {}
    for j in range(r):
        wedge = tuple(k for k in range(r + 1) if k != j)
        w[wedge, r - j] = Fraction((-1) ** j)
    if check:
        m = phir(g, r).matrix
        ext = m.hstack(Matrix.from_columns(m.rows, [to_vector(sections_space(g, r), w)]))
        rank_ext = exactla.rank(ext)
        if rank_ext != math.comb(g, r) + 1:
            raise VerificationError("w_hat lies in W^r", {"rank": rank_ext})
    return w


def z_space(g: int, r: int) -> TensorSpace:
    return TensorSpace([low_space(g, r), SymBasis(r), SymBasis(g - 1 - r)])


def p_hat(g: int, r: int, z: dict) -> dict:
    """(Id (x) product) on low (x) S^r H (x) S^(g-1-r) H."""
    out: dict = {}
    for (w, a, b), c in z.items():
        add_into(out, (w, a + b), c)
    return out


def z_element(g: int, r: int, check: bool = True) -> dict:
    """w_hat (x) 1 + sum_{i=r+1}^{g-1} phi_r(y ^ y^2 ^ .. ^ y^(r-1) ^ y^i) (x) x^(i-r)."""
    check_params(g, r)
    z: dict = {}
    for (w, a), c in what_element(g, r, check=check).items():
        add_into(z, (w, a, 0), c)
    for i in range(r + 1, g):
        ks = tuple(range(1, r)) + (i,)
        for (w, a), c in phir_image(ks, g).items():
            add_into(z, (w, a, i - r), c)
    if check:
        image = p_hat(g, r, z)
        if image:
            raise VerificationError("p_hat(z) != 0", serialize_element(image))
    return z


def kernel_space(g: int, r: int) -> TensorSpace:
    return TensorSpace([SymBasis(r), SymBasis(g - 1 - r)])


def product_kernel(g: int, r: int) -> list[dict]:
    """Exact basis of Ker(S^r H (x) S^(g-1-r) H -> S^(g-1) H)."""
    mult = sym_mult(r, g - 1 - r)
    labels = mult.domain.labels()
    return [{labels[i]: v for i, v in vec.items()} for vec in exactla.kernel_basis(mult.matrix)]


def in_product_kernel(elem: dict) -> bool:
    image: dict = {}
    for (a, b), c in elem.items():
        add_into(image, a + b, c)
    return not image


def _check_spans_kernel(g: int, r: int, elems: list[dict], what: str) -> None:
    space = kernel_space(g, r)
    for e in elems:
        if not in_product_kernel(e):
            raise VerificationError(f"{what}: element outside the product kernel", serialize_element(e))
    kern = product_kernel(g, r)
    expected = (r + 1) * (g - r) - g
    if len(kern) != expected:
        raise VerificationError("kernel dimension mismatch", {"found": len(kern), "expected": expected})
    vecs = [to_vector(space, e) for e in elems]
    kvecs = [to_vector(space, e) for e in kern]
    if not exactla.same_span(vecs, kvecs, space.dim):
        raise VerificationError(f"{what}: span is deficient", {"rank": exactla.span_rank(vecs, space.dim)})


def contract_z(g: int, r: int, check: bool = True) -> list[tuple[tuple[int, ...], dict]]:
    """Pair z against each dual wedge basis element of wedge^r(S^(g-2)H).

    Returns ``(e, element of S^r H (x) S^(g-1-r) H)`` for every basis label ``e``.
    """
    z = z_element(g, r, check=check)
    pair = contract_pair(r, g - 1)
    slices: dict = {}
    for (w, a, b), c in z.items():
        slices.setdefault((a, b), {})[w] = c
    out = []
    for e in low_space(g, r).labels():
        dual = {e: 1}
        res = {}
        for ab, sl in sorted(slices.items()):
            v = pair(dual, sl)
            if v:
                res[ab] = v
        out.append((e, res))
    if check:
        _check_spans_kernel(g, r, [res for _, res in out if res], "contract_z")
    return out


def ker_product_generators(g: int, r: int, check: bool = True) -> list[dict]:
    """x^i (x) x^j - x^(i+1) (x) x^(j-1), i < r, 1 <= j <= g-1-r."""
    check_params(g, r)
    gens = [
        {(i, j): Fraction(1), (i + 1, j - 1): Fraction(-1)}
        for i in range(r)
        for j in range(1, g - r)
    ]
    if check:
        _check_spans_kernel(g, r, gens, "ker_product_generators")
    return gens


def lemma35_check(g: int, r: int, curve) -> Report:
    """Images under the connecting map: contracted z versus the whole product kernel."""
    from .curvering import connecting_D, h0_coordinates

    check_params(g, r)
    if curve.g != g:
        raise ParameterError(f"curve has genus {curve.g}, expected {g}")
    rep = Report("lemma35_check", {"g": g, "r": r, "f": curve.coeff_strings()})
    with timed(rep):
        try:
            scale = Fraction(1, math.comb(g - 2, r))
            contracted = [res for _, res in contract_z(g, r) if res]
            A = [h0_coordinates(connecting_D(curve, r, {k: scale * v for k, v in w.items()})) for w in contracted]
            B = [h0_coordinates(connecting_D(curve, r, w)) for w in product_kernel(g, r)]
        except VerificationError as exc:
            return rep.fail(str(exc), exc.witness)
        dim = curve.h0_dim(2)
        ra, rb = exactla.span_rank(A, dim), exactla.span_rank(B, dim)
        rep.dims.update(dim_A=ra, dim_B=rb, dim_ker=len(B), h0_2K=dim)
        if rb == 0:
            rep.fail("connecting map vanishes on the product kernel", {})
        elif not exactla.same_span(A, B, dim):
            rep.fail("span of contracted z images differs from kernel image", {"dim_A": ra, "dim_B": rb})
    return rep
