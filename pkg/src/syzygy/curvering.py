"""Pluricanonical sections of a hyperelliptic curve y^2 = f(x), deg f = 2g + 2.

A section of qK is written ``(a(x) + y b(x)) (dx/y)^q`` with
``deg a <= q(g-1)`` and ``deg b <= q(g-1) - (g+1)``. The connecting map from
the kernel of a Petri multiplication map to H0(2K) is realised by the
Wronskian formula ``sum p_i (x) q_i -> (sum q_i p_i') y (dx/y)^2``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy
from sympy import Poly, QQ

from .exactla import as_scalar, format_scalar
from .koszul import GradedRingData
from .report import ParameterError, Report, VerificationError, timed

X = sympy.Symbol("x")


def poly(coeffs: Sequence) -> Poly:
    """Polynomial from coefficients listed low degree first."""
    cs = [sympy.Rational(c.numerator, c.denominator) for c in map(as_scalar, coeffs)] or [0]
    return Poly(list(reversed(cs)), X, domain=QQ)


def coeffs(p: Poly, length: int | None = None) -> list[Fraction]:
    """Low-degree-first coefficients as Fractions, padded to ``length``."""
    out = [as_scalar(c) for c in reversed(p.all_coeffs())] if not p.is_zero else []
    if length is not None:
        if len(out) > length:
            raise VerificationError("degree bound violated", {"degree": p.degree(), "bound": length - 1})
        out += [Fraction(0)] * (length - len(out))
    return out


def parse_poly(text: str) -> Poly:
    return poly([Fraction(t) for t in text.split(",") if t.strip()])


def wronskian(s0: Poly, s1: Poly) -> Poly:
    return s0 * s1.diff(X) - s1 * s0.diff(X)


def deg(p: Poly) -> int:
    return -1 if p.is_zero else p.degree()


@dataclass(frozen=True)
class HypCurve:
    g: int
    f: Poly

    def __post_init__(self):
        if self.g < 2:
            raise ParameterError("genus must be >= 2")
        if deg(self.f) != 2 * self.g + 2:
            raise ParameterError(f"deg f must be {2 * self.g + 2}, got {deg(self.f)}")
        if deg(sympy.gcd(self.f, self.f.diff(X))) > 0:
            raise ParameterError("f is not squarefree")

    @classmethod
    def from_coeffs(cls, g: int, cs: Sequence) -> "HypCurve":
        return cls(g, poly(cs))

    @classmethod
    def random(cls, g: int, rng: random.Random, spread: int = 3) -> "HypCurve":
        """x^(2g+2) plus a random perturbation of degree <= g, squarefree by rejection."""
        while True:
            cs = [rng.randint(-spread, spread) for _ in range(g + 1)]
            cs += [0] * (g + 1) + [1]
            try:
                return cls.from_coeffs(g, cs)
            except ParameterError:
                continue

    def coeff_strings(self) -> list[str]:
        return [format_scalar(c) for c in coeffs(self.f)]

    def a_bound(self, q: int) -> int:
        return q * (self.g - 1)

    def b_bound(self, q: int) -> int:
        return q * (self.g - 1) - (self.g + 1)

    def h0_dim(self, q: int) -> int:
        return self.a_bound(q) + 1 + max(self.b_bound(q) + 1, 0)

    def basis(self, q: int) -> list[tuple[str, int]]:
        return [("a", i) for i in range(self.a_bound(q) + 1)] + [("b", j) for j in range(self.b_bound(q) + 1)]


@dataclass(frozen=True)
class PluricanonicalElement:
    """(a + y b) (dx/y)^q on ``curve``."""

    curve: HypCurve
    q: int
    a: Poly
    b: Poly

    def __post_init__(self):
        if self.q < 0:
            raise ParameterError("level must be >= 0")
        too_big_a = not self.a.is_zero and deg(self.a) > self.curve.a_bound(self.q)
        too_big_b = not self.b.is_zero and deg(self.b) > self.curve.b_bound(self.q)
        if too_big_a or too_big_b:
            raise VerificationError(
                "pluricanonical degree bound violated",
                {"q": self.q, "deg_a": deg(self.a), "deg_b": deg(self.b)},
            )

    @property
    def is_zero(self) -> bool:
        return self.a.is_zero and self.b.is_zero


def element(curve: HypCurve, q: int, a: Sequence = (), b: Sequence = ()) -> PluricanonicalElement:
    return PluricanonicalElement(curve, q, poly(a), poly(b))


def h0_coordinates(u: PluricanonicalElement) -> dict[int, Fraction]:
    na = u.curve.a_bound(u.q) + 1
    out = {i: c for i, c in enumerate(coeffs(u.a)) if c}
    out.update({na + j: c for j, c in enumerate(coeffs(u.b)) if c})
    return out


def from_coordinates(curve: HypCurve, q: int, vec: dict) -> PluricanonicalElement:
    na = curve.a_bound(q) + 1
    nb = max(curve.b_bound(q) + 1, 0)
    a = [vec.get(i, 0) for i in range(na)]
    b = [vec.get(na + j, 0) for j in range(nb)]
    return element(curve, q, a, b)


def mult_sections(u: PluricanonicalElement, v: PluricanonicalElement, qmax: int | None = None) -> PluricanonicalElement:
    if u.curve != v.curve:
        raise ParameterError("sections live on different curves")
    q = u.q + v.q
    if qmax is not None and q > qmax:
        raise ParameterError(f"level {q} exceeds configured maximum {qmax}")
    f = u.curve.f
    return PluricanonicalElement(u.curve, q, u.a * v.a + f * u.b * v.b, u.a * v.b + v.a * u.b)


# ---------------------------------------------------------------- connecting map


def connecting_D(curve: HypCurve, m: int, w: dict) -> PluricanonicalElement:
    """Kernel element of S^m H (x) S^(g-1-m) H to a quadratic differential.

    ``w`` maps (i, j), meaning x^i (x) x^j, to coefficients.
    """
    g = curve.g
    n = g - 1 - m
    image: dict = {}
    for (i, j), c in w.items():
        if not (0 <= i <= m and 0 <= j <= n):
            raise ParameterError(f"monomial ({i}, {j}) outside S^{m} (x) S^{n}")
        image[i + j] = image.get(i + j, 0) + as_scalar(c)
    if any(image.values()):
        raise ParameterError("not a Petri kernel element")
    b: dict[int, Fraction] = {}
    for (i, j), c in w.items():
        if i:
            b[i + j - 1] = b.get(i + j - 1, 0) + i * as_scalar(c)
    top = max((k for k, v in b.items() if v), default=-1)
    return element(curve, 2, (), [b.get(k, 0) for k in range(top + 1)])


def tensor_of_polys(p: Poly, q: Poly) -> dict:
    """p (x) q expanded in the monomial basis x^i (x) x^j."""
    out: dict = {}
    for i, a in enumerate(coeffs(p)):
        if not a:
            continue
        for j, b in enumerate(coeffs(q)):
            if b:
                out[i, j] = out.get((i, j), 0) + a * b
    return out


@dataclass(frozen=True)
class PencilDatum:
    m: int
    s0: Poly
    s1: Poly
    t: Poly

    def validate(self, g: int) -> None:
        if not 1 <= self.m or 2 * self.m > g - 1:
            raise ParameterError(f"need 1 <= m <= (g-1)/2, got m={self.m}, g={g}")
        if deg(self.s0) > self.m or deg(self.s1) > self.m:
            raise ParameterError(f"pencil sections must have degree <= {self.m}")
        if deg(self.t) > g - 1 - 2 * self.m:
            raise ParameterError(f"t must have degree <= {g - 1 - 2 * self.m}")
        if self.t.is_zero:
            raise ParameterError("t must be nonzero")
        if wronskian(self.s0, self.s1).is_zero:
            raise ParameterError("s0 and s1 are linearly dependent")

    @classmethod
    def random(cls, g: int, m: int, rng: random.Random, spread: int = 4) -> "PencilDatum":
        def draw(d):
            return poly([rng.randint(-spread, spread) for _ in range(d + 1)])

        while True:
            s0, s1, t = draw(m), draw(m), draw(g - 1 - 2 * m)
            pd = cls(m, s0, s1, t)
            try:
                pd.validate(g)
            except ParameterError:
                continue
            return pd


def _poly_str(p: Poly) -> str:
    return ",".join(format_scalar(c) for c in coeffs(p)) or "0"


def lemma22_check(curve: HypCurve, pd: PencilDatum) -> Report:
    """Nonvanishing and divisor factorisation of the connecting image of s0 (x) t s1 - s1 (x) t s0."""
    g = curve.g
    pd.validate(g)
    rep = Report(
        "lemma22_check",
        {"g": g, "m": pd.m, "s0": _poly_str(pd.s0), "s1": _poly_str(pd.s1), "t": _poly_str(pd.t), "f": curve.coeff_strings()},
    )
    with timed(rep):
        u = tensor_of_polys(pd.s0, pd.t * pd.s1)
        for k, v in tensor_of_polys(pd.s1, pd.t * pd.s0).items():
            u[k] = u.get(k, 0) - v
        u = {k: v for k, v in u.items() if v}
        try:
            D = connecting_D(curve, pd.m, u)
        except (ParameterError, VerificationError) as exc:
            return rep.fail(str(exc), {"u": sorted(u.items())})
        b = D.b
        if D.is_zero:
            rep.fail("connecting image vanishes", {"u": sorted(u.items())})
        wr = wronskian(pd.s0, pd.s1)
        if b != -pd.t * wr:
            rep.fail("b != -t Wr(s0, s1)", {"b": _poly_str(b), "expected": _poly_str(-pd.t * wr)})
        d = sympy.gcd(pd.s0, pd.s1).monic()
        r0, r1 = pd.s0.quo(d), pd.s1.quo(d)
        reduced = wronskian(r0, r1)
        factored = -pd.t * d**2 * reduced
        if b != factored:
            rep.fail("b != -t d^2 Wr(s0/d, s1/d)", {"b": _poly_str(b), "factored": _poly_str(factored)})
        # Order at the two points at infinity, once from the form b y (dx/y)^2
        # (finite zeros: 2 deg b from b, 2g+2 from y) and once from 2D1 + D2 + R.
        finite = 2 * deg(b) + (2 * g + 2)
        at_infinity_form = 4 * g - 4 - finite
        top = max(deg(r0), deg(r1))
        d1_inf = 2 * (pd.m - top - deg(d))
        d2_inf = 2 * (g - 1 - 2 * pd.m - deg(pd.t))
        r_inf = 2 * (2 * top - 2 - deg(reduced))
        at_infinity_divisor = 2 * d1_inf + d2_inf + r_inf
        rep.dims.update(
            deg_b=deg(b),
            deg_gcd=deg(d),
            deg_t=deg(pd.t),
            deg_reduced_wronskian=deg(reduced),
            finite_degree=finite,
            infinity_degree=at_infinity_form,
        )
        if at_infinity_form < 0 or at_infinity_form != at_infinity_divisor:
            rep.fail(
                "order at infinity disagrees with 2D1 + D2 + R",
                {"form": at_infinity_form, "divisor": at_infinity_divisor},
            )
        rep.witnesses.append(
            {"b": _poly_str(b), "t": _poly_str(pd.t), "gcd": _poly_str(d), "reduced_wronskian": _poly_str(reduced)}
        )
    return rep


# ---------------------------------------------------------------- canonical ring


def canonical_ring(curve: HypCurve, qmax: int) -> GradedRingData:
    """V = H0(K) acting on B_q = H0(qK), q = 0..qmax."""
    if curve.g < 3:
        raise ParameterError("canonical ring analysis needs g >= 3")
    if qmax < 2:
        raise ParameterError("qmax must be >= 2")
    g = curve.g
    V = [element(curve, 1, [0] * i + [1]) for i in range(g)]
    dims = tuple(curve.h0_dim(q) for q in range(qmax + 1))
    mult = []
    for q in range(qmax):
        basis = [from_coordinates(curve, q, {k: 1}) for k in range(dims[q])]
        mult.append(tuple(tuple(h0_coordinates(mult_sections(v, b)) for b in basis) for v in V))
    return GradedRingData(g, dims, tuple(mult))
