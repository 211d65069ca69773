"""Monomial bases for symmetric and exterior powers of a 2-dimensional space.

``S^k H`` is modelled by polynomials of degree at most ``k`` in ``x``; the dual
``S^k H*`` by polynomials in ``y``. A basis element is identified by its
exponent. Exterior powers are indexed by strictly increasing tuples in colex
order, and tensor products by tuples holding one label per factor, last
factor varying fastest.

The line ``wedge^2 H*`` is trivialised once (``y ^ 1 -> 1``), so every twist by
it is the scalar 1 and never appears in the coordinates.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .exactla import Matrix, as_scalar

Element = dict  # label -> Fraction


@dataclass(frozen=True)
class SymBasis:
    k: int
    dual: bool = False

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("symmetric degree must be >= 0")

    @property
    def dim(self) -> int:
        return self.k + 1

    def labels(self) -> list[int]:
        return list(range(self.k + 1))

    def index(self, label: int) -> int:
        if not 0 <= label <= self.k:
            raise KeyError(label)
        return label

    def contains(self, label) -> bool:
        return isinstance(label, int) and 0 <= label <= self.k

    def describe(self) -> dict:
        return {"kind": "sym", "k": self.k, "dual": self.dual}


def colex_rank(t: Sequence[int]) -> int:
    return sum(math.comb(a, i + 1) for i, a in enumerate(t))


@dataclass(frozen=True)
class WedgeBasis:
    r: int
    inner_dim: int

    def __post_init__(self):
        if self.r < 0 or self.inner_dim < 0:
            raise ValueError("bad exterior power")

    @property
    def dim(self) -> int:
        return math.comb(self.inner_dim, self.r)

    def labels(self) -> list[tuple[int, ...]]:
        out = list(itertools.combinations(range(self.inner_dim), self.r))
        out.sort(key=lambda t: t[::-1])
        return out

    def index(self, label: tuple[int, ...]) -> int:
        if not self.contains(label):
            raise KeyError(label)
        return colex_rank(label)

    def contains(self, label) -> bool:
        return (
            isinstance(label, tuple)
            and len(label) == self.r
            and all(0 <= a < self.inner_dim for a in label)
            and all(a < b for a, b in zip(label, label[1:]))
        )

    def describe(self) -> dict:
        return {"kind": "wedge", "r": self.r, "inner_dim": self.inner_dim}


@dataclass(frozen=True)
class TensorSpace:
    factors: tuple

    def __init__(self, factors: Iterable):
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def dim(self) -> int:
        return math.prod(f.dim for f in self.factors)

    def labels(self) -> list[tuple]:
        return list(itertools.product(*(f.labels() for f in self.factors)))

    def index(self, label: tuple) -> int:
        if len(label) != len(self.factors):
            raise KeyError(label)
        idx = 0
        for f, lab in zip(self.factors, label):
            idx = idx * f.dim + f.index(lab)
        return idx

    def contains(self, label) -> bool:
        return (
            isinstance(label, tuple)
            and len(label) == len(self.factors)
            and all(f.contains(lab) for f, lab in zip(self.factors, label))
        )

    def describe(self) -> dict:
        return {"kind": "tensor", "factors": [f.describe() for f in self.factors]}


@dataclass(frozen=True)
class FlatBasis:
    """Plain coordinate space k^n, labels 0..n-1."""

    n: int

    @property
    def dim(self) -> int:
        return self.n

    def labels(self) -> list[int]:
        return list(range(self.n))

    def index(self, label: int) -> int:
        if not 0 <= label < self.n:
            raise KeyError(label)
        return label

    def contains(self, label) -> bool:
        return isinstance(label, int) and 0 <= label < self.n

    def describe(self) -> dict:
        return {"kind": "flat", "n": self.n}


# ---------------------------------------------------------------- elements


def clean(elem: Mapping) -> Element:
    return {k: as_scalar(v) for k, v in elem.items() if v}


def add_into(acc: dict, label: Hashable, c) -> None:
    v = acc.get(label, 0) + c
    if v:
        acc[label] = v
    else:
        acc.pop(label, None)


def to_vector(space, elem: Mapping) -> dict[int, Fraction]:
    return {space.index(k): as_scalar(v) for k, v in elem.items() if v}


def from_vector(space, vec: Mapping[int, object]) -> Element:
    labels = space.labels()
    return {labels[i]: as_scalar(v) for i, v in vec.items() if v}


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple (sign 0 on repeats)."""
    if len(set(seq)) != len(seq):
        return 0, ()
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1) ** inversions, tuple(sorted(seq))


def clamp_power(e: int, k: int) -> int | None:
    """The exponent of ``y^e`` inside ``S^k``, or None when it is zero there.

    Encodes the conventions ``y^-1 = 0`` and ``y^(k+1) = 0``.
    """
    return e if 0 <= e <= k else None


# ---------------------------------------------------------------- linear maps


@dataclass(frozen=True)
class LinearMap:
    domain: object
    codomain: object
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} != ({self.codomain.dim}, {self.domain.dim})"
            )

    @classmethod
    def from_images(cls, domain, codomain, image: Callable[[Hashable], Mapping]) -> "LinearMap":
        ent = {}
        for j, lab in enumerate(domain.labels()):
            for out_lab, c in image(lab).items():
                if c:
                    ent[codomain.index(out_lab), j] = c
        return cls(domain, codomain, Matrix(codomain.dim, domain.dim, ent))

    def __call__(self, elem: Mapping) -> Element:
        return from_vector(self.codomain, self.matrix.apply(to_vector(self.domain, elem)))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if other.codomain.dim != self.domain.dim:
            raise ValueError("maps are not composable")
        return LinearMap(other.domain, self.codomain, self.matrix @ other.matrix)

    def image_of(self, label) -> Element:
        return from_vector(self.codomain, self.matrix.column(self.domain.index(label)))


def identity_map(space) -> LinearMap:
    return LinearMap(space, space, Matrix.identity(space.dim))


def tensor_maps(f: LinearMap, g: LinearMap) -> LinearMap:
    """f (x) g on TensorSpace([f.domain, g.domain])."""
    dom = TensorSpace([f.domain, g.domain])
    cod = TensorSpace([f.codomain, g.codomain])
    fcols = [from_vector(f.codomain, c) for c in f.matrix.columns()]
    gcols = [from_vector(g.codomain, c) for c in g.matrix.columns()]
    def image(lab):
        fa = fcols[f.domain.index(lab[0])]
        gb = gcols[g.domain.index(lab[1])]
        return {(u, v): cu * cv for u, cu in fa.items() for v, cv in gb.items()}

    return LinearMap.from_images(dom, cod, image)


def sym_mult(a: int, b: int) -> LinearMap:
    """Product map S^a H (x) S^b H -> S^(a+b) H, x^i (x) x^j -> x^(i+j)."""
    if a < 0 or b < 0:
        raise ValueError("degrees must be >= 0")
    dom = TensorSpace([SymBasis(a), SymBasis(b)])
    return LinearMap.from_images(dom, SymBasis(a + b), lambda ij: {ij[0] + ij[1]: 1})


def wedge_power_map(f: LinearMap, r: int) -> LinearMap:
    """The induced map on r-th exterior powers, v1^...^vr -> f(v1)^...^f(vr)."""
    n = f.domain.dim
    if r > n:
        raise ValueError(f"r={r} exceeds domain dimension {n}")
    if r < 0:
        raise ValueError("r must be >= 0")
    cols = [sorted(c.items()) for c in f.matrix.columns()]
    dom = WedgeBasis(r, n)
    cod = WedgeBasis(r, f.codomain.dim)

    def image(I):
        out: dict = {}
        for terms in itertools.product(*(cols[i] for i in I)):
            sign, J = sort_sign([t[0] for t in terms])
            if sign:
                c = Fraction(sign)
                for _, v in terms:
                    c *= v
                add_into(out, J, c)
        return out

    return LinearMap.from_images(dom, cod, image)


def contract_pair(r: int, n: int) -> Callable[[Mapping, Mapping], Fraction]:
    """Basis-dual pairing of wedge^r(A*) with wedge^r(A), dim A = n."""
    basis = WedgeBasis(r, n)

    def pair(u: Mapping, v: Mapping) -> Fraction:
        total = Fraction(0)
        for lab, c in u.items():
            if not basis.contains(lab):
                raise KeyError(lab)
            d = v.get(lab)
            if d:
                total += as_scalar(c) * as_scalar(d)
        return total

    return pair


def split_wedge_of_tensor(a_dim: int, h_deg: int, r: int) -> LinearMap:
    """wedge^r(A (x) S^h H) -> wedge^r A (x) S^(r h) H.

    Sends (a1 (x) x^e1) ^ ... ^ (ar (x) x^er) to (a1 ^ ... ^ ar) (x) x^(e1+...+er).
    The wedge-power domain uses flat indices of TensorSpace([A, S^h H]).
    """
    inner = TensorSpace([FlatBasis(a_dim), SymBasis(h_deg)])
    inner_labels = inner.labels()
    dom = WedgeBasis(r, inner.dim)
    cod = TensorSpace([WedgeBasis(r, a_dim), SymBasis(r * h_deg)])

    def image(I):
        parts = [inner_labels[i] for i in I]
        sign, A = sort_sign([p[0] for p in parts])
        if not sign:
            return {}
        return {(A, sum(p[1] for p in parts)): sign}

    return LinearMap.from_images(dom, cod, image)
