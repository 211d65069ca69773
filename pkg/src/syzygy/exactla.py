"""Exact linear algebra over Q, with an optional modular fast path.

Matrices are stored sparsely as ``{(row, col): Fraction}``. Elimination is
fraction-free: rows are scaled to primitive integer vectors and combined by
cross-multiplication, with a dense Bareiss phase once the active block
fills in past 50%. Pivoting is deterministic (first column with a nonzero,
first row in natural order) so reports are reproducible.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import isprime

log = logging.getLogger(__name__)

DENSE_FILL = 0.5


class NoUsablePrimes(ArithmeticError):
    pass


class Inconsistent(Exception):
    """Raised by :func:`solve` when ``m x = b`` has no solution."""


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def format_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable sparse matrix with Fraction entries (absent means zero)."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = as_scalar(v)
            if v:
                clean[i, j] = v
        self._entries = clean

    # constructors
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[object]]) -> "Matrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                ent[i, j] = v
        return cls(rows, cols, ent)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "Matrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                ent[i, j] = v
        return cls(rows, len(columns), ent)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def items(self):
        return self._entries.items()

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._entries.get((i, j), Fraction(0))

    def column(self, j: int) -> dict[int, Fraction]:
        return {i: v for (i, jj), v in self._entries.items() if jj == j}

    def columns(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (i, j), v in self._entries.items():
            out[j][i] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def to_lists(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    # algebra
    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    T = property(transpose)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        ent = dict(self._entries)
        for k, v in other._entries.items():
            ent[k] = ent.get(k, 0) + v
        return Matrix(self.rows, self.cols, ent)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix(self.rows, self.cols, {k: c * v for k, v in self._entries.items()})

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        right_rows = other.row_dicts()
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self._entries.items():
            for j, b in right_rows[k].items():
                acc[i, j] = acc.get((i, j), 0) + a * b
        return Matrix(self.rows, other.cols, acc)

    def apply(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        """Matrix times a sparse column vector ``{index: value}``."""
        cols = self.columns()
        out: dict[int, Fraction] = {}
        for j, x in vec.items():
            x = as_scalar(x)
            if not x:
                continue
            for i, a in cols[j].items():
                out[i] = out.get(i, 0) + a * x
        return {i: v for i, v in out.items() if v}

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        ent = dict(self._entries)
        ent.update({(i, j + self.cols): v for (i, j), v in other._entries.items()})
        return Matrix(self.rows, self.cols + other.cols, ent)

    def is_zero(self) -> bool:
        return not self._entries

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # dump format
    def dumps(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for row in self.to_lists():
            lines.append(" ".join(format_scalar(v) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Matrix":
        lines = text.splitlines()
        rows, cols = (int(t) for t in lines[0].split())
        data = []
        for line in lines[1 : rows + 1]:
            toks = line.split()
            if len(toks) != cols:
                raise ValueError("malformed matrix dump")
            data.append([Fraction(t) for t in toks])
        if len(data) != rows:
            raise ValueError("malformed matrix dump")
        return cls(rows, cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r)})


# ---------------------------------------------------------------- configuration


class Mode(enum.Enum):
    EXACT = "exact"
    MODULAR_PROBE = "modular-probe"
    MODULAR_CONFIRM = "modular-with-exact-confirm"


@dataclass(frozen=True)
class ModularConfig:
    primes: tuple[int, ...] = ()
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be distinct")
        for p in self.primes:
            if p <= 2**20 or not isprime(p):
                raise ValueError(f"{p} is not a prime > 2^20")
        if self.mode is not Mode.EXACT and not self.primes:
            raise ValueError(f"mode {self.mode.value} needs at least one prime")


EXACT = ModularConfig()


def random_primes(count: int, bits: int = 30, rng=None) -> tuple[int, ...]:
    """Draw ``count`` distinct primes of exactly ``bits`` bits."""
    import random

    from sympy import nextprime

    rng = rng or random.Random()
    out: list[int] = []
    while len(out) < count:
        p = nextprime(rng.randrange(2 ** (bits - 1), 2**bits - 2**12))
        if p < 2**bits and p not in out:
            out.append(int(p))
    return tuple(out)


# ---------------------------------------------------------------- elimination


@dataclass
class Echelon:
    """Result of forward elimination: pivot rows in pivot order."""

    cols: int
    pivots: list[tuple[int, dict[int, int]]] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_cols(self) -> list[int]:
        return [c for c, _ in self.pivots]


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _integer_rows(m: Matrix) -> list[dict[int, int]]:
    out = []
    for row in m.row_dicts():
        if not row:
            out.append({})
            continue
        den = math.lcm(*(v.denominator for v in row.values()))
        out.append(_primitive({j: int(v * den) for j, v in row.items()}))
    return out


def _bareiss_block(rows: list[dict[int, int]], col_order: list[int]) -> list[tuple[int, dict[int, int]]]:
    """Dense Bareiss echelon on ``rows`` restricted to ``col_order``."""
    pos = {c: k for k, c in enumerate(col_order)}
    a = [[0] * len(col_order) for _ in rows]
    for i, row in enumerate(rows):
        for c, v in row.items():
            a[i][pos[c]] = v
    n_rows, n_cols = len(a), len(col_order)
    pivots = []
    prev = 1
    r = 0
    for k in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if a[i][k]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][k]
        pr = a[r]
        for i in range(r + 1, n_rows):
            ai = a[i]
            f = ai[k]
            ai[k] = 0
            for j in range(k + 1, n_cols):
                ai[j] = (p * ai[j] - f * pr[j]) // prev
        prev = p
        pivots.append((col_order[k], {col_order[j]: v for j, v in enumerate(pr) if v and j >= k}))
        r += 1
    return [(c, _primitive(row)) for c, row in pivots]


def echelon(m: Matrix) -> Echelon:
    """Fraction-free forward elimination of ``m`` over the integers."""
    rows = _integer_rows(m)
    col_rows: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(i)
    active = set(i for i, row in enumerate(rows) if row)
    ech = Echelon(m.cols)
    nnz = sum(len(rows[i]) for i in active)
    for c in range(m.cols):
        if not active:
            break
        remaining_cols = m.cols - c
        if nnz > DENSE_FILL * len(active) * remaining_cols and len(active) > 1:
            block = [rows[i] for i in sorted(active)]
            log.debug("dense fallback at column %d: %d rows", c, len(block))
            ech.pivots.extend(_bareiss_block(block, list(range(c, m.cols))))
            return ech
        hits = col_rows.get(c)
        if not hits:
            continue
        piv = min(hits)
        prow = rows[piv]
        p = prow[c]
        active.discard(piv)
        for cc in prow:
            col_rows[cc].discard(piv)
        nnz -= len(prow)
        for i in sorted(hits):
            row = rows[i]
            f = row[c]
            nnz -= len(row)
            new = {k: p * v for k, v in row.items()}
            for k, v in prow.items():
                w = new.get(k, 0) - f * v
                if w:
                    if k not in new:
                        col_rows.setdefault(k, set()).add(i)
                    new[k] = w
                else:
                    if k in new:
                        del new[k]
                        col_rows[k].discard(i)
            new = _primitive(new)
            rows[i] = new
            nnz += len(new)
            if not new:
                active.discard(i)
        ech.pivots.append((c, prow))
    return ech


def exact_rank(m: Matrix) -> int:
    if m.is_zero():
        return 0
    return echelon(m).rank


# ---------------------------------------------------------------- modular path


def _reduce_mod(m: Matrix, p: int) -> np.ndarray | None:
    a = np.zeros((m.rows, m.cols), dtype=np.int64)
    for (i, j), v in m.items():
        if v.denominator % p == 0:
            return None
        a[i, j] = (v.numerator % p) * pow(v.denominator, -1, p) % p
    return a


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer array over F_p (p < 2^31)."""
    a = a.copy() % p
    n_rows, n_cols = a.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        below = r + 1 + np.flatnonzero(a[r + 1 :, c])
        if below.size:
            f = a[below, c][:, None]
            a[np.ix_(below, range(c, n_cols))] = (a[np.ix_(below, range(c, n_cols))] - f * a[r, c:]) % p
        r += 1
    return r


@dataclass
class RankResult:
    rank: int
    mode: Mode
    modular: dict[int, int] = field(default_factory=dict)
    skipped: list[int] = field(default_factory=list)
    exact: int | None = None


def rank_report(m: Matrix, cfg: ModularConfig = EXACT) -> RankResult:
    if cfg.mode is Mode.EXACT:
        r = exact_rank(m)
        return RankResult(r, cfg.mode, exact=r)
    res = RankResult(0, cfg.mode)
    for p in cfg.primes:
        a = _reduce_mod(m, p)
        if a is None:
            log.info("prime %d divides a denominator; skipped", p)
            res.skipped.append(p)
            continue
        res.modular[p] = rank_mod_p(a, p)
    if not res.modular:
        raise NoUsablePrimes("no usable primes")
    lower = max(res.modular.values())
    res.rank = lower
    if cfg.mode is Mode.MODULAR_CONFIRM:
        res.exact = exact_rank(m)
        if res.exact < lower:
            raise ArithmeticError(f"modular rank {lower} exceeds exact rank {res.exact}")
        if res.exact != lower:
            log.info("modular lower bound %d below exact rank %d", lower, res.exact)
        res.rank = res.exact
    return res


def rank(m: Matrix, cfg: ModularConfig = EXACT) -> int:
    """Rank over Q (exact mode) or the modular lower bound (probe mode)."""
    return rank_report(m, cfg).rank


# ---------------------------------------------------------------- kernels and solves


def _back_substitute(ech: Echelon, fixed: Mapping[int, Fraction]) -> dict[int, Fraction]:
    x: dict[int, Fraction] = {k: v for k, v in fixed.items() if v}
    for c, row in reversed(ech.pivots):
        s = Fraction(0)
        for k, v in row.items():
            if k != c and k in x:
                s += v * x[k]
        if s:
            x[c] = -s / row[c]
    return x


def kernel_basis(m: Matrix) -> list[dict[int, Fraction]]:
    """Exact basis of the right kernel, one vector per free column."""
    ech = echelon(m)
    pivot_cols = set(ech.pivot_cols)
    return [_back_substitute(ech, {f: Fraction(1)}) for f in range(m.cols) if f not in pivot_cols]


def solve(m: Matrix, b: Sequence[object] | Mapping[int, object]) -> dict[int, Fraction]:
    """A solution of ``m x = b`` (free variables set to zero).

    Raises :class:`Inconsistent` when there is none.
    """
    if isinstance(b, Mapping):
        bvec = {int(i): as_scalar(v) for i, v in b.items()}
        if any(not 0 <= i < m.rows for i in bvec):
            raise ValueError("right-hand side index out of range")
    else:
        if len(b) != m.rows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
        bvec = {i: as_scalar(v) for i, v in enumerate(b)}
    aug = m.hstack(Matrix.from_columns(m.rows, [bvec]))
    ech = echelon(aug)
    if m.cols in ech.pivot_cols:
        raise Inconsistent("system is inconsistent")
    x = _back_substitute(ech, {m.cols: Fraction(-1)})
    x.pop(m.cols, None)
    return x


def span_rank(vectors: Iterable[Mapping[int, object]], dim: int) -> int:
    return exact_rank(Matrix.from_columns(dim, list(vectors)))


def same_span(a: Sequence[Mapping[int, object]], b: Sequence[Mapping[int, object]], dim: int) -> bool:
    ra = span_rank(a, dim)
    rb = span_rank(b, dim)
    return ra == rb == span_rank(list(a) + list(b), dim)
