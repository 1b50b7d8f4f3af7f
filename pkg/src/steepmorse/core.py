"""Coefficient rings, exact sparse matrices and chain complexes.

Everything downstream computes on these three types. Elements are plain
Python numbers: ``int`` for Z and GF(p) residues, ``Fraction`` for Q and
for Z localized at a prime.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import EmptyShape, NonzeroComposite, RingError, ShapeMismatch

MAX_FIELD_PRIME = 2**61


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class RingSpec:
    """A coefficient ring: ``Z``, ``Q``, ``GF(p)`` or ``ZLoc(p)``."""

    kind: str
    p: Optional[int] = None

    KINDS = ("Z", "Q", "GF", "ZLoc")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind in ("GF", "ZLoc"):
            if self.p is None or not is_prime(self.p):
                raise RingError(f"{self.kind} needs a prime, got {self.p!r}")
            if self.kind == "GF" and self.p >= MAX_FIELD_PRIME:
                raise RingError(f"GF(p) supports p < 2^61, got {self.p}")
        elif self.p is not None:
            raise RingError(f"{self.kind} takes no prime")

    # construction helpers
    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Accept ``Z``, ``Q``, ``GF(p)``, ``ZLoc(p)`` and the CLI forms
        ``z``, ``q``, ``gf:p``, ``zloc:p``."""
        t = text.strip()
        low = t.lower()
        if low == "z":
            return cls("Z")
        if low == "q":
            return cls("Q")
        m = re.fullmatch(r"(gf|zloc)\s*(?:\(\s*(\d+)\s*\)|:\s*(\d+))", low)
        if m is None:
            raise RingError(f"cannot parse ring {text!r}")
        p = int(m.group(2) or m.group(3))
        return cls("GF" if m.group(1) == "gf" else "ZLoc", p)

    def __str__(self):
        if self.p is None:
            return self.kind
        return f"{self.kind}({self.p})"

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "GF")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return Fraction(1) if self.kind in ("Q", "ZLoc") else 1

    # element arithmetic
    def coerce(self, x):
        """Map an int, Fraction or decimal string into canonical form."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        kind = self.kind
        if kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if kind == "Q":
            return Fraction(x)
        if kind == "GF":
            p = self.p
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise RingError(f"{x} has no image in GF({p})")
                return x.numerator * pow(x.denominator, -1, p) % p
            return int(x) % p
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise RingError(f"{x} is not in Z localized at {self.p}")
        return x

    def reduce(self, x):
        """Cheap canonicalization used after native +,* in hot loops."""
        if self.kind == "GF":
            return x % self.p
        return x

    def is_unit(self, x) -> bool:
        kind = self.kind
        if kind == "Z":
            return x == 1 or x == -1
        if kind == "Q":
            return x != 0
        if kind == "GF":
            return x % self.p != 0
        return x != 0 and Fraction(x).numerator % self.p != 0

    def inverse(self, x):
        if not self.is_unit(x):
            raise RingError(f"{x} is not a unit in {self}")
        if self.kind == "Z":
            return x
        if self.kind == "GF":
            return pow(x, -1, self.p)
        return 1 / Fraction(x)

    def format(self, x) -> str:
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    def valuation(self, x) -> int:
        """p-adic valuation of a nonzero element of ZLoc(p)."""
        if self.kind != "ZLoc":
            raise RingError("valuation is defined for ZLoc(p) only")
        return p_valuation(Fraction(x).numerator, self.p)


ZZ = RingSpec("Z")
QQ = RingSpec("Q")


def GF(p: int) -> RingSpec:
    return RingSpec("GF", p)


def ZLoc(p: int) -> RingSpec:
    return RingSpec("ZLoc", p)


def is_unit(ring: RingSpec, x) -> bool:
    return ring.is_unit(x)


class SparseMatrix:
    """Exact sparse matrix stored by columns, with a lazily built row view.

    ``cols[j]`` is a dict ``{row: value}`` holding only nonzero values.
    Treat instances as immutable once built.
    """

    __slots__ = ("nrows", "ncols", "_cols", "_rows")

    def __init__(self, nrows: int, ncols: int, cols: Optional[list] = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative shape")
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        elif len(cols) != ncols:
            raise ValueError(f"expected {ncols} columns, got {len(cols)}")
        self._cols = cols
        self._rows = None

    @classmethod
    def from_entries(cls, nrows, ncols, entries: Iterable, ring: Optional[RingSpec] = None):
        """Build from ``(i, j, value)`` triples (0-based); duplicates add up."""
        cols = [{} for _ in range(ncols)]
        for i, j, x in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            if ring is not None:
                x = ring.coerce(x)
            c = cols[j]
            c[i] = c.get(i, 0) + x
        if ring is not None:
            for c in cols:
                for i in list(c):
                    v = ring.reduce(c[i])
                    if v == 0:
                        del c[i]
                    else:
                        c[i] = v
        else:
            for c in cols:
                for i in [i for i, v in c.items() if v == 0]:
                    del c[i]
        return cls(nrows, ncols, cols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], ring: Optional[RingSpec] = None, ncols=None):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = ((i, j, x) for i, r in enumerate(rows) for j, x in enumerate(r) if x != 0)
        return cls.from_entries(nrows, ncols, entries, ring)

    @classmethod
    def identity(cls, n: int, one=1):
        return cls(n, n, [{j: one} for j in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int):
        return cls(nrows, ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def col(self, j: int) -> dict:
        return self._cols[j]

    @property
    def cols(self) -> list:
        return self._cols

    @property
    def rows(self) -> list:
        if self._rows is None:
            rows = [{} for _ in range(self.nrows)]
            for j, c in enumerate(self._cols):
                for i, x in c.items():
                    rows[i][j] = x
            self._rows = rows
        return self._rows

    def row(self, i: int) -> dict:
        return self.rows[i]

    def row_list(self, i: int) -> list:
        """Row ``i`` as an ascending list of ``(col, value)``."""
        return sorted(self.rows[i].items())

    def col_list(self, j: int) -> list:
        return sorted(self._cols[j].items())

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._cols[j].get(i, 0)

    def entries(self) -> Iterator:
        """Nonzero ``(i, j, value)`` sorted by ``(i, j)``."""
        for i, r in enumerate(self.rows):
            for j in sorted(r):
                yield i, j, r[j]

    def to_dense(self) -> list:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, x in c.items():
                out[i][j] = x
        return out

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, [dict(r) for r in self.rows])

    def permute(self, row_order=None, col_order=None) -> "SparseMatrix":
        """Reorder rows/cols; ``row_order[new] = old`` (likewise for cols)."""
        if row_order is None:
            new_of_row = None
        else:
            if len(row_order) != self.nrows:
                raise ValueError("row permutation has wrong length")
            new_of_row = [0] * self.nrows
            for new, old in enumerate(row_order):
                new_of_row[old] = new
        cols = self._cols if col_order is None else [self._cols[old] for old in col_order]
        if col_order is not None and len(col_order) != self.ncols:
            raise ValueError("column permutation has wrong length")
        if new_of_row is None:
            return SparseMatrix(self.nrows, self.ncols, [dict(c) for c in cols])
        return SparseMatrix(
            self.nrows, self.ncols, [{new_of_row[i]: x for i, x in c.items()} for c in cols]
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        pos = {r: n for n, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({pos[i]: x for i, x in self._cols[j].items() if i in pos})
        return SparseMatrix(len(rows), len(cols), out)

    def matmul(self, other: "SparseMatrix", ring: Optional[RingSpec] = None) -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        red = ring.reduce if ring is not None else None
        mine = self._cols
        out = []
        for c in other._cols:
            acc: dict = {}
            for k, y in c.items():
                for i, x in mine[k].items():
                    acc[i] = acc.get(i, 0) + x * y
            if red is not None:
                acc = {i: red(v) for i, v in acc.items()}
            out.append({i: v for i, v in acc.items() if v != 0})
        return SparseMatrix(self.nrows, other.ncols, out)

    __matmul__ = matmul

    def apply(self, vec: dict, ring: Optional[RingSpec] = None) -> dict:
        """Multiply by a sparse column vector ``{index: value}``."""
        acc: dict = {}
        for k, y in vec.items():
            for i, x in self._cols[k].items():
                acc[i] = acc.get(i, 0) + x * y
        if ring is not None:
            acc = {i: ring.reduce(v) for i, v in acc.items()}
        return {i: v for i, v in acc.items() if v != 0}

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def matrix_density(m: SparseMatrix) -> Fraction:
    if m.nrows * m.ncols == 0:
        raise EmptyShape(f"density of a {m.nrows}x{m.ncols} matrix")
    return Fraction(m.nnz, m.nrows * m.ncols)


class ChainComplex:
    """``C_0 <- C_1 <- ... <- C_N`` of free modules with boundary matrices.

    ``boundaries[k-1]`` is the matrix of the k-th boundary, of shape
    ``ranks[k-1] x ranks[k]``. Shapes are checked at construction; the
    ``d∘d = 0`` condition is checked by :func:`validate_complex`.
    """

    __slots__ = ("ring", "ranks", "boundaries")

    def __init__(self, ring: RingSpec, ranks: Sequence[int], boundaries: Sequence[SparseMatrix]):
        self.ring = ring
        self.ranks = list(ranks)
        self.boundaries = list(boundaries)
        if len(self.boundaries) != max(len(self.ranks) - 1, 0):
            raise ShapeMismatch(
                f"{len(self.ranks)} ranks need {max(len(self.ranks) - 1, 0)} boundaries, "
                f"got {len(self.boundaries)}",
                k=None,
            )
        for k, d in enumerate(self.boundaries, start=1):
            if d.shape != (self.ranks[k - 1], self.ranks[k]):
                raise ShapeMismatch(
                    f"boundary {k} has shape {d.shape}, expected "
                    f"{(self.ranks[k - 1], self.ranks[k])}",
                    k=k,
                )

    @classmethod
    def from_dense(cls, ring: RingSpec, matrices: Sequence[Sequence[Sequence]], ranks=None):
        """Convenience constructor from nested lists ``[d_1, d_2, ...]``."""
        mats = []
        for m in matrices:
            mats.append(SparseMatrix.from_dense(m, ring))
        if ranks is None:
            ranks = [mats[0].nrows] + [m.ncols for m in mats] if mats else [0]
        return cls(ring, ranks, mats)

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, k: int) -> SparseMatrix:
        """The k-th boundary (1-based); zero maps outside the range."""
        if 1 <= k <= len(self.boundaries):
            return self.boundaries[k - 1]
        lo = self.ranks[k - 1] if 0 <= k - 1 < len(self.ranks) else 0
        hi = self.ranks[k] if 0 <= k < len(self.ranks) else 0
        return SparseMatrix.zeros(lo, hi)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))

    @property
    def nnz(self) -> int:
        return sum(d.nnz for d in self.boundaries)

    def is_zero(self) -> bool:
        return all(d.is_zero() for d in self.boundaries)

    def has_unit_entry(self) -> bool:
        unit = self.ring.is_unit
        return any(unit(x) for d in self.boundaries for c in d.cols for x in c.values())

    def change_ring(self, ring: RingSpec) -> "ChainComplex":
        """Reinterpret every entry in another ring (e.g. Z into GF(p))."""
        mats = [
            SparseMatrix.from_entries(d.nrows, d.ncols, _triples(d), ring)
            for d in self.boundaries
        ]
        return ChainComplex(ring, self.ranks, mats)

    def permute(self, orders: Sequence[Optional[Sequence[int]]]) -> "ChainComplex":
        """Relabel bases; ``orders[k][new] = old`` for each degree (None = keep)."""
        mats = []
        for k, d in enumerate(self.boundaries, start=1):
            mats.append(d.permute(orders[k - 1], orders[k]))
        return ChainComplex(self.ring, self.ranks, mats)

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.ranks == other.ranks
            and self.boundaries == other.boundaries
        )

    def __repr__(self):
        return f"ChainComplex({self.ring}, ranks={self.ranks}, nnz={self.nnz})"


def _triples(d: SparseMatrix):
    for j, c in enumerate(d.cols):
        for i, x in c.items():
            yield i, j, x


def find_violation(C: ChainComplex):
    """Return the first violated invariant as an exception instance, or None.

    Reported indices are 1-based, matching the external file format.
    """
    for k, d in enumerate(C.boundaries, start=1):
        if d.shape != (C.ranks[k - 1], C.ranks[k]):
            return ShapeMismatch(f"boundary {k} has shape {d.shape}", k=k)
    red = C.ring.reduce
    for k in range(2, len(C.boundaries) + 1):
        lo, hi = C.boundaries[k - 2], C.boundaries[k - 1]
        for w, c in enumerate(hi.cols):
            acc: dict = {}
            for v, y in c.items():
                for u, x in lo.col(v).items():
                    acc[u] = acc.get(u, 0) + x * y
            bad = sorted(u for u, s in acc.items() if red(s) != 0)
            if bad:
                return NonzeroComposite(k, bad[0] + 1, w + 1)
    return None


def validate_complex(C: ChainComplex) -> ChainComplex:
    """Raise on a shape mismatch or nonzero composite; return C otherwise."""
    err = find_violation(C)
    if err is not None:
        raise err
    return C
