"""Input families: simplicial, independence and chessboard complexes,
Chevalley complexes of Lie algebras, and random test complexes.

Faces are stored as sorted tuples of vertex indices and each degree's
basis is listed lexicographically. Flag complexes (independence and
chessboard) are enumerated one level at a time by extending each face with
larger admissible vertices, which keeps lexicographic order for free and
never needs the whole face poset at once.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core import ZZ, ChainComplex, RingSpec, SparseMatrix
from .errors import JacobiViolation


# simplicial complexes


class SimplicialComplex:
    """Downward closure of a list of facets over an ordered vertex list."""

    def __init__(self, vertices, facets):
        self.vertices = list(vertices)
        fs = {tuple(sorted(set(f))) for f in facets if len(f)}
        for f in fs:
            if len(f) and not (0 <= f[0] and f[-1] < len(self.vertices)):
                raise ValueError(f"facet {f} uses an unknown vertex")
        # keep only maximal faces
        by_size = sorted(fs, key=len, reverse=True)
        kept = []
        for f in by_size:
            sf = set(f)
            if not any(sf < set(g) for g in kept):
                kept.append(f)
        self.facets = sorted(kept)

    @classmethod
    def from_labels(cls, facets, vertices=None):
        """Facets given as label sequences; vertices default to sorted labels."""
        if vertices is None:
            vertices = sorted({v for f in facets for v in f})
        pos = {v: i for i, v in enumerate(vertices)}
        return cls(vertices, [[pos[v] for v in f] for f in facets])

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def faces(self, k: int) -> list:
        """Sorted k-dimensional faces."""
        out = set()
        for f in self.facets:
            if len(f) > k:
                out.update(itertools.combinations(f, k + 1))
        return sorted(out)

    def levels(self) -> Iterator[list]:
        for k in range(self.dimension + 1):
            yield self.faces(k)

    def label(self, face) -> str:
        return "".join(str(self.vertices[i]) for i in face)

    def f_vector(self) -> list:
        return [len(level) for level in self.levels()]


class FlagComplex(SimplicialComplex):
    """Clique complex of the complement of a graph: independent vertex sets.

    ``blocked[v]`` is a bitmask of vertices that conflict with ``v``.
    """

    def __init__(self, vertices, blocked):
        self.vertices = list(vertices)
        self.blocked = list(blocked)
        self._facets = None

    @property
    def facets(self):
        if self._facets is None:
            self._facets = self._maximal()
        return self._facets

    def _maximal(self):
        n = len(self.vertices)
        out = []
        for level in self.levels():
            for f in level:
                mask = 0
                for v in f:
                    mask |= self.blocked[v] | (1 << v)
                if mask == (1 << n) - 1:
                    out.append(f)
        return sorted(out)

    def levels(self) -> Iterator[list]:
        n = len(self.vertices)
        cur = [((v,), self.blocked[v] | ((1 << (v + 1)) - 1)) for v in range(n)]
        while cur:
            yield [f for f, _ in cur]
            nxt = []
            for f, mask in cur:
                for v in range(f[-1] + 1, n):
                    if not mask >> v & 1:
                        nxt.append((f + (v,), mask | self.blocked[v] | ((1 << (v + 1)) - 1)))
            cur = nxt

    def faces(self, k: int) -> list:
        for i, level in enumerate(self.levels()):
            if i == k:
                return level
        return []

    @property
    def dimension(self) -> int:
        return sum(1 for _ in self.levels()) - 1


def independence_complex(edges, n: Optional[int] = None, labels=None) -> FlagComplex:
    """Faces are the independent vertex sets of the graph."""
    if n is None:
        n = len(labels) if labels is not None else 1 + max((max(e) for e in edges), default=-1)
    blocked = [0] * n
    for u, v in edges:
        if u == v:
            raise ValueError("graph has a loop")
        blocked[u] |= 1 << v
        blocked[v] |= 1 << u
    return FlagComplex(labels if labels is not None else list(range(n)), blocked)


def chessboard_complex(m: int, n: int) -> FlagComplex:
    """Non-attacking rook placements on an m x n board, squares row-major."""
    if m < 1 or n < 1:
        raise ValueError("board needs m, n >= 1")
    edges = []
    for a in range(m * n):
        for b in range(a + 1, m * n):
            if a // n == b // n or a % n == b % n:
                edges.append((a, b))
    labels = [f"{i + 1}{j + 1}" if max(m, n) < 10 else f"({i + 1},{j + 1})"
              for i in range(m) for j in range(n)]
    return independence_complex(edges, m * n, labels)


def hypercube_graph(n: int):
    """Edges of the n-cube on vertices ``0 .. 2^n - 1``."""
    return [(v, v | 1 << b) for v in range(1 << n) for b in range(n) if not v >> b & 1]


def path_graph(n: int):
    return [(i, i + 1) for i in range(n - 1)]


def cycle_graph(n: int):
    return path_graph(n) + ([(n - 1, 0)] if n > 2 else [])


def parse_graph(text: str):
    """``hypercube:5``, ``path:7`` or ``cycle:4`` -> ``(n, edges)``."""
    kind, _, arg = text.partition(":")
    try:
        k = int(arg)
    except ValueError:
        raise ValueError(f"bad graph spec {text!r}") from None
    if kind == "hypercube":
        return 1 << k, hypercube_graph(k)
    if kind == "path":
        return k, path_graph(k)
    if kind == "cycle":
        return k, cycle_graph(k)
    raise ValueError(f"unknown graph family {kind!r}")


def _boundary(lower: list, upper: list, ring: RingSpec) -> SparseMatrix:
    index = {f: i for i, f in enumerate(lower)}
    one, neg = ring.coerce(1), ring.coerce(-1)
    cols = []
    for f in upper:
        col = {}
        for i in range(len(f)):
            col[index[f[:i] + f[i + 1:]]] = one if i % 2 == 0 else neg
        cols.append(col)
    return SparseMatrix(len(lower), len(upper), cols)


def simplicial_chain_complex(K: SimplicialComplex, ring: RingSpec = ZZ) -> ChainComplex:
    """Alternating-sign boundary on lexicographically ordered faces."""
    levels = list(K.levels())
    if not levels:
        return ChainComplex(ring, [0], [])
    mats = [_boundary(levels[k - 1], levels[k], ring) for k in range(1, len(levels))]
    return ChainComplex(ring, [len(x) for x in levels], mats)


@dataclass
class BoundaryStats:
    degree: int
    shape: tuple
    nnz: int


def boundary_stats(K: SimplicialComplex, k: int) -> BoundaryStats:
    """Shape and nonzero count of the k-th boundary, building only that matrix."""
    if k < 1:
        raise ValueError("boundaries start at degree 1")
    prev = None
    for i, level in enumerate(K.levels()):
        if i == k:
            d = _boundary(prev, level, ZZ)
            return BoundaryStats(k, d.shape, d.nnz)
        prev = level
    raise ValueError(f"complex has no faces of dimension {k}")


# Lie algebras


@dataclass
class LieAlgebraSpec:
    """Structure constants ``[x_i, x_j] = sum_m c[i, j][m] x_m`` for ``i < j``."""

    name: str
    labels: list
    brackets: dict = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        clean = {}
        for (i, j), vec in self.brackets.items():
            vec = {m: c for m, c in vec.items() if c}
            if not vec:
                continue
            if i == j:
                raise JacobiViolation(f"[x{i}, x{i}] must vanish")
            if i > j:
                i, j, vec = j, i, {m: -c for m, c in vec.items()}
            if (i, j) in clean and clean[(i, j)] != vec:
                raise JacobiViolation(f"bracket ({i}, {j}) is not antisymmetric")
            clean[(i, j)] = vec
        self.brackets = clean
        if self.check and self.dim <= 30:
            self.check_jacobi()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket(self, i: int, j: int) -> dict:
        if i < j:
            return self.brackets.get((i, j), {})
        return {m: -c for m, c in self.brackets.get((j, i), {}).items()}

    def _apply(self, i, vec):
        out = {}
        for j, c in vec.items():
            for m, e in self.bracket(i, j).items():
                out[m] = out.get(m, 0) + c * e
        return out

    def check_jacobi(self):
        n = self.dim
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    tot = {}
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        for m, e in self._apply(x, self.bracket(y, z)).items():
                            tot[m] = tot.get(m, 0) + e
                    if any(tot.values()):
                        raise JacobiViolation(f"Jacobi fails on ({a}, {b}, {c})")


def heisenberg(n: int) -> LieAlgebraSpec:
    """Basis ``x_1..x_n, y_1..y_n, z`` with ``[x_i, y_i] = z``."""
    labels = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)] + ["z"]
    br = {(i, n + i): {2 * n: 1} for i in range(n)}
    return LieAlgebraSpec(f"heisenberg({n})", labels, br)


def general_linear(n: int) -> LieAlgebraSpec:
    """Elementary matrices ``E_ij`` in row-major order."""
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    br = {}
    for a in range(n * n):
        i, j = divmod(a, n)
        for b in range(a + 1, n * n):
            k, l = divmod(b, n)
            vec = {}
            if j == k:
                vec[i * n + l] = vec.get(i * n + l, 0) + 1
            if l == i:
                vec[k * n + j] = vec.get(k * n + j, 0) - 1
            if any(vec.values()):
                br[(a, b)] = vec
    return LieAlgebraSpec(f"gl({n})", labels, br)


def _wedge_basis(n, k):
    """Bitmasks of k-subsets of range(n), lexicographic in the subsets."""
    return [sum(1 << i for i in c) for c in itertools.combinations(range(n), k)]


def _chevalley_columns(L: LieAlgebraSpec, k: int, upper, index, ring):
    """Columns of the k-th Chevalley boundary for the wedge monomials ``upper``."""
    pairs = list(L.brackets.items())
    coerce = ring.coerce
    cols = []
    for mask in upper:
        col = {}
        for (i, j), vec in pairs:
            if not (mask >> i & 1 and mask >> j & 1):
                continue
            # positions (1-based) of x_i and x_j inside the monomial
            pi = bin(mask & ((1 << i) - 1)).count("1") + 1
            pj = bin(mask & ((1 << j) - 1)).count("1") + 1
            rest = mask & ~(1 << i) & ~(1 << j)
            base = -1 if (pi + pj) % 2 else 1
            for m, c in vec.items():
                if rest >> m & 1:
                    continue
                # move x_m from the front into sorted position
                sign = -1 if bin(rest & ((1 << m) - 1)).count("1") % 2 else 1
                r = index[rest | 1 << m]
                col[r] = col.get(r, 0) + base * sign * c
        cols.append({r: coerce(x) for r, x in col.items() if x})
    return cols


def chevalley_complex(L: LieAlgebraSpec, ring: RingSpec = ZZ) -> ChainComplex:
    """Exterior algebra of ``L`` with the Chevalley boundary."""
    n = L.dim
    bases = [_wedge_basis(n, k) for k in range(n + 1)]
    mats = []
    for k in range(1, n + 1):
        index = {m: i for i, m in enumerate(bases[k - 1])}
        cols = _chevalley_columns(L, k, bases[k], index, ring)
        mats.append(SparseMatrix(len(bases[k - 1]), len(bases[k]), cols))
    return ChainComplex(ring, [len(b) for b in bases], mats)


def chevalley_boundary(L: LieAlgebraSpec, k: int, ring: RingSpec = ZZ) -> SparseMatrix:
    """Only the k-th Chevalley boundary (for shape checks on big algebras)."""
    lower = _wedge_basis(L.dim, k - 1)
    index = {m: i for i, m in enumerate(lower)}
    upper = _wedge_basis(L.dim, k)
    cols = _chevalley_columns(L, k, upper, index, ring)
    return SparseMatrix(len(lower), len(upper), cols)


def wedge_label(L: LieAlgebraSpec, mask: int) -> str:
    return "∧".join(L.labels[i] for i in range(L.dim) if mask >> i & 1) or "1"


# random complexes for testing


def random_simplicial_complex(rng: random.Random, max_vertices=7, max_facets=6, max_size=4):
    n = rng.randint(1, max_vertices)
    facets = []
    for _ in range(rng.randint(1, max_facets)):
        size = rng.randint(1, min(max_size, n))
        facets.append(rng.sample(range(n), size))
    return SimplicialComplex(range(n), facets)


def _random_unimodular(rng, n, steps):
    """A unimodular integer matrix and its inverse, as dense row lists."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Q = [row[:] for row in P]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        # P := P (I + c e_ij): column j += c * column i
        for row in P:
            row[j] += c * row[i]
        # Q := (I - c e_ij) Q: row i -= c * row j
        Q[i] = [a - c * b for a, b in zip(Q[i], Q[j])]
    return P, Q


def _dense_mul(A, B):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def random_torsion_complex(rng: random.Random, top=3, max_pairs=3, factors=(1, 1, 2, 3, 4, 6, 9)):
    """A direct sum of free pieces and ``Z <-d- Z`` pieces, hidden by basis changes.

    Returns ``(complex, expected)`` where ``expected[k] = (free, torsion)``.
    """
    free = [rng.randint(0, 2) for _ in range(top + 1)]
    pieces = [[rng.choice(factors) for _ in range(rng.randint(0, max_pairs))] for _ in range(top)]
    ranks = [free[k] for k in range(top + 1)]
    for k, ds in enumerate(pieces, start=1):
        ranks[k - 1] += len(ds)
        ranks[k] += len(ds)
    # block layout: degree k holds free gens, then targets of pieces[k+1], then sources of pieces[k]
    mats = []
    for k in range(1, top + 1):
        A = [[0] * ranks[k] for _ in range(ranks[k - 1])]
        lo_off = free[k - 1]
        hi_off = free[k] + (len(pieces[k]) if k < top else 0)
        for t, dv in enumerate(pieces[k - 1]):
            A[lo_off + t][hi_off + t] = dv
        mats.append(A)
    changes = [_random_unimodular(rng, r, 2 * r) for r in ranks]
    out = []
    for k in range(1, top + 1):
        _, Qlo = changes[k - 1]
        Phi, _ = changes[k]
        out.append(_dense_mul(_dense_mul(Qlo, mats[k - 1]), Phi))
    C = ChainComplex(ZZ, ranks, [SparseMatrix.from_dense(m, ZZ, ncols=ranks[k + 1])
                                 for k, m in enumerate(out)])
    expected = []
    for k in range(top + 1):
        tors = sorted(d for d in (pieces[k] if k < top else []) if d > 1)
        f = free[k] + sum(1 for d in (pieces[k] if k < top else []) if d == 0)
        expected.append((f, tors))
    return C, expected


def fill_in_example(m: int, n: int, variant: str = "a") -> ChainComplex:
    """One m x n boundary with a full first column and a full last row.

    Variant ``b`` swaps the first and last rows, ``c`` also swaps the first
    and last columns. All three are the same complex in different bases,
    but one reduction pass leaves density 1, ``1/(m-1)`` and 0 respectively.
    """
    if variant not in ("a", "b", "c"):
        raise ValueError(f"unknown variant {variant!r}")
    rows = list(range(m))
    cols = list(range(n))
    if variant in ("b", "c"):
        rows[0], rows[-1] = rows[-1], rows[0]
    if variant == "c":
        cols[0], cols[-1] = cols[-1], cols[0]
    entries = [(i, 0, 1) for i in range(m)] + [(m - 1, j, 1) for j in range(1, n)]
    pos_r = {old: new for new, old in enumerate(rows)}
    pos_c = {old: new for new, old in enumerate(cols)}
    d = SparseMatrix.from_entries(m, n, [(pos_r[i], pos_c[j], x) for i, j, x in entries], ZZ)
    return ChainComplex(ZZ, [m, n], [d])
