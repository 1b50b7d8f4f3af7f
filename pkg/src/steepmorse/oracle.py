"""Brute-force ground truth for small complexes.

Dense Smith normal form and rank computations, plus a literal
enumeration of zig-zag paths. Nothing here is fast, and nothing here
shares code with the reduction pipeline beyond the data types.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import ChainComplex, RingSpec, SparseMatrix, p_valuation
from .errors import TooLarge

DEFAULT_CAP = 5000


@dataclass
class SNFResult:
    """``U @ A @ V == D`` with ``D`` diagonal; ``U_inv`` is ``U`` inverted."""

    diagonal: list
    U: Optional[list] = None
    V: Optional[list] = None
    U_inv: Optional[list] = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A, transforms: bool = False) -> SNFResult:
    """Smith normal form of a dense integer matrix (list of rows).

    Pivots on the entry of least absolute value. The diagonal lists the
    nonzero invariant factors ``d_1 | d_2 | ...``, all positive.
    """
    D = [list(map(int, row)) for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _identity(m) if transforms else None
    Ui = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        if i == j:
            return
        D[i], D[j] = D[j], D[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in D:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for c in range(n):
            if rs[c]:
                rd[c] += q * rs[c]
        if transforms:
            ud, us = U[dst], U[src]
            for c in range(m):
                if us[c]:
                    ud[c] += q * us[c]
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q):
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        if transforms:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        if transforms:
            U[i] = [-x for x in U[i]]
            for row in Ui:
                row[i] = -row[i]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            piv = D[t][t]
            again = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    again = again or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    again = again or D[t][j] != 0
            if again:
                # a smaller remainder appeared in row/column t: pivot on it
                cand = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                cand += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                if any(x % piv for x in D[i][t + 1:]):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            negate_row(t)
        diag.append(D[t][t])
        t += 1
    return SNFResult(diag, U, V, Ui)


def _to_int_rows(M: SparseMatrix, ring: RingSpec):
    """Dense integer rows; ZLoc columns are cleared of their (unit) denominators."""
    rows = M.to_dense()
    if ring.kind == "ZLoc":
        for j in range(M.ncols):
            den = 1
            for x in M.col(j).values():
                den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
            for r in rows:
                r[j] = int(Fraction(r[j]) * den)
    return rows


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def rank_over_field(M: SparseMatrix, ring: RingSpec) -> int:
    """Gaussian elimination rank over Q or GF(p)."""
    rows = [dict(r) for r in M.rows if r]
    if ring.kind == "GF":
        p = ring.p
        rows = [{j: x % p for j, x in r.items() if x % p} for r in rows]
    else:
        rows = [{j: Fraction(x) for j, x in r.items()} for r in rows]
    rank = 0
    while rows:
        piv_row = rows.pop()
        if not piv_row:
            continue
        j = min(piv_row)
        pv = piv_row[j]
        rank += 1
        nxt = []
        for r in rows:
            if j in r:
                if ring.kind == "GF":
                    q = r[j] * pow(pv, -1, ring.p) % ring.p
                    for c, x in piv_row.items():
                        s = (r.get(c, 0) - q * x) % ring.p
                        if s:
                            r[c] = s
                        else:
                            r.pop(c, None)
                else:
                    q = r[j] / pv
                    for c, x in piv_row.items():
                        s = r.get(c, 0) - q * x
                        if s:
                            r[c] = s
                        else:
                            r.pop(c, None)
            if r:
                nxt.append(r)
        rows = nxt
    return rank


def homology_via_snf(C: ChainComplex, cap: int = DEFAULT_CAP):
    """Exact homology of a small complex, from ranks and Smith forms.

    Returns a :class:`~steepmorse.torsion.HomologyResult` without generators.
    """
    from .torsion import DegreeHomology, HomologyResult

    if sum(C.ranks) > cap:
        raise TooLarge(f"total rank {sum(C.ranks)} exceeds oracle cap {cap}")
    ring = C.ring
    N = C.top_degree
    ranks_d = [0] * (N + 2)
    torsion = [[] for _ in range(N + 2)]
    for k in range(1, N + 1):
        d = C.boundaries[k - 1]
        if ring.is_field:
            ranks_d[k] = rank_over_field(d, ring)
            continue
        snf = smith_normal_form(_to_int_rows(d, ring)) if d.nrows and d.ncols else SNFResult([])
        ranks_d[k] = snf.rank
        if ring.kind == "Z":
            torsion[k - 1] = [x for x in snf.diagonal if x > 1]
        else:
            p = ring.p
            torsion[k - 1] = [p ** p_valuation(x, p) for x in snf.diagonal if x % p == 0]
    degrees = []
    for k in range(N + 1):
        free = C.ranks[k] - ranks_d[k] - ranks_d[k + 1]
        degrees.append(DegreeHomology(k, free, sorted(torsion[k])))
    return HomologyResult(ring, degrees)


# literal zig-zag path enumeration


def zigzag_paths(C: ChainComplex, M, k: int, start: int):
    """All zig-zag paths in the k-th boundary starting at column ``start``.

    Yields ``(end_row, weight, visited_matched_columns)`` for every path
    ending at any row (the walk stops at unmatched rows). Each matched
    column reached contributes an intermediate path ending at that column.
    """
    ring = C.ring
    d = C.boundaries[k - 1]
    match = {u: (v, w) for u, v, w in M.get(k, [])}

    def walk(col, weight, seen):
        for x, val in d.col(col).items():
            if col != start and match.get(x, (None,))[0] == col:
                continue  # the matched edge itself is reversed
            wx = ring.reduce(weight * val)
            yield ("row", x, wx)
            if x in match:
                v, w = match[x]
                if v in seen:
                    raise RuntimeError("cycle")
                wv = ring.reduce(wx * -ring.inverse(w))
                yield ("col", v, wv)
                yield from walk(v, wv, seen | {v})

    yield from walk(start, ring.one, {start})


def brute_force_reduce(C: ChainComplex, M):
    """Reduced boundaries, f and g by summing over every zig-zag path.

    Exponential in general; for cross-checking on small inputs only.
    """
    ring = C.ring
    N = C.top_degree
    plus = [set() for _ in range(N + 1)]
    minus = [set() for _ in range(N + 1)]
    for k, pairs in M.items():
        for u, v, _ in pairs:
            plus[k].add(v)
            minus[k - 1].add(u)
    crit = [[i for i in range(C.ranks[k]) if i not in plus[k] | minus[k]] for k in range(N + 1)]
    pos = [{x: n for n, x in enumerate(c)} for c in crit]

    def add(col, key, val):
        col[key] = ring.reduce(col.get(key, 0) + val)

    mats, fs, gs = [], [], []
    fs.append(SparseMatrix(C.ranks[0], len(crit[0]), [{v: ring.one} for v in crit[0]]))
    for k in range(1, N + 1):
        dcols, fcols = [], []
        for vp in crit[k]:
            dc, fc = {}, {vp: ring.one}
            for kind, x, w in zigzag_paths(C, M, k, vp):
                if kind == "row" and x in pos[k - 1]:
                    add(dc, pos[k - 1][x], w)
                elif kind == "col":
                    add(fc, x, w)
            dcols.append({i: x for i, x in dc.items() if x != 0})
            fcols.append({i: x for i, x in fc.items() if x != 0})
        mats.append(SparseMatrix(len(crit[k - 1]), len(crit[k]), dcols))
        fs.append(SparseMatrix(C.ranks[k], len(crit[k]), fcols))
    for k in range(N + 1):
        gcols = []
        up = {u: (v, w) for u, v, w in M.get(k + 1, [])}
        for v in range(C.ranks[k]):
            col = {}
            if v in pos[k]:
                col[pos[k][v]] = ring.one
            elif v in up:
                # path v -> matched column y, then zig-zags down in degree k+1
                y, w = up[v]
                first = ring.reduce(-ring.inverse(w))
                d = C.boundaries[k]
                for x, val in d.col(y).items():
                    if x == v:
                        continue
                    wx = ring.reduce(first * val)
                    if x in pos[k]:
                        add(col, pos[k][x], wx)
                    elif x in up:
                        for kind, z, wz in _down_from_row(C, M, k + 1, x, wx):
                            if kind == "row" and z in pos[k]:
                                add(col, pos[k][z], wz)
            gcols.append({i: x for i, x in col.items() if x != 0})
        gs.append(SparseMatrix(len(crit[k]), C.ranks[k], gcols))
    reduced = ChainComplex(ring, [len(c) for c in crit], mats)
    return reduced, fs, gs


def _down_from_row(C, M, k, row, weight):
    """Continue zig-zags from a matched row of the k-th boundary."""
    ring = C.ring
    d = C.boundaries[k - 1]
    match = {u: (v, w) for u, v, w in M.get(k, [])}
    v, w = match[row]
    wv = ring.reduce(weight * -ring.inverse(w))
    for x, val in d.col(v).items():
        if x == row:
            continue
        wx = ring.reduce(wv * val)
        yield ("row", x, wx)
        if x in match:
            yield from _down_from_row(C, M, k, x, wx)
