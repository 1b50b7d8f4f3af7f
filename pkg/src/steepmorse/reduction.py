"""Morse reduction of a chain complex along a matching.

Zig-zag path sums are never enumerated. For each critical column we push
coefficients through the matched rows in a topological order (forward
pass), which yields the reduced boundary column and the column of ``f`` in
one sweep. ``g`` needs the sums *from* every matched row, computed once
per row by a memoized backward pass.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from .core import ChainComplex, SparseMatrix
from .matching import (
    Matching,
    index_partition,
    matched_col_order,
    matched_row_order,
    steepness_matching,
    validate_morse_matching,
)

log = logging.getLogger(__name__)


@dataclass
class PassStats:
    matched: list
    ranks: list
    nnz: list
    seconds: float
    fallback: bool = False


@dataclass
class ReductionResult:
    reduced: ChainComplex
    f: Optional[list] = None
    g: Optional[list] = None
    passes: int = 0
    matched_counts: list = field(default_factory=list)
    history: list = field(default_factory=list)
    critical: Optional[list] = None  # single pass only: surviving original indices


def prune_complex(C: ChainComplex, M) -> ChainComplex:
    """Drop entries that lie on no critical-to-critical path.

    In each boundary, columns matched as rows one degree up and rows matched
    as columns one degree down cannot carry a zig-zag path.
    """
    part = index_partition(C, M)
    mats = []
    for k, d in enumerate(C.boundaries, start=1):
        dead_cols = set(part.minus[k])
        dead_rows = set(part.plus[k - 1])
        cols = [
            {} if j in dead_cols else {i: x for i, x in c.items() if i not in dead_rows}
            for j, c in enumerate(d.cols)
        ]
        mats.append(SparseMatrix(d.nrows, d.ncols, cols))
    return ChainComplex(C.ring, C.ranks, mats)


def _forward_columns(d, pairs, crit_rows, crit_cols, ring, want_f):
    """Reduced boundary (and f) columns for every critical column."""
    red = ring.reduce
    one = ring.one
    cpos = {x: n for n, x in enumerate(crit_rows)}
    row_match = {u: (v, red(-ring.inverse(w))) for u, v, w in pairs}
    rank = matched_row_order(d, pairs) if pairs else {}
    cols = d.cols
    out_d, out_f = [], []
    for vp in crit_cols:
        alpha = {}
        heap = []
        for x, val in cols[vp].items():
            if x in row_match:
                alpha[x] = val
                heap.append((rank[x], x))
            elif x in cpos:
                alpha[x] = val
        heapq.heapify(heap)
        fcol = {vp: one} if want_f else None
        while heap:
            u = heapq.heappop(heap)[1]
            a = red(alpha.pop(u))
            if a == 0:
                continue
            v, ni = row_match[u]
            c = red(a * ni)
            if want_f:
                fcol[v] = c
            for x, val in cols[v].items():
                if x == u:
                    continue
                if x in row_match:
                    if x not in alpha:
                        heapq.heappush(heap, (rank[x], x))
                        alpha[x] = c * val
                    else:
                        alpha[x] += c * val
                elif x in cpos:
                    alpha[x] = alpha.get(x, 0) + c * val
        col = {}
        for x, val in alpha.items():
            val = red(val)
            if val != 0:
                col[cpos[x]] = val
        out_d.append(col)
        if want_f:
            out_f.append(fcol)
    return out_d, out_f


def _backward_rows(d_up, pairs_up, crit, nrows, ring):
    """Columns of g: path sums from each basis element to critical ones.

    ``d_up`` is the boundary one degree up, ``pairs_up`` its matching.
    """
    red = ring.reduce
    cpos = {x: n for n, x in enumerate(crit)}
    row_match = {u: (v, red(-ring.inverse(w))) for u, v, w in pairs_up}
    rank = matched_row_order(d_up, pairs_up) if pairs_up else {}
    phi = {}
    for u in sorted(row_match, key=rank.__getitem__, reverse=True):
        v, ni = row_match[u]
        acc = {}
        for x, val in d_up.col(v).items():
            if x == u:
                continue
            if x in cpos:
                p = cpos[x]
                acc[p] = acc.get(p, 0) + val
            elif x in row_match:
                for p, y in phi[x].items():
                    acc[p] = acc.get(p, 0) + val * y
        vec = {}
        for p, s in acc.items():
            s = red(s * ni)
            if s != 0:
                vec[p] = s
        phi[u] = vec
    one = ring.one
    cols = []
    for v in range(nrows):
        if v in cpos:
            cols.append({cpos[v]: one})
        elif v in phi:
            cols.append(dict(phi[v]))
        else:
            cols.append({})
    return SparseMatrix(len(crit), nrows, cols)


def reduce_once(
    C: ChainComplex,
    M,
    want_f: bool = True,
    want_g: bool = False,
    prune: bool = False,
    check: bool = True,
) -> ReductionResult:
    """One Morse reduction along ``M``; ``check`` validates the matching."""
    if check:
        validate_morse_matching(C, M)
    t0 = time.perf_counter()
    ring = C.ring
    N = C.top_degree
    part = index_partition(C, M)
    crit = part.critical
    work = prune_complex(C, M) if prune else C
    new_ranks = [len(c) for c in crit]
    mats = []
    fs = [] if want_f else None
    if want_f:
        one = ring.one
        fs.append(SparseMatrix(C.ranks[0], new_ranks[0], [{v: one} for v in crit[0]]))
    for k in range(1, N + 1):
        d = work.boundaries[k - 1]
        cols_d, cols_f = _forward_columns(d, M.get(k, []), crit[k - 1], crit[k], ring, want_f)
        mats.append(SparseMatrix(new_ranks[k - 1], new_ranks[k], cols_d))
        if want_f:
            fs.append(SparseMatrix(C.ranks[k], new_ranks[k], cols_f))
    gs = None
    if want_g:
        gs = []
        for k in range(N + 1):
            if k < N:
                d_up = work.boundaries[k]
                pairs_up = M.get(k + 1, [])
            else:
                d_up, pairs_up = SparseMatrix.zeros(C.ranks[N], 0), []
            gs.append(_backward_rows(d_up, pairs_up, crit[k], C.ranks[k], ring))
    reduced = ChainComplex(ring, new_ranks, mats)
    counts = [len(M.get(k, [])) for k in range(1, N + 1)]
    stats = PassStats(counts, new_ranks, [m.nnz for m in mats], time.perf_counter() - t0)
    return ReductionResult(
        reduced, fs, gs, passes=1, matched_counts=[counts], history=[stats], critical=crit
    )


def transform_row(d: SparseMatrix, pairs, u_crit: int, crit_cols, ring) -> dict:
    """Reduced-boundary row of a critical row by repeated row operations.

    While the row has a nonzero entry in a matched column, take the first
    such column ``v`` in elimination order (ascending index for steepness
    matchings), with matched entry ``w`` in row ``u``, and add ``-r[v]/w``
    times row ``u``. The result is restricted to the critical columns
    (``crit_cols``, reported by position). Independent of the path sums in
    :func:`reduce_once`, and must agree with them.
    """
    red = ring.reduce
    rows = d.rows
    col_match = {v: (u, ring.inverse(w)) for u, v, w in pairs}
    order = matched_col_order(d, pairs) if pairs else {}
    r = dict(rows[u_crit])
    heap = [(order[v], v) for v in r if v in col_match]
    heapq.heapify(heap)
    last = -1
    while heap:
        rk, v = heapq.heappop(heap)
        if v not in r:
            continue
        assert rk > last, "elimination order must strictly advance"
        last = rk
        u, winv = col_match[v]
        coef = red(-r[v] * winv)
        for y, val in rows[u].items():
            s = red(r.get(y, 0) + coef * val)
            if s == 0:
                r.pop(y, None)
            else:
                r[y] = s
                if y in col_match and y != v:
                    heapq.heappush(heap, (order[y], y))
        assert v not in r
    pos = {x: n for n, x in enumerate(crit_cols)}
    return {pos[y]: x for y, x in r.items() if y in pos}


def fallback_matching(C: ChainComplex) -> Matching:
    """A matching of single unit entries, used when no steep pivot exists.

    At most one edge per boundary, and boundaries sharing a degree never
    both contribute, so the matching is trivially acyclic.
    """
    M = Matching()
    unit = C.ring.is_unit
    taken_deg = set()
    for k, d in enumerate(C.boundaries, start=1):
        if (k - 1) in taken_deg:
            continue
        hit = None
        for j, c in enumerate(d.cols):
            for i in sorted(c):
                if unit(c[i]):
                    hit = (i, j, c[i])
                    break
            if hit:
                break
        if hit:
            M[k] = [hit]
            taken_deg.update((k - 1, k))
    return M


def reduce_fully(
    C: ChainComplex,
    reorder=None,
    want_f: bool = False,
    want_g: bool = False,
    max_passes: Optional[int] = None,
    prune: bool = False,
    callback=None,
) -> ReductionResult:
    """Reduce along steepness matchings until no unit entry is left.

    ``reorder`` is an optional :class:`~steepmorse.ordering.ReorderSchedule`
    applied before each pass. When the steepness matching is empty but some
    unit entry survives (possible for unlucky orders), a single-edge
    matching is used so the residual always consists of nonunits.
    """
    from .ordering import apply_schedule

    ring = C.ring
    one = ring.one
    f_acc = [SparseMatrix.identity(r, one) for r in C.ranks] if want_f else None
    g_acc = [SparseMatrix.identity(r, one) for r in C.ranks] if want_g else None
    history, counts = [], []
    passes = 0
    cur = C
    while max_passes is None or passes < max_passes:
        if reorder is not None and not reorder.is_none():
            cur, orders = apply_schedule(cur, reorder)
            if want_f:
                f_acc = [f.permute(col_order=o) for f, o in zip(f_acc, orders)]
            if want_g:
                g_acc = [g.permute(row_order=o) for g, o in zip(g_acc, orders)]
        M = steepness_matching(cur)
        fallback = False
        if M.is_empty():
            if not cur.has_unit_entry():
                break
            M = fallback_matching(cur)
            fallback = True
        res = reduce_once(cur, M, want_f=want_f, want_g=want_g, prune=prune, check=False)
        if want_f:
            f_acc = [a.matmul(b, ring) for a, b in zip(f_acc, res.f)]
        if want_g:
            g_acc = [b.matmul(a, ring) for a, b in zip(g_acc, res.g)]
        cur = res.reduced
        passes += 1
        stats = res.history[0]
        stats.fallback = fallback
        history.append(stats)
        counts.append(stats.matched)
        log.debug("pass %d: matched %s -> ranks %s", passes, stats.matched, stats.ranks)
        if callback is not None:
            callback(passes, stats, cur)
    return ReductionResult(cur, f_acc, g_acc, passes=passes, matched_counts=counts, history=history)
