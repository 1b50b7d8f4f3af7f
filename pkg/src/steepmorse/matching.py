"""Steepness matchings and Morse matching validation.

A matching maps a degree ``k`` to a list of ``(u, v, w)`` triples, 0-based:
``u`` is a row of the k-th boundary, ``v`` a column and ``w`` the entry.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .core import ChainComplex
from .errors import MatchingCycle, NonUnitWeight, SharedVertex


class Matching(dict):
    """``{k: [(u, v, w), ...]}`` with a few conveniences."""

    def pairs(self, k: int) -> list:
        return self.get(k, [])

    def size(self) -> int:
        return sum(len(p) for p in self.values())

    def is_empty(self) -> bool:
        return self.size() == 0

    def counts(self, top: int) -> list:
        """``[m_1, ..., m_top]``."""
        return [len(self.pairs(k)) for k in range(1, top + 1)]


def steepness_pairs(d, is_unit) -> list:
    """Pivots of one matrix: unit entries with zeros left and below."""
    last_in_col = [max(c) if c else -1 for c in d.cols]
    out = []
    for u, r in enumerate(d.rows):
        if not r:
            continue
        v = min(r)
        if last_in_col[v] == u and is_unit(r[v]):
            out.append((u, v, r[v]))
    return out


def steepness_matching(C: ChainComplex) -> Matching:
    """The steepness matching for the current basis order of ``C``."""
    unit = C.ring.is_unit
    M = Matching()
    for k, d in enumerate(C.boundaries, start=1):
        pairs = steepness_pairs(d, unit)
        if pairs:
            M[k] = pairs
    return M


def _matched_graph_cycle(d, pairs):
    """Topologically sort the zig-zag digraph of one degree pair.

    Vertices are rows ``('r', u)`` and columns ``('c', v)``. Unmatched
    entries give edges column -> row, matched ones row -> column. Returns a
    cycle witness (list of 1-based labels) or None.
    """
    row_to_col = {u: v for u, v, _ in pairs}
    # Only matched rows have out-edges to columns, so a cycle must pass
    # through matched rows; restrict to the induced row graph u -> x.
    succ = {}
    for u, v in row_to_col.items():
        succ[u] = [x for x in d.col(v) if x != u and x in row_to_col]
    indeg = {u: 0 for u in row_to_col}
    for u, xs in succ.items():
        for x in xs:
            indeg[x] += 1
    queue = [u for u, n in indeg.items() if n == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for x in succ[u]:
            indeg[x] -= 1
            if indeg[x] == 0:
                queue.append(x)
    if seen == len(indeg):
        return None
    # walk inside the leftover subgraph to extract a cycle
    left = {u for u, n in indeg.items() if n > 0}
    u = next(iter(left))
    path, pos = [], {}
    while u not in pos:
        pos[u] = len(path)
        path.append(u)
        u = next(x for x in succ[u] if x in left)
    cyc = path[pos[u]:]
    witness = []
    for x in cyc:
        witness += [f"row {x + 1}", f"col {row_to_col[x] + 1}"]
    return witness


def validate_morse_matching(C: ChainComplex, M) -> None:
    """Raise ``SharedVertex``, ``NonUnitWeight`` or ``MatchingCycle``."""
    used = {}
    for k in sorted(M):
        for u, v, w in M[k]:
            for deg, idx in ((k - 1, u), (k, v)):
                if (deg, idx) in used:
                    raise SharedVertex(k, f"e_{deg},{idx + 1}")
                used[(deg, idx)] = (u, v)
    ring = C.ring
    for k in sorted(M):
        if not 1 <= k <= len(C.boundaries):
            raise NonUnitWeight(k, None, None, "degree out of range")
        d = C.boundaries[k - 1]
        for u, v, w in M[k]:
            if not (0 <= u < d.nrows and 0 <= v < d.ncols):
                raise NonUnitWeight(k, u + 1, v + 1, "index out of range")
            if d[u, v] != w or w == 0:
                raise NonUnitWeight(k, u + 1, v + 1, "weight differs from matrix entry")
            if not ring.is_unit(w):
                raise NonUnitWeight(k, u + 1, v + 1)
        witness = _matched_graph_cycle(d, M[k])
        if witness is not None:
            raise MatchingCycle(k, witness)


def is_morse_matching(C: ChainComplex, M) -> bool:
    try:
        validate_morse_matching(C, M)
    except (SharedVertex, NonUnitWeight, MatchingCycle):
        return False
    return True


@dataclass
class IndexPartition:
    """Per degree: matched columns (plus), matched rows (minus), critical."""

    plus: list
    minus: list
    critical: list

    def sizes(self, k):
        return len(self.plus[k]), len(self.minus[k]), len(self.critical[k])


def index_partition(C: ChainComplex, M) -> IndexPartition:
    N = C.top_degree
    plus = [set() for _ in range(N + 1)]
    minus = [set() for _ in range(N + 1)]
    for k, pairs in M.items():
        for u, v, _ in pairs:
            plus[k].add(v)
            minus[k - 1].add(u)
    critical = [
        [i for i in range(C.ranks[k]) if i not in plus[k] and i not in minus[k]]
        for k in range(N + 1)
    ]
    return IndexPartition([sorted(s) for s in plus], [sorted(s) for s in minus], critical)


def matched_row_order(d, pairs) -> dict:
    """Rank matched rows so every zig-zag step goes to a larger rank.

    Edge ``u -> x`` whenever ``x`` is another nonzero row in the column
    matched with ``u``. Ties are broken by descending row index, which is
    already a topological order for steepness matchings.
    """
    row_to_col = {u: v for u, v, _ in pairs}
    succ = {u: [x for x in d.col(v) if x != u and x in row_to_col] for u, v in row_to_col.items()}
    indeg = dict.fromkeys(row_to_col, 0)
    for xs in succ.values():
        for x in xs:
            indeg[x] += 1
    heap = [-u for u, n in indeg.items() if n == 0]
    heapq.heapify(heap)
    rank = {}
    while heap:
        u = -heapq.heappop(heap)
        rank[u] = len(rank)
        for x in succ[u]:
            indeg[x] -= 1
            if indeg[x] == 0:
                heapq.heappush(heap, -x)
    if len(rank) != len(row_to_col):
        raise MatchingCycle(None, "matched rows")
    return rank


def matched_col_order(d, pairs) -> dict:
    """Rank matched columns for row elimination (ties: ascending index).

    Edge ``v -> y`` whenever ``y`` is another nonzero column in the row
    matched with ``v``.
    """
    col_to_row = {v: u for u, v, _ in pairs}
    rows = d.rows
    succ = {v: [y for y in rows[u] if y != v and y in col_to_row] for v, u in col_to_row.items()}
    indeg = dict.fromkeys(col_to_row, 0)
    for ys in succ.values():
        for y in ys:
            indeg[y] += 1
    heap = [v for v, n in indeg.items() if n == 0]
    heapq.heapify(heap)
    rank = {}
    while heap:
        v = heapq.heappop(heap)
        rank[v] = len(rank)
        for y in succ[v]:
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(heap, y)
    if len(rank) != len(col_to_row):
        raise MatchingCycle(None, "matched columns")
    return rank
