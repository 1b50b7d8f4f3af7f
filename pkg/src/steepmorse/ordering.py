"""Basis reordering to enlarge steepness matchings and limit fill-in.

Permutations use the convention ``order[new] = old``.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass

from .core import ChainComplex
from .errors import MatchingCycle

COL_KEYS = ("c1", "c2", "c3", "c4")
ROW_KEYS = ("r1", "r2", "r3", "r4")


@dataclass(frozen=True)
class ReorderSchedule:
    """What to permute before each reduction pass.

    ``mode`` is one of ``none``, ``cols``, ``rows``, ``both``. Row sorting
    visits boundaries ``N-a, N-a-b, N-a-2b, ...``.
    """

    mode: str = "none"
    a: int = 0
    b: int = 1
    col_keys: tuple = COL_KEYS
    row_keys: tuple = ROW_KEYS

    def __post_init__(self):
        if self.mode not in ("none", "cols", "rows", "both"):
            raise ValueError(f"unknown reorder mode {self.mode!r}")
        if self.a not in (0, 1):
            raise ValueError("a must be 0 or 1")
        if self.b < 1:
            raise ValueError("b must be positive")
        if not set(self.col_keys) <= set(COL_KEYS):
            raise ValueError(f"column keys must come from {COL_KEYS}")
        if not set(self.row_keys) <= set(ROW_KEYS):
            raise ValueError(f"row keys must come from {ROW_KEYS}")

    def is_none(self) -> bool:
        return self.mode == "none"

    @classmethod
    def parse(cls, text: str, keys: str | None = None) -> "ReorderSchedule":
        """Parse ``none | cols | rows:a,b | both:a,b`` plus an optional key list."""
        m = re.fullmatch(r"\s*(none|cols|rows|both)\s*(?::\s*(\d+)\s*,\s*(\d+))?\s*", text)
        if m is None:
            raise ValueError(f"bad reorder spec {text!r}")
        mode = m.group(1)
        a = int(m.group(2)) if m.group(2) else 0
        b = int(m.group(3)) if m.group(3) else 1
        col_keys, row_keys = COL_KEYS, ROW_KEYS
        if keys:
            ks = [k.strip() for k in keys.replace("/", ",").split(",") if k.strip()]
            ck = tuple(k for k in ks if k.startswith("c"))
            rk = tuple(k for k in ks if k.startswith("r"))
            if len(ck) + len(rk) != len(ks):
                raise ValueError(f"bad key list {keys!r}")
            col_keys = ck or col_keys
            row_keys = rk or row_keys
        return cls(mode, a, b, col_keys, row_keys)


def column_sort_key(d, v: int, ring) -> tuple:
    """``(c1, c2, c3, c4)`` of column ``v``; positions are 1-based.

    A zero column has no key (returns None); callers sort it last.
    """
    col = d.col(v)
    if not col:
        return None
    last = max(col)
    unit = ring.is_unit
    c1 = 0 if any(unit(x) for x in col.values()) else 1
    c4 = 0 if unit(col[last]) else 1
    return (c1, last + 1, len(col), c4)


def row_sort_key(d, u: int, ring) -> tuple:
    """``(r1, r2, r3, r4)`` of row ``u``; None for a zero row."""
    row = d.row(u)
    if not row:
        return None
    first = min(row)
    unit = ring.is_unit
    r1 = 1 if any(unit(x) for x in row.values()) else 0
    r4 = 1 if unit(row[first]) else 0
    return (r1, first + 1, -len(row), r4)


def _sorted_order(n, keyfun, names, allnames):
    idx = [allnames.index(k) for k in names]

    def key(i):
        full = keyfun(i)
        if full is None:
            return (1,)
        return (0,) + tuple(full[j] for j in idx)

    return sorted(range(n), key=key)  # stable


def _compose(first, second):
    """Apply ``first`` then ``second`` (both new->old)."""
    if first is None:
        return second
    if second is None:
        return first
    return [first[i] for i in second]


def order_columns(C: ChainComplex, keys=COL_KEYS):
    """Sort the columns of every boundary, lowest degree first.

    Returns ``(complex, orders)`` with ``orders[k]`` the permutation of the
    degree-k basis (None where untouched).
    """
    orders = [None] * len(C.ranks)
    cur = C
    ring = C.ring
    for k in range(1, C.top_degree + 1):
        d = cur.boundaries[k - 1]
        if d.nrows * d.ncols == 0 or d.is_zero():
            continue
        order = _sorted_order(d.ncols, lambda v: column_sort_key(d, v, ring), keys, COL_KEYS)
        if order == list(range(d.ncols)):
            continue
        perm = [None] * len(C.ranks)
        perm[k] = order
        cur = cur.permute(perm)
        orders[k] = _compose(orders[k], order)
    return cur, orders


def order_rows(C: ChainComplex, a: int = 0, b: int = 1, keys=ROW_KEYS):
    """Sort rows of boundaries ``N-a, N-a-b, ...`` (each permutes degree k-1)."""
    if a not in (0, 1) or b < 1:
        raise ValueError("need a in {0, 1} and b >= 1")
    orders = [None] * len(C.ranks)
    cur = C
    ring = C.ring
    k = C.top_degree - a
    while k >= 1:
        d = cur.boundaries[k - 1]
        if d.nrows * d.ncols and not d.is_zero():
            order = _sorted_order(d.nrows, lambda u: row_sort_key(d, u, ring), keys, ROW_KEYS)
            if order != list(range(d.nrows)):
                perm = [None] * len(C.ranks)
                perm[k - 1] = order
                cur = cur.permute(perm)
                orders[k - 1] = _compose(orders[k - 1], order)
        k -= b
    return cur, orders


def apply_schedule(C: ChainComplex, schedule: ReorderSchedule):
    """Apply a schedule once; returns ``(complex, orders)`` with full orders."""
    orders = [None] * len(C.ranks)
    cur = C
    if schedule.mode in ("cols", "both"):
        cur, o = order_columns(cur, schedule.col_keys)
        orders = [_compose(x, y) for x, y in zip(orders, o)]
    if schedule.mode in ("rows", "both"):
        cur, o = order_rows(cur, schedule.a, schedule.b, schedule.row_keys)
        orders = [_compose(x, y) for x, y in zip(orders, o)]
    full = [o if o is not None else list(range(n)) for o, n in zip(orders, C.ranks)]
    return cur, full


def extend_matching_to_order(C: ChainComplex, M) -> list:
    """Per-degree orders under which every pair of ``M`` is steepest.

    Zig-zag paths between two basis elements of the same degree take one
    step up and one step down, so the reachability order restricted to a
    degree is generated by two kinds of constraint: for a matched entry
    ``(u, v)``, every other row of column ``v`` goes before ``u`` and every
    other column of row ``u`` goes after ``v``. Each degree is sorted
    topologically, smallest index first, so an empty matching yields the
    identity.
    """
    before = [dict() for _ in C.ranks]  # before[deg][x] = elements that must precede x
    for k, pairs in M.items():
        d = C.boundaries[k - 1]
        rows = d.rows
        for u, v, _ in pairs:
            for x in d.col(v):
                if x != u:
                    before[k - 1].setdefault(u, set()).add(x)
            for y in rows[u]:
                if y != v:
                    before[k].setdefault(y, set()).add(v)
    orders = []
    for deg, n in enumerate(C.ranks):
        preds = before[deg]
        indeg = [0] * n
        succ = [[] for _ in range(n)]
        for x, ps in preds.items():
            indeg[x] = len(ps)
            for p in ps:
                succ[p].append(x)
        heap = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            i = heapq.heappop(heap)
            order.append(i)
            for x in succ[i]:
                indeg[x] -= 1
                if indeg[x] == 0:
                    heapq.heappush(heap, x)
        if len(order) != n:
            raise MatchingCycle(deg, "matching graph is not acyclic")
        orders.append(order)
    return orders


def relabel_matching(M, orders) -> dict:
    """Express ``M`` in the basis produced by ``C.permute(orders)``."""
    inv = []
    for o in orders:
        pos = [0] * len(o)
        for new, old in enumerate(o):
            pos[old] = new
        inv.append(pos)
    return {
        k: sorted((inv[k - 1][u], inv[k][v], w) for u, v, w in pairs) for k, pairs in M.items()
    }
