"""Homology from reduced complexes.

* Over a field the fully reduced complex has zero boundaries, so its ranks
  are the Betti numbers and the columns of the accumulated ``f`` are
  homology generators.
* Over Z localized at ``p`` every residual entry is a multiple of ``p``;
  dividing out the largest common power and reducing again peels off the
  p-torsion layer by layer.
* Over Z the residual is small, and a dense Smith normal form finishes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import ZZ, ChainComplex, RingSpec, SparseMatrix, ZLoc
from .errors import ResidualTooLarge, RingError
from .oracle import smith_normal_form
from .reduction import ReductionResult, reduce_fully

DEFAULT_SNF_LIMIT = 2000


@dataclass
class DegreeHomology:
    degree: int
    free: int
    torsion: list = field(default_factory=list)
    generators: Optional[list] = None  # free part, sparse chains in the input basis
    torsion_generators: Optional[list] = None  # aligned with ``torsion``

    def group(self, ring: RingSpec) -> str:
        sym = {"Z": "Z", "Q": "Q", "GF": f"GF({ring.p})", "ZLoc": f"Z_({ring.p})"}[ring.kind]
        parts = []
        if self.free == 1:
            parts.append(sym)
        elif self.free > 1:
            parts.append(f"{sym}^{self.free}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"


@dataclass
class HomologyResult:
    ring: RingSpec
    degrees: list
    reduction: Optional[ReductionResult] = None

    def betti(self) -> list:
        return [d.free for d in self.degrees]

    def torsion(self) -> list:
        return [sorted(d.torsion) for d in self.degrees]

    def __getitem__(self, k) -> DegreeHomology:
        return self.degrees[k]

    def same_groups(self, other: "HomologyResult") -> bool:
        return self.betti() == other.betti() and self.torsion() == other.torsion()

    def summary(self) -> str:
        return ", ".join(f"H{d.degree}={d.group(self.ring)}" for d in self.degrees)

    def text(self) -> str:
        return "\n".join(f"H_{d.degree} = {d.group(self.ring)}" for d in self.degrees)

    def to_json(self) -> list:
        fmt = self.ring.format
        out = []
        for d in self.degrees:
            item = {"k": d.degree, "free": d.free, "torsion": [str(t) for t in d.torsion]}
            if d.generators is not None:
                gens = [
                    {"coeffs": [[i + 1, fmt(x)] for i, x in sorted(g.items())]}
                    for g in d.generators
                ]
                for t, g in zip(d.torsion, d.torsion_generators or []):
                    gens.append(
                        {"coeffs": [[i + 1, fmt(x)] for i, x in sorted(g.items())], "order": str(t)}
                    )
                item["generators"] = gens
            out.append(item)
        return out


def homology_over_field(
    C: ChainComplex, want_generators: bool = False, reorder=None
) -> HomologyResult:
    if not C.ring.is_field:
        raise RingError(f"{C.ring} is not a field")
    res = reduce_fully(C, reorder=reorder, want_f=want_generators)
    R = res.reduced
    assert R.is_zero(), "residual over a field must vanish"
    degrees = []
    for k, r in enumerate(R.ranks):
        gens = None
        if want_generators:
            gens = [dict(c) for c in res.f[k].cols]
        degrees.append(DegreeHomology(k, r, [], gens))
    return HomologyResult(C.ring, degrees, res)


def _divide_complex(C: ChainComplex, q) -> ChainComplex:
    mats = [SparseMatrix(d.nrows, d.ncols, [{i: x / q for i, x in c.items()} for c in d.cols])
            for d in C.boundaries]
    return ChainComplex(C.ring, C.ranks, mats)


def p_local_homology(
    C: ChainComplex, p: int, want_generators: bool = False, reorder=None
) -> HomologyResult:
    """Free rank and p-torsion of ``H_*(C)`` for an integral (or p-local) input.

    Matched pairs in the k-th boundary while the cumulative divided-out
    exponent is ``e > 0`` each contribute a ``Z/p^e`` summand to degree k-1.
    Generators are reported for the free part only.
    """
    ring = ZLoc(p)
    cur = C if C.ring == ring else C.change_ring(ring)
    N = cur.top_degree
    exponent = 0
    torsion = [[] for _ in range(N + 1)]
    f_acc = None
    phases = []
    while True:
        res = reduce_fully(cur, reorder=reorder, want_f=want_generators)
        if want_generators:
            f_acc = res.f if f_acc is None else [a.matmul(b, ring) for a, b in zip(f_acc, res.f)]
        if exponent > 0:
            for counts in res.matched_counts:
                for k, m in enumerate(counts, start=1):
                    torsion[k - 1] += [p**exponent] * m
        phases.append((exponent, res))
        cur = res.reduced
        if cur.is_zero():
            break
        vals = [ring.valuation(x) for d in cur.boundaries for c in d.cols for x in c.values()]
        a = min(vals)
        assert a >= 1, "residual entries must all be multiples of p"
        exponent += a
        cur = _divide_complex(cur, p**a)
    degrees = []
    for k, r in enumerate(cur.ranks):
        gens = [dict(c) for c in f_acc[k].cols] if want_generators else None
        degrees.append(DegreeHomology(k, r, sorted(torsion[k]), gens))
    summary = ReductionResult(
        cur,
        f_acc,
        passes=sum(r.passes for _, r in phases),
        matched_counts=[c for _, r in phases for c in r.matched_counts],
        history=[h for _, r in phases for h in r.history],
    )
    return HomologyResult(ring, degrees, summary)


def _support(M: SparseMatrix):
    rows = sorted({i for c in M.cols for i in c})
    cols = [j for j, c in enumerate(M.cols) if c]
    return rows, cols


def _dense(M: SparseMatrix, rows, cols):
    pos = {r: n for n, r in enumerate(rows)}
    out = [[0] * len(cols) for _ in rows]
    for n, j in enumerate(cols):
        for i, x in M.col(j).items():
            out[pos[i]][n] = int(x)
    return out


def _check_size(M: SparseMatrix, rows, cols, limit):
    if len(rows) > limit or len(cols) > limit:
        raise ResidualTooLarge((len(rows), len(cols)), limit)


def residual_homology(R: ChainComplex, want_generators=False, snf_limit=DEFAULT_SNF_LIMIT):
    """Integral homology of a (small) complex by Smith normal form.

    Returns per-degree ``(free, torsion, free_gens, torsion_gens)`` where the
    generators are sparse chains in the basis of ``R``.
    """
    N = R.top_degree
    out = []
    snfs = {}
    ranks = [0] * (N + 2)
    for k in range(1, N + 1):
        d = R.boundaries[k - 1]
        rows, cols = _support(d)
        if not cols:
            snfs[k] = (rows, cols, None)
            continue
        _check_size(d, rows, cols, snf_limit)
        s = smith_normal_form(_dense(d, rows, cols), transforms=want_generators)
        snfs[k] = (rows, cols, s)
        ranks[k] = s.rank
    for k in range(N + 1):
        n = R.ranks[k]
        free = n - ranks[k] - ranks[k + 1]
        tors, tgens, fgens = [], [], []
        up = snfs.get(k + 1)
        if up is not None and up[2] is not None:
            rows_b, _, s = up
            for i, dv in enumerate(s.diagonal):
                if dv > 1:
                    tors.append(dv)
                    if want_generators:
                        tgens.append(
                            {rows_b[r]: s.U_inv[r][i] for r in range(len(rows_b)) if s.U_inv[r][i]}
                        )
        if want_generators:
            fgens = _free_generators(R, k, snfs)
            assert len(fgens) == free
        out.append((free, tors, fgens if want_generators else None, tgens if want_generators else None))
    return out


def _free_generators(R, k, snfs):
    """Cycles completing the boundaries of degree k to a basis of ker d_k mod torsion."""
    n = R.ranks[k]
    # candidate basis of C_k adapted to im d_{k+1}
    basis = []
    up = snfs.get(k + 1)
    in_b = set()
    if up is not None and up[2] is not None:
        rows_b, _, s = up
        in_b = set(rows_b)
        r = s.rank
        m = len(rows_b)
        for i in range(r, m):
            basis.append({rows_b[t]: s.U_inv[t][i] for t in range(m) if s.U_inv[t][i]})
    basis += [{j: 1} for j in range(n) if j not in in_b]
    if k == 0 or k > len(R.boundaries):
        return basis
    A = R.boundaries[k - 1]
    images = [A.apply(v) for v in basis]
    gens = [v for v, im in zip(basis, images) if not im]
    moving = [(v, im) for v, im in zip(basis, images) if im]
    if not moving:
        return gens
    rows = sorted({i for _, im in moving for i in im})
    pos = {r: t for t, r in enumerate(rows)}
    X = [[0] * len(moving) for _ in rows]
    for c, (_, im) in enumerate(moving):
        for i, x in im.items():
            X[pos[i]][c] = int(x)
    s = smith_normal_form(X, transforms=True)
    for c in range(s.rank, len(moving)):
        vec = {}
        for t, (v, _) in enumerate(moving):
            q = s.V[t][c]
            if q:
                for i, x in v.items():
                    vec[i] = vec.get(i, 0) + q * x
        gens.append({i: x for i, x in vec.items() if x})
    return gens


def integer_homology(
    C: ChainComplex,
    want_generators: bool = False,
    reorder=None,
    snf_limit: int = DEFAULT_SNF_LIMIT,
) -> HomologyResult:
    """Exact integral homology: full reduction, then SNF of the residual."""
    if C.ring != ZZ:
        raise RingError(f"integer homology needs a complex over Z, got {C.ring}")
    res = reduce_fully(C, reorder=reorder, want_f=want_generators)
    R = res.reduced
    parts = residual_homology(R, want_generators, snf_limit)
    degrees = []
    for k, (free, tors, fg, tg) in enumerate(parts):
        if want_generators:
            fk = res.f[k]
            fg = [fk.apply(v, ZZ) for v in fg]
            tg = [fk.apply(v, ZZ) for v in tg]
        degrees.append(DegreeHomology(k, free, sorted(tors), fg, tg))
        if want_generators:
            # keep torsion generators aligned with the sorted torsion list
            order = sorted(range(len(tors)), key=lambda i: tors[i])
            degrees[-1].torsion_generators = [tg[i] for i in order]
    return HomologyResult(ZZ, degrees, res)


def homology(C: ChainComplex, want_generators: bool = False, reorder=None, **kw) -> HomologyResult:
    """Dispatch on the complex's ring."""
    kind = C.ring.kind
    if kind in ("Q", "GF"):
        return homology_over_field(C, want_generators, reorder)
    if kind == "ZLoc":
        return p_local_homology(C, C.ring.p, want_generators, reorder)
    return integer_homology(C, want_generators, reorder, **kw)


def as_fraction(x):
    return Fraction(x)
