"""Shared builders and checks for the test suite."""

import random

from steepmorse import GF, QQ, ChainComplex, SparseMatrix
from steepmorse.generators import (
    random_simplicial_complex,
    random_torsion_complex,
    simplicial_chain_complex,
)
from steepmorse.matching import is_morse_matching, Matching


def simplicial_corpus(count, seed=7, max_vertices=7, **shape):
    """Random complexes; ``shape`` passes max_facets / max_size through."""
    rng = random.Random(seed)
    return [
        simplicial_chain_complex(random_simplicial_complex(rng, max_vertices=max_vertices, **shape))
        for _ in range(count)
    ]


def torsion_corpus(count, seed=11):
    rng = random.Random(seed)
    return [random_torsion_complex(rng) for _ in range(count)]


def scaled_copy(C, ring, seed=0):
    """Move C to a field and rescale bases by random units, so weights vary."""
    rng = random.Random(seed)
    D = C.change_ring(ring)
    scales = [[ring.coerce(rng.choice([1, 2, 3, 5, -1, -2])) for _ in range(r)] for r in D.ranks]
    scales = [[s if ring.is_unit(s) else ring.one for s in row] for row in scales]
    mats = []
    for k, d in enumerate(D.boundaries, start=1):
        lo, hi = scales[k - 1], scales[k]
        cols = [
            {i: ring.reduce(x * ring.inverse(lo[i]) * hi[j]) for i, x in c.items()}
            for j, c in enumerate(d.cols)
        ]
        mats.append(SparseMatrix(d.nrows, d.ncols, cols))
    return ChainComplex(ring, D.ranks, mats)


def check_chain_maps(C, res):
    """d f = f d', g d = d' g and g f = id for a (possibly iterated) reduction."""
    R = res.reduced
    ring = C.ring
    for k in range(1, C.top_degree + 1):
        if res.f is not None:
            assert C.boundary(k).matmul(res.f[k], ring) == res.f[k - 1].matmul(R.boundary(k), ring)
        if res.g is not None:
            assert res.g[k - 1].matmul(C.boundary(k), ring) == R.boundary(k).matmul(res.g[k], ring)
    if res.f is not None and res.g is not None:
        for k in range(C.top_degree + 1):
            assert res.g[k].matmul(res.f[k], ring) == SparseMatrix.identity(R.ranks[k], ring.one)


def random_morse_matching(C, rng):
    """Greedy: shuffle unit entries and keep those that stay a Morse matching."""
    cand = [
        (k, i, j, x)
        for k, d in enumerate(C.boundaries, start=1)
        for j, c in enumerate(d.cols)
        for i, x in c.items()
        if C.ring.is_unit(x)
    ]
    rng.shuffle(cand)
    M = Matching()
    for k, i, j, x in cand:
        M.setdefault(k, []).append((i, j, x))
        if not is_morse_matching(C, M):
            M[k].pop()
            if not M[k]:
                del M[k]
    return Matching({k: sorted(v) for k, v in M.items()})


def p_part(torsion, p):
    out = []
    for t in torsion:
        q = 1
        while t % p == 0:
            t //= p
            q *= p
        if q > 1:
            out.append(q)
    return sorted(out)


def primary_parts(torsion):
    """Prime-power decomposition of a list of cyclic orders."""
    out = []
    for t in torsion:
        q = 2
        while t > 1:
            e = 1
            while t % q == 0:
                t //= q
                e *= q
            if e > 1:
                out.append(e)
            q += 1
    return sorted(out)


# literal matrices of the shipped fixtures

# trefoil: columns of f_k and rows of g_k follow ascending critical indices
TREFOIL_F = {
    0: [[1, 0], [0, 1], [0, 0], [0, 0]],
    2: [[0, 0, 0], [-1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, -1], [0, 0, 1]]
    + [[0, 0, 0]] * 5,
    3: [[0, 0, 0], [-1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 0], [0, -1, 0], [0, 1, 0], [0, 0, 1]],
}
TREFOIL_G = {
    0: [[1, 0, 0, 0], [0, 1, -1, 0]],
    2: [
        [0, 0, 1, 0, 0, 0, 0, 0, 0, -1, -1, 0],
        [0, 0, 0, 1, 0, 0, 0, -1, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1, 0],
    ],
    3: [[0, 0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 0, 0, 1]],
}

# projective plane, faces in lexicographic order
RP2_D1 = [
    [-1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, -1, -1, -1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, -1, -1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, -1],
    [0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 1],
]
RP2_D2 = [
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
    [-1, 0, -1, 0, 0, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, -1, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, -1, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, -1, 0],
    [0, 0, 0, 1, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, -1],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
]


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []

FIELDS = [QQ, GF(2), GF(3), GF(5)]
PRIMES = [2, 3, 5, 7, 11, 13]

