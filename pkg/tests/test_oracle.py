import random

import pytest

from helpers import simplicial_corpus, torsion_corpus
from steepmorse import QQ, ZZ, ChainComplex, SparseMatrix
from steepmorse.errors import TooLarge
from steepmorse.fixtures import rp2, trefoil
from steepmorse.oracle import homology_via_snf, rank_over_field, smith_normal_form


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(A):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    A = [row[:] for row in A]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1] if n else 1


@pytest.mark.parametrize(
    "A,diag",
    [([[3, 4], [2, 3]], [1, 1]), ([[1]], [1]), ([[2, 4], [2, 2]], [2, 2]), ([[0, 0]], [])],
)
def test_snf_examples(A, diag):
    assert smith_normal_form(A).diagonal == diag


def test_snf_transforms_on_random_matrices():
    rng = random.Random(5)
    for _ in range(150):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.choice([0, 0, 0, 1, -1, 2, 3, -4, 6]) for _ in range(n)] for _ in range(m)]
        s = smith_normal_form(A, transforms=True)
        D = matmul(matmul(s.U, A), s.V)
        for i in range(m):
            for j in range(n):
                want = s.diagonal[i] if i == j and i < s.rank else 0
                assert D[i][j] == want
        assert all(b % a == 0 for a, b in zip(s.diagonal, s.diagonal[1:]))
        assert all(x > 0 for x in s.diagonal)
        assert det(s.U) in (1, -1) and det(s.V) in (1, -1)
        identity = [[int(i == j) for j in range(m)] for i in range(m)]
        assert matmul(s.U, s.U_inv) == identity


def test_known_homology():
    t = homology_via_snf(trefoil())
    assert t.betti() == [2, 0, 1, 1] and t.torsion() == [[], [], [2], []]
    r = homology_via_snf(rp2())
    assert r.betti() == [1, 0, 0] and r.torsion() == [[], [2], []]


def test_betti_agrees_with_rational_rank():
    corpus = simplicial_corpus(40, seed=71) + [C for C, _ in torsion_corpus(30, seed=72)]
    for C in corpus:
        # rank of the boundary leaving degree k, and of the one entering it
        out = [0] + [rank_over_field(d, QQ) for d in C.change_ring(QQ).boundaries]
        into = out[1:] + [0]
        betti = [n - a - b for n, a, b in zip(C.ranks, out, into)]
        assert homology_via_snf(C).betti() == betti
        assert homology_via_snf(C.change_ring(QQ)).betti() == betti


def test_cap():
    C = ChainComplex(ZZ, [4, 4], [SparseMatrix.zeros(4, 4)])
    with pytest.raises(TooLarge):
        homology_via_snf(C, cap=5)
