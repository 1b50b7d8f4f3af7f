import pytest

from helpers import FIELDS, scaled_copy, simplicial_corpus, torsion_corpus
from steepmorse import (
    ZZ,
    ChainComplex,
    MatchingCycle,
    NonUnitWeight,
    SharedVertex,
    index_partition,
    is_morse_matching,
    steepness_matching,
    validate_morse_matching,
)
from steepmorse.fixtures import rp2, rp2_simplicial, trefoil
from steepmorse.matching import steepness_pairs


def one_based(M):
    return {k: [(u + 1, v + 1, w) for u, v, w in p] for k, p in M.items()}


def test_trefoil_steepness_matching():
    M = steepness_matching(trefoil())
    assert one_based(M) == {
        1: [(3, 1, 1), (4, 2, 1)],
        2: [(3, 1, -1), (4, 2, -1), (5, 5, -1), (6, 6, -1)],
        3: [(8, 4, 1), (9, 1, 1), (10, 2, 1), (11, 5, 1), (12, 6, 1)],
    }
    validate_morse_matching(trefoil(), M)


def test_no_units_no_matching():
    C = ChainComplex.from_dense(ZZ, [[[3, 4], [2, 3]]])
    assert steepness_matching(C).is_empty()


def test_swapped_pivot_example():
    C = ChainComplex.from_dense(ZZ, [[[0, 1], [1, 1]]])
    assert one_based(steepness_matching(C)) == {1: [(2, 1, 1)]}
    # both entries at once still form a Morse matching
    assert is_morse_matching(C, {1: [(1, 0, 1), (0, 1, 1)]})


def test_non_unit_weight_rejected():
    C = ChainComplex.from_dense(ZZ, [[[3, 4], [2, 3]]])
    with pytest.raises(NonUnitWeight):
        validate_morse_matching(C, {1: [(0, 0, 3)]})


def test_weight_must_equal_entry():
    C = ChainComplex.from_dense(ZZ, [[[1, 0], [0, 1]]])
    with pytest.raises(NonUnitWeight):
        validate_morse_matching(C, {1: [(0, 0, -1)]})
    with pytest.raises(NonUnitWeight):
        validate_morse_matching(C, {1: [(5, 0, 1)]})


def test_shared_vertex_rejected():
    C = ChainComplex.from_dense(ZZ, [[[1, 1]]])
    with pytest.raises(SharedVertex):
        validate_morse_matching(C, {1: [(0, 0, 1), (0, 1, 1)]})
    # a degree-1 cell matched both down and up
    C2 = ChainComplex.from_dense(ZZ, [[[1]], [[0]]])
    with pytest.raises(SharedVertex):
        validate_morse_matching(C2, {1: [(0, 0, 1)], 2: [(0, 0, 0)]})


def test_cycle_rejected():
    # all-ones 2x2: matching the diagonal closes a zig-zag loop
    C = ChainComplex.from_dense(ZZ, [[[1, 1], [1, 1]]])
    with pytest.raises(MatchingCycle) as err:
        validate_morse_matching(C, {1: [(0, 0, 1), (1, 1, 1)]})
    assert err.value.witness


def test_index_partition_trefoil():
    C = trefoil()
    P = index_partition(C, steepness_matching(C))
    assert [[i + 1 for i in c] for c in P.critical] == [[1, 2], [], [3, 4, 7], [3, 7, 8]]
    for k, r in enumerate(C.ranks):
        assert sum(P.sizes(k)) == r


def test_index_partition_empty():
    C = trefoil()
    P = index_partition(C, {})
    assert P.critical == [list(range(r)) for r in C.ranks]


def test_rp2_critical_cells():
    C = rp2()
    K = rp2_simplicial()
    P = index_partition(C, steepness_matching(C))
    names = [[K.label(K.faces(k)[i]) for i in P.critical[k]] for k in range(3)]
    assert names == [["a"], ["bc", "bf"], ["bcf", "def"]]


def _corpus():
    out = simplicial_corpus(60, seed=3) + [C for C, _ in torsion_corpus(40, seed=5)]
    out += [scaled_copy(C, R, seed=i) for i, C in enumerate(out[:40]) for R in FIELDS[:2]]
    return out


def test_steepness_matchings_are_morse():
    for C in _corpus():
        M = steepness_matching(C)
        validate_morse_matching(C, M)
        for k, pairs in M.items():
            d = C.boundaries[k - 1]
            for u, v, w in pairs:
                assert all(j >= v for j in d.row(u)), "entry left of pivot"
                assert all(i <= u for i in d.col(v)), "entry below pivot"
                assert C.ring.is_unit(w)
        P = index_partition(C, M)
        for k, r in enumerate(C.ranks):
            assert sum(P.sizes(k)) == r


def test_steepness_pairs_sorted_by_row():
    for C in simplicial_corpus(20, seed=9):
        for d in C.boundaries:
            pairs = steepness_pairs(d, C.ring.is_unit)
            assert [u for u, _, _ in pairs] == sorted(u for u, _, _ in pairs)
