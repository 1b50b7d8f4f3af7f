import random

import pytest

from helpers import (
    FIELDS,
    TREFOIL_F,
    TREFOIL_G,
    check_chain_maps,
    random_morse_matching,
    scaled_copy,
    simplicial_corpus,
    torsion_corpus,
)
from steepmorse import (
    GF,
    ZZ,
    ChainComplex,
    SparseMatrix,
    ZLoc,
    index_partition,
    reduce_fully,
    reduce_once,
    steepness_matching,
    transform_row,
    validate_complex,
)
from steepmorse.errors import InvalidMatching
from steepmorse.fixtures import rp2, rp2_alternate, trefoil
from steepmorse.oracle import brute_force_reduce, homology_via_snf, zigzag_paths
from steepmorse.reduction import fallback_matching, prune_complex


def dense(m):
    return m.to_dense()


def test_trefoil_single_pass():
    C = trefoil()
    r = reduce_once(C, steepness_matching(C), want_f=True, want_g=True)
    assert r.reduced.ranks == [2, 0, 3, 3]
    assert dense(r.reduced.boundaries[2]) == [[-1, 0, 0], [0, 2, 0], [1, 0, 0]]
    for k, rows in TREFOIL_F.items():
        assert dense(r.f[k]) == rows
    for k, rows in TREFOIL_G.items():
        assert dense(r.g[k]) == rows
    assert r.f[1].shape == (6, 0) and r.g[1].shape == (0, 6)
    check_chain_maps(C, r)


def test_trefoil_path_weights():
    C = trefoil()
    M = steepness_matching(C)

    def weights(col, row):
        return sorted(w for kind, x, w in zigzag_paths(C, M, 3, col) if kind == "row" and x == row)

    # e_{3,3} -> e_{2,10} <- e_{3,2} -> e_{2,3}: 1 * (-1/1) * 1
    assert weights(2, 2) == [-1]
    # e_{3,7} reaches e_{2,4} directly and by a length-5 path of weight 1
    assert weights(6, 3) == [1, 1]


def test_empty_matching_is_identity():
    C = trefoil()
    r = reduce_once(C, {}, want_f=True, want_g=True)
    assert r.reduced == C
    for k, n in enumerate(C.ranks):
        assert r.f[k] == SparseMatrix.identity(n) == r.g[k]


def test_invalid_matching_propagates():
    C = ChainComplex.from_dense(ZZ, [[[2]]])
    with pytest.raises(InvalidMatching):
        reduce_once(C, {1: [(0, 0, 2)]})


def test_trefoil_full_reduction():
    r = reduce_fully(trefoil(), want_f=True, want_g=True)
    assert r.reduced.ranks == [2, 0, 2, 2]
    assert dense(r.reduced.boundaries[2]) == [[0, 0], [2, 0]]
    assert r.reduced.boundaries[0].is_zero() and r.reduced.boundaries[1].is_zero()
    assert r.passes == 2
    check_chain_maps(trefoil(), r)


def test_rp2_second_ordering():
    r = reduce_fully(rp2_alternate())
    assert r.reduced.ranks == [1, 1, 1]
    assert dense(r.reduced.boundaries[0]) == [[0]]
    assert dense(r.reduced.boundaries[1]) == [[-2]]


def test_rp2_first_ordering_one_pass():
    C = rp2()
    r = reduce_once(C, steepness_matching(C))
    assert dense(r.reduced.boundaries[0]) == [[0, 0]]
    assert dense(r.reduced.boundaries[1]) == [[1, -1], [-1, -1]]


@pytest.mark.parametrize("ring", FIELDS + [ZLoc(3)])
def test_field_reduction_vanishes(ring):
    for C in simplicial_corpus(15, seed=21) + [trefoil(), rp2()]:
        r = reduce_fully(C.change_ring(ring))
        if ring.is_field:
            assert r.reduced.is_zero()
        assert not r.reduced.has_unit_entry()


def test_trefoil_over_gf2():
    # Z/2 torsion in degree 2 adds a Tor class in degree 3
    r = reduce_fully(trefoil(GF(2)))
    assert r.reduced.ranks == [2, 0, 2, 2] and r.reduced.is_zero()
    assert homology_via_snf(trefoil(GF(2))).betti() == [2, 0, 2, 2]
    assert sum((-1) ** k * b for k, b in enumerate(r.reduced.ranks)) == 2


def test_zero_complex_untouched():
    C = ChainComplex(ZZ, [2, 3], [SparseMatrix.zeros(2, 3)])
    r = reduce_fully(C, want_f=True)
    assert r.passes == 0 and r.reduced == C


# invariants on a random corpus


def corpus():
    rng = random.Random(4)
    out = [trefoil(), rp2(), rp2_alternate()]
    out += simplicial_corpus(40, seed=17)
    out += [C for C, _ in torsion_corpus(40, seed=23)]
    extra = []
    for i, C in enumerate(out[:30]):
        extra.append(scaled_copy(C, rng.choice(FIELDS), seed=i))
        extra.append(C.change_ring(ZLoc(2)))
    return out + extra


CORPUS = corpus()


def test_single_pass_invariants():
    for C in CORPUS:
        M = steepness_matching(C)
        r = reduce_once(C, M, want_f=True, want_g=True)
        validate_complex(r.reduced)
        check_chain_maps(C, r)
        assert r.reduced.euler_characteristic() == C.euler_characteristic()
        pr = reduce_once(C, M, want_f=True, want_g=True, prune=True)
        assert (pr.reduced, pr.f, pr.g) == (r.reduced, r.f, r.g)


def test_iterated_invariants():
    for C in CORPUS:
        r = reduce_fully(C, want_f=True, want_g=True)
        check_chain_maps(C, r)
        assert r.reduced.euler_characteristic() == C.euler_characteristic()
        assert not r.reduced.has_unit_entry()
        prev = C.ranks
        for h in r.history:
            assert all(a <= b for a, b in zip(h.ranks, prev))
            prev = h.ranks


def test_matches_literal_path_sums():
    for C in CORPUS[:60]:
        M = steepness_matching(C)
        r = reduce_once(C, M, want_f=True, want_g=True)
        red, fs, gs = brute_force_reduce(C, M)
        assert (red, fs, gs) == (r.reduced, r.f, r.g)


def test_random_morse_matchings_reduce_consistently():
    rng = random.Random(8)
    for C in CORPUS[:50]:
        M = random_morse_matching(C, rng)
        r = reduce_once(C, M, want_f=True, want_g=True)
        validate_complex(r.reduced)
        check_chain_maps(C, r)
        red, fs, gs = brute_force_reduce(C, M)
        assert (red, fs, gs) == (r.reduced, r.f, r.g)


def test_row_operations_agree_with_path_sums():
    count = 0
    for C in CORPUS:
        M = steepness_matching(C)
        r = reduce_once(C, M)
        part = index_partition(C, M)
        for k in range(1, C.top_degree + 1):
            d = C.boundaries[k - 1]
            dd = r.reduced.boundaries[k - 1]
            for pos, u in enumerate(part.critical[k - 1]):
                row = transform_row(d, M.get(k, []), u, part.critical[k], C.ring)
                assert row == dd.row(pos)
                count += 1
    assert count > 100


def test_transform_row_trefoil_middle_row():
    C = trefoil()
    M = steepness_matching(C)
    crit = index_partition(C, M).critical
    row = transform_row(C.boundaries[2], M[3], 3, crit[3], ZZ)  # e_{2,4}
    assert row == {1: 2}


def test_transform_row_already_critical():
    d = SparseMatrix.from_dense([[1, 0, 5], [0, 1, 0]], ZZ)
    M = [(1, 1, 1)]
    assert transform_row(d, M, 0, [0, 2], ZZ) == {0: 1, 1: 5}


def test_fallback_when_no_steep_pivot():
    # the unit at (1, 1) is never steepest and the steep entries are all 2
    C = ChainComplex.from_dense(ZZ, [[[1, 2], [2, 0]]])
    assert steepness_matching(C).is_empty()
    M = fallback_matching(C)
    assert M.size() == 1
    r = reduce_fully(C, want_f=True, want_g=True)
    assert r.history[0].fallback
    assert r.reduced.ranks == [1, 1] and r.reduced.boundaries[0].to_dense() == [[-4]]
    check_chain_maps(C, r)


def test_pruning_removes_dead_entries():
    C = trefoil()
    M = steepness_matching(C)
    P = prune_complex(C, M)
    assert P.nnz < C.nnz
