import itertools

import pytest

from helpers import RP2_D1, RP2_D2
from steepmorse import GF, QQ, ZZ, validate_complex
from steepmorse.errors import JacobiViolation
from steepmorse.fixtures import rp2, rp2_simplicial
from steepmorse.generators import (
    LieAlgebraSpec,
    SimplicialComplex,
    boundary_stats,
    chessboard_complex,
    chevalley_boundary,
    chevalley_complex,
    cycle_graph,
    general_linear,
    heisenberg,
    hypercube_graph,
    independence_complex,
    parse_graph,
    path_graph,
    simplicial_chain_complex,
    wedge_label,
)
from steepmorse.oracle import homology_via_snf
from steepmorse.torsion import integer_homology

def test_rp2_lex_matrices():
    C = rp2()
    assert C.ranks == [6, 15, 10]
    assert C.boundaries[0].to_dense() == RP2_D1
    assert C.boundaries[1].to_dense() == RP2_D2
    K = rp2_simplicial()
    assert [K.label(f) for f in K.faces(1)][:5] == ["ab", "ac", "ad", "ae", "af"]


def test_triangle_is_contractible():
    C = simplicial_chain_complex(SimplicialComplex.from_labels(["abc"]))
    assert C.ranks == [3, 3, 1]
    h = integer_homology(C)
    assert h.betti() == [1, 0, 0] and h.torsion() == [[], [], []]


def test_two_edges():
    C = simplicial_chain_complex(SimplicialComplex.from_labels(["ab", "cd"]))
    assert integer_homology(C).betti() == [2, 0]


def test_facets_pruned_to_antichain():
    K = SimplicialComplex(range(3), [[0, 1], [0, 1, 2], [2]])
    assert K.facets == [(0, 1, 2)]


def test_four_cycle_independence():
    K = independence_complex(cycle_graph(4))
    assert sorted(K.facets) == [(0, 2), (1, 3)]
    assert integer_homology(simplicial_chain_complex(K)).betti() == [2, 0]


def test_edgeless_graph_gives_simplex():
    K = independence_complex([], 5)
    assert K.facets == [(0, 1, 2, 3, 4)]
    assert K.f_vector() == [5, 10, 10, 5, 1]


def _brute_independent_sets(n, edges):
    E = {frozenset(e) for e in edges}
    out = []
    for r in range(1, n + 1):
        for s in itertools.combinations(range(n), r):
            if not any(frozenset(p) in E for p in itertools.combinations(s, 2)):
                out.append(s)
    return out


@pytest.mark.parametrize("graph", ["cycle:5", "path:6", "hypercube:3"])
def test_faces_are_independent_sets(graph):
    n, edges = parse_graph(graph)
    K = independence_complex(edges, n)
    faces = [f for level in K.levels() for f in level]
    assert sorted(faces) == sorted(_brute_independent_sets(n, edges))


def test_parse_graph_rejects():
    with pytest.raises(ValueError):
        parse_graph("star:4")
    with pytest.raises(ValueError):
        parse_graph("path:x")


@pytest.mark.parametrize("n", range(1, 10))
def test_path_independence_periodic(n):
    C = simplicial_chain_complex(independence_complex(path_graph(n), n))
    h = integer_homology(C)
    assert h.same_groups(homology_via_snf(C))
    reduced = h.betti()
    reduced[0] -= 1
    k, r = divmod(n, 3)
    expected = [0] * len(reduced)
    if r != 1:  # n = 3k+1 is contractible, otherwise a sphere
        expected[k - 1 if r == 0 else k] = 1
    assert reduced == expected and not any(h.torsion())


def test_one_row_board():
    K = chessboard_complex(1, 5)
    assert K.f_vector() == [5]
    assert integer_homology(simplicial_chain_complex(K)).betti() == [5]


def test_two_by_two_board():
    # only the two diagonals are non-attacking pairs
    K = chessboard_complex(2, 2)
    C = simplicial_chain_complex(K)
    n, attacks = 4, [(0, 1), (2, 3), (0, 2), (1, 3)]
    assert C.ranks == [4, 2]
    assert sorted(K.faces(1)) == [f for f in _brute_independent_sets(n, attacks) if len(f) == 2]
    assert integer_homology(C).betti() == [2, 0]


def test_heisenberg_one():
    L = heisenberg(1)
    C = chevalley_complex(L, QQ)
    assert C.ranks == [1, 3, 3, 1]
    validate_complex(C)
    assert homology_via_snf(C).betti() == [1, 2, 2, 1]
    assert wedge_label(L, 0b101) == "x1∧z"


def test_gl1_is_abelian():
    C = chevalley_complex(general_linear(1))
    assert all(d.is_zero() for d in C.boundaries)


@pytest.mark.parametrize("L", [heisenberg(2), heisenberg(3), general_linear(2)])
def test_chevalley_complexes_validate(L):
    C = chevalley_complex(L)
    validate_complex(C)
    assert C.ranks == [len(list(itertools.combinations(range(L.dim), k))) for k in range(L.dim + 1)]
    assert C.euler_characteristic() == 0
    assert chevalley_boundary(L, 2) == C.boundaries[1]


def test_gl2_bracket():
    L = general_linear(2)
    # [E12, E21] = E11 - E22
    assert L.bracket(1, 2) == {0: 1, 3: -1}


def test_jacobi_violation_detected():
    # [a,b]=c, [b,c]=a, [a,c]=a breaks Jacobi
    with pytest.raises(JacobiViolation):
        LieAlgebraSpec("bad", ["a", "b", "c"], {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})


def test_antisymmetry_normalized():
    L = LieAlgebraSpec("h", ["x", "y", "z"], {(1, 0): {2: -1}})
    assert L.brackets == {(0, 1): {2: 1}}
    with pytest.raises(JacobiViolation):
        LieAlgebraSpec("h", ["x", "y", "z"], {(1, 0): {2: 1}, (0, 1): {2: 1}})


def test_boundary_stats_small():
    K = independence_complex(hypercube_graph(3), 8)
    C = simplicial_chain_complex(K)
    s = boundary_stats(K, 1)
    assert s.shape == C.boundaries[0].shape and s.nnz == C.boundaries[0].nnz
    with pytest.raises(ValueError):
        boundary_stats(K, 0)


def test_generated_complexes_validate():
    for C in [
        simplicial_chain_complex(chessboard_complex(3, 4), GF(3)),
        simplicial_chain_complex(independence_complex(hypercube_graph(3), 8)),
        rp2(ZZ),
    ]:
        validate_complex(C)
