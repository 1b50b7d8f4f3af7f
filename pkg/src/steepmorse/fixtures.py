"""Small complexes shipped with the package."""

from __future__ import annotations

from importlib import resources

from .core import ZZ, ChainComplex, RingSpec
from .generators import SimplicialComplex, simplicial_chain_complex
from .io import loads_complex

RP2_FACETS = ["abd", "abe", "acd", "acf", "aef", "bce", "bcf", "bdf", "cde", "def"]
# vertex order under which the default steepness matching leaves 3 critical cells
RP2_ALT_VERTICES = ["a", "b", "d", "c", "e", "f"]


def data_path(name: str):
    return resources.files("steepmorse") / "data" / name


def trefoil(ring: RingSpec | None = None) -> ChainComplex:
    """Khovanov complex of the trefoil (ranks 4, 6, 12, 8)."""
    return loads_complex(data_path("trefoil.chc").read_text(), ring)


def rp2_simplicial() -> SimplicialComplex:
    return SimplicialComplex.from_labels([list(f) for f in RP2_FACETS])


def rp2(ring: RingSpec = ZZ) -> ChainComplex:
    """The 6-vertex projective plane, faces in lexicographic order."""
    return simplicial_chain_complex(rp2_simplicial(), ring)


def rp2_alternate(ring: RingSpec = ZZ) -> ChainComplex:
    """Same triangulation with vertices ordered a < b < d < c < e < f.

    Faces keep their alphabetical orientation; only the basis order changes.
    """
    K = rp2_simplicial()
    C = simplicial_chain_complex(K, ring)
    rank = {v: i for i, v in enumerate(RP2_ALT_VERTICES)}
    orders = []
    for k in range(K.dimension + 1):
        faces = K.faces(k)
        key = lambda i: tuple(sorted(rank[K.vertices[v]] for v in faces[i]))
        orders.append(sorted(range(len(faces)), key=key))
    return C.permute(orders)
