"""Input coercion shared by the estimators and the command line."""

from __future__ import annotations

import os

from .core import ChainComplex, RingSpec, validate_complex
from .io import complex_from_dict, read_complex


def check_ring(ring) -> RingSpec | None:
    if ring is None or isinstance(ring, RingSpec):
        return ring
    return RingSpec.parse(str(ring))


def check_complex(X, ring=None, validate: bool = True) -> ChainComplex:
    """Accept a ChainComplex, a CHC mapping or a path to a CHC file.

    ``ring`` reinterprets the entries; ``validate`` checks d∘d = 0.
    """
    ring = check_ring(ring)
    if isinstance(X, ChainComplex):
        C = X if ring is None or ring == X.ring else X.change_ring(ring)
    elif isinstance(X, dict):
        C = complex_from_dict(X, ring)
    elif isinstance(X, (str, os.PathLike)):
        C = read_complex(X, ring)
    else:
        raise TypeError(f"expected a chain complex, mapping or path, got {type(X).__name__}")
    if validate:
        validate_complex(C)
    return C
