"""CHC chain complex files, matching JSON and facet/graph text files.

CHC layout (1-based indices, values as decimal strings)::

    {"ring": "Z", "ranks": [4, 6],
     "boundaries": [{"k": 1, "entries": [[2, 1, "1"], ...]}]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import ChainComplex, RingSpec, SparseMatrix
from .errors import FormatError, RingError


def matrix_entries(m: SparseMatrix, ring: RingSpec) -> list:
    return [[i + 1, j + 1, ring.format(x)] for i, j, x in m.entries()]


def matrix_from_entries(nrows, ncols, entries, ring: RingSpec) -> SparseMatrix:
    try:
        triples = [(int(i) - 1, int(j) - 1, str(x)) for i, j, x in entries]
        return SparseMatrix.from_entries(nrows, ncols, triples, ring)
    except (ValueError, TypeError, IndexError, ZeroDivisionError) as exc:
        raise FormatError(f"bad matrix entries: {exc}") from exc


def complex_to_dict(C: ChainComplex) -> dict:
    return {
        "ring": str(C.ring),
        "ranks": list(C.ranks),
        "boundaries": [
            {"k": k, "entries": matrix_entries(d, C.ring)}
            for k, d in enumerate(C.boundaries, start=1)
        ],
    }


def complex_from_dict(data: dict, ring: RingSpec | None = None) -> ChainComplex:
    """Parse a CHC mapping; ``ring`` overrides the file's ring if given."""
    try:
        file_ring = RingSpec.parse(data["ring"])
        ranks = [int(r) for r in data["ranks"]]
        blocks = data.get("boundaries", [])
    except (KeyError, TypeError, RingError) as exc:
        raise FormatError(f"malformed CHC header: {exc}") from exc
    if any(r < 0 for r in ranks):
        raise FormatError("negative rank")
    ring = ring or file_ring
    given = {}
    for b in blocks:
        try:
            k = int(b["k"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError("boundary block without integer 'k'") from exc
        if not 1 <= k < len(ranks) or k in given:
            raise FormatError(f"bad or duplicate boundary index k={k}")
        # parse in the file ring, then move to the requested one
        m = matrix_from_entries(ranks[k - 1], ranks[k], b.get("entries", []), file_ring)
        if ring != file_ring:
            m = SparseMatrix.from_entries(
                m.nrows, m.ncols, ((i, j, x) for i, j, x in m.entries()), ring
            )
        given[k] = m
    mats = [given.get(k) or SparseMatrix.zeros(ranks[k - 1], ranks[k]) for k in range(1, len(ranks))]
    return ChainComplex(ring, ranks, mats)


def dumps_complex(C: ChainComplex) -> str:
    return json.dumps(complex_to_dict(C), separators=(",", ":"))


def loads_complex(text: str, ring: RingSpec | None = None) -> ChainComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not JSON: {exc}") from exc
    return complex_from_dict(data, ring)


def write_complex(C: ChainComplex, path) -> None:
    Path(path).write_text(dumps_complex(C) + "\n")


def read_complex(path, ring: RingSpec | None = None) -> ChainComplex:
    return loads_complex(Path(path).read_text(), ring)


def write_matrices(mats, ring: RingSpec, path, name="f") -> None:
    """Write a list of maps (e.g. accumulated f_k) in CHC entry-list form."""
    data = {
        "ring": str(ring),
        "name": name,
        "maps": [
            {"k": k, "shape": [m.nrows, m.ncols], "entries": matrix_entries(m, ring)}
            for k, m in enumerate(mats)
        ],
    }
    Path(path).write_text(json.dumps(data, separators=(",", ":")) + "\n")


def read_matrices(path):
    data = json.loads(Path(path).read_text())
    ring = RingSpec.parse(data["ring"])
    return [
        matrix_from_entries(b["shape"][0], b["shape"][1], b["entries"], ring) for b in data["maps"]
    ]


# matchings: [{"k": 1, "pairs": [[u, v, "w"], ...]}, ...]


def matching_to_json(matching, ring: RingSpec) -> list:
    return [
        {"k": k, "pairs": [[u + 1, v + 1, ring.format(w)] for u, v, w in pairs]}
        for k, pairs in sorted(matching.items())
    ]


def matching_from_json(data, ring: RingSpec) -> dict:
    out = {}
    try:
        for block in data:
            k = int(block["k"])
            out[k] = [(int(u) - 1, int(v) - 1, ring.coerce(str(w))) for u, v, w in block["pairs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matching JSON: {exc}") from exc
    return out


# facets / graphs


def _label_key(labels):
    if all(t.lstrip("-").isdigit() for t in labels):
        return lambda t: (int(t), t)
    return lambda t: t


def read_facets(path):
    """One facet per line, whitespace separated labels. Returns (labels, facets).

    Vertices are ordered by label (numerically when all labels are integers).
    """
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    labels = sorted({t for r in rows for t in r}, key=_label_key({t for r in rows for t in r}))
    index = {t: i for i, t in enumerate(labels)}
    return labels, [[index[t] for t in r] for r in rows]


def read_graph(path):
    """``u v`` per line. Returns (labels, edges) with 0-based endpoints."""
    labels, index, edges = [], {}, []
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) == 1:
            toks = toks * 2  # isolated vertex
        elif len(toks) != 2:
            raise FormatError(f"line {n}: expected 'u v'")
        ends = []
        for tok in toks:
            if tok not in index:
                index[tok] = len(labels)
                labels.append(tok)
            ends.append(index[tok])
        if ends[0] != ends[1]:
            edges.append(tuple(ends))
    return labels, edges
