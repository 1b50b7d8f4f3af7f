"""Command line: ``steepmorse gen|validate|reorder|reduce|homology|bench``.

Exit status is 0 on success, 1 when an internal invariant fails and 2 for
bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import generators as gen
from .core import ChainComplex, RingSpec, find_violation, matrix_density
from .errors import (
    ComplexError,
    FormatError,
    InvalidMatching,
    ResidualTooLarge,
    RingError,
    SteepMorseError,
    TooLarge,
)
from .fixtures import rp2, trefoil
from .io import (
    complex_to_dict,
    dumps_complex,
    matching_from_json,
    read_facets,
    read_graph,
    write_complex,
    write_matrices,
)
from .matching import validate_morse_matching
from .ordering import ReorderSchedule, apply_schedule
from .reduction import reduce_fully
from .torsion import DEFAULT_SNF_LIMIT, homology
from .validation import check_complex

log = logging.getLogger("steepmorse")

# rough bytes per stored entry (dict slot plus an int object)
BYTES_PER_ENTRY = 100
SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


class UsageError(Exception):
    pass


@dataclass
class PassRecord:
    index: int
    matched: list
    ranks: list
    nnz: list
    density: list
    seconds: float
    memory_estimate: int
    fallback: bool = False


@dataclass
class RunReport:
    ring: str
    input_ranks: list
    input_nnz: int
    passes: list = field(default_factory=list)
    final_ranks: list = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)


def _densities(C: ChainComplex) -> list:
    out = []
    for d in C.boundaries:
        out.append(None if d.nrows * d.ncols == 0 else float(matrix_density(d)))
    return out


def _ring(text):
    return None if text is None else RingSpec.parse(text)


def _schedule(args):
    try:
        return ReorderSchedule.parse(args.reorder, args.keys)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text, path):
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def _fmt_shape(k, d):
    return f"∂{str(k).translate(SUBSCRIPT)}: {d.nrows}×{d.ncols}, nnz {d.nnz}"


# gen


def _family_complex(args):
    fam = args.family
    if fam == "trefoil":
        return trefoil(), None
    if fam == "rp2":
        from .fixtures import rp2_simplicial

        K = rp2_simplicial()
        return rp2(), K
    if fam == "simplicial":
        if not args.facets:
            raise UsageError("simplicial needs --facets FILE")
        labels, facets = read_facets(args.facets)
        K = gen.SimplicialComplex(labels, facets)
        return None, K
    if fam == "independence":
        if args.graph_file:
            labels, edges = read_graph(args.graph_file)
            K = gen.independence_complex(edges, len(labels), labels)
        elif args.graph:
            try:
                n, edges = gen.parse_graph(args.graph)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            K = gen.independence_complex(edges, n)
        else:
            raise UsageError("independence needs --graph NAME or --graph-file FILE")
        return None, K
    if fam == "chessboard":
        if args.m is None or args.n is None or args.m < 1 or args.n < 1:
            raise UsageError("chessboard needs --m and --n, both >= 1")
        return None, gen.chessboard_complex(args.m, args.n)
    if fam in ("heisenberg", "gl"):
        if args.n is None or args.n < 1:
            raise UsageError(f"{fam} needs --n >= 1")
        L = gen.heisenberg(args.n) if fam == "heisenberg" else gen.general_linear(args.n)
        return L, None
    if fam == "fill":
        if args.m is None or args.n is None or args.m < 2 or args.n < 2:
            raise UsageError("fill needs --m and --n, both >= 2")
        return gen.fill_in_example(args.m, args.n, args.variant), None
    raise UsageError(f"unknown family {fam!r}")


def cmd_gen(args):
    ring = _ring(args.ring) or RingSpec.parse("Z")
    obj, K = _family_complex(args)
    if args.only_boundary is not None:
        k = args.only_boundary
        if isinstance(obj, gen.LieAlgebraSpec):
            if not 1 <= k <= obj.dim:
                raise UsageError(f"degree {k} out of range")
            d = gen.chevalley_boundary(obj, k, ring)
            print(_fmt_shape(k, d))
            return 0
        if K is None:
            raise UsageError("--only-boundary needs a simplicial family or a Lie algebra")
        try:
            st = gen.boundary_stats(K, k)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        print(f"∂{str(k).translate(SUBSCRIPT)}: {st.shape[0]}×{st.shape[1]}, nnz {st.nnz}")
        return 0
    if isinstance(obj, gen.LieAlgebraSpec):
        C = gen.chevalley_complex(obj, ring)
    elif obj is not None:
        C = obj if obj.ring == ring else obj.change_ring(ring)
    else:
        C = gen.simplicial_chain_complex(K, ring)
    ranks = C.ranks
    print(f"ranks {tuple(ranks)}")
    if C.boundaries:
        k = max(range(1, len(ranks)), key=lambda k: (C.boundaries[k - 1].nnz, k))
        print(f"dim {C.top_degree}, {_fmt_shape(k, C.boundaries[k - 1])}")
    if args.out:
        write_complex(C, args.out)
    if args.labels_out:
        labels = _labels_for(obj, K, C)
        Path(args.labels_out).write_text(json.dumps(labels) + "\n")
    return 0


def _labels_for(obj, K, C):
    if K is not None:
        return [[K.label(f) for f in K.faces(k)] for k in range(len(C.ranks))]
    if isinstance(obj, gen.LieAlgebraSpec):
        return [[gen.wedge_label(obj, m) for m in gen._wedge_basis(obj.dim, k)]
                for k in range(obj.dim + 1)]
    return [[f"e{k},{i + 1}" for i in range(r)] for k, r in enumerate(C.ranks)]


# validate / reorder


def cmd_validate(args):
    C = check_complex(args.input, _ring(args.ring), validate=False)
    bad = find_violation(C)
    if bad is not None:
        print(f"invalid: {bad}")
        return 2
    if args.matching:
        M = matching_from_json(json.loads(Path(args.matching).read_text()), C.ring)
        try:
            validate_morse_matching(C, M)
        except InvalidMatching as exc:
            print(f"matching invalid: {exc}")
            return 2
    print(f"ok: ranks {tuple(C.ranks)}, nnz {C.nnz}")
    return 0


def cmd_reorder(args):
    C = check_complex(args.input, _ring(args.ring))
    out, orders = apply_schedule(C, _schedule(args))
    if args.out:
        write_complex(out, args.out)
    else:
        print(dumps_complex(out))
    info = {"orders": [[i + 1 for i in o] for o in orders], "density": _densities(out)}
    print(json.dumps(info), file=sys.stderr)
    return 0


# reduce / bench


def _run_reduce(C, args, want_f):
    passes = None if args.passes == "auto" else int(args.passes)
    if passes is not None and passes < 0:
        raise UsageError("--passes must be auto or a nonnegative integer")
    report = RunReport(str(C.ring), list(C.ranks), C.nnz)
    t0 = time.perf_counter()

    def record(i, stats, cur):
        nnz = [d.nnz for d in cur.boundaries]
        report.passes.append(
            PassRecord(i, stats.matched, stats.ranks, nnz, _densities(cur), stats.seconds,
                       BYTES_PER_ENTRY * sum(nnz), stats.fallback)
        )
        if not args.quiet:
            log.info("pass %d: matched %s, ranks %s", i, stats.matched, stats.ranks)

    res = reduce_fully(
        C,
        reorder=_schedule(args),
        want_f=want_f,
        want_g=bool(getattr(args, "emit_g", None)),
        max_passes=passes,
        callback=record,
    )
    report.final_ranks = list(res.reduced.ranks)
    report.seconds = time.perf_counter() - t0
    bad = find_violation(res.reduced)
    if bad is not None:
        raise AssertionError(f"reduced complex violates d∘d = 0: {bad}")
    return res, report


def _write_report(report, path):
    if path:
        Path(path).write_text(report.to_json() + "\n")
    else:
        print(report.to_json(), file=sys.stderr)


def cmd_reduce(args):
    C = check_complex(args.input, _ring(args.ring))
    res, report = _run_reduce(C, args, want_f=bool(args.emit_f))
    R = res.reduced
    if args.out:
        write_complex(R, args.out)
    if args.emit_f:
        write_matrices(res.f, R.ring, args.emit_f, "f")
    if args.emit_g:
        write_matrices(res.g, R.ring, args.emit_g, "g")
    if args.format == "json":
        if not args.out:
            print(json.dumps(complex_to_dict(R)))
    else:
        print(f"passes {res.passes}, ranks {tuple(R.ranks)}")
        for k, d in enumerate(R.boundaries, start=1):
            if not d.is_zero():
                rows = [[R.ring.format(x) for x in r] for r in d.to_dense()]
                print(f"∂{str(k).translate(SUBSCRIPT)} = {rows}")
    _write_report(report, args.report)
    return 0


def cmd_bench(args):
    C = check_complex(args.input, _ring(args.ring))
    res, report = _run_reduce(C, args, want_f=args.with_f)
    print(f"{'pass':>4} {'matched':>9} {'cells':>9} {'nnz':>9} {'max density':>12} {'sec':>8}")
    print(f"{0:>4} {'':>9} {sum(C.ranks):>9} {C.nnz:>9} "
          f"{max([x for x in _densities(C) if x is not None], default=0):>12.4g} {'':>8}")
    for p in report.passes:
        dens = max([x for x in p.density if x is not None], default=0)
        print(f"{p.index:>4} {sum(p.matched):>9} {sum(p.ranks):>9} {sum(p.nnz):>9} "
              f"{dens:>12.4g} {p.seconds:>8.3f}")
    print(f"total {report.seconds:.3f}s, final ranks {tuple(report.final_ranks)}")
    _write_report(report, args.report)
    return 0


# homology


def cmd_homology(args):
    ring = _ring(args.ring) or RingSpec.parse("Z")
    C = check_complex(args.input, ring)
    kw = {"snf_limit": args.snf_limit} if ring.kind == "Z" else {}
    h = homology(C, args.generators, _schedule(args), **kw)
    for d in h.degrees:
        for gens in (d.generators or []), (d.torsion_generators or []):
            for g in gens:
                if C.boundary(d.degree).apply(g, C.ring):
                    raise AssertionError(f"generator in degree {d.degree} is not a cycle")
    labels = json.loads(Path(args.labels).read_text()) if args.labels else None
    if args.format == "json":
        print(json.dumps(h.to_json()))
        return 0
    print(h.summary())
    if args.generators:
        for d in h.degrees:
            named = [(g, "") for g in d.generators or []]
            named += [(g, f"  (order {t})") for t, g in zip(d.torsion, d.torsion_generators or [])]
            for g, note in named:
                print(f"  H{d.degree}: {_chain_text(g, d.degree, labels, h.ring)}{note}")
    return 0


def _chain_text(vec, k, labels, ring):
    parts = []
    for i, x in sorted(vec.items()):
        name = labels[k][i] if labels else f"e{k},{i + 1}"
        s = ring.format(x)
        if s == "1":
            parts.append(f"+{name}")
        elif s == "-1":
            parts.append(f"-{name}")
        else:
            parts.append(f"{'+' if not s.startswith('-') else ''}{s}*{name}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text or "0"


# parser


def _add_reduce_flags(p):
    p.add_argument("--ring", help="z | q | gf:p | zloc:p (default: the file's ring)")
    p.add_argument("--reorder", default="none", help="none | cols | rows:a,b | both:a,b")
    p.add_argument("--keys", help="sort keys, e.g. c1,c2,c4,r1,r2,r4")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="steepmorse",
        description="Reduce chain complexes by steepness matchings and compute exact homology.",
    )
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a chain complex")
    g.add_argument("family", help="trefoil | rp2 | simplicial | independence | chessboard | "
                                  "heisenberg | gl | fill")
    g.add_argument("--graph", help="hypercube:N | path:N | cycle:N")
    g.add_argument("--graph-file")
    g.add_argument("--facets")
    g.add_argument("--m", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--variant", default="a", choices=("a", "b", "c"))
    g.add_argument("--ring")
    g.add_argument("--only-boundary", type=int, metavar="K",
                   help="build just the K-th boundary and print its shape")
    g.add_argument("--labels-out", help="write basis labels as JSON")
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="check d∘d = 0 (and a matching)")
    v.add_argument("input")
    v.add_argument("--ring")
    v.add_argument("--matching", help="matching JSON to check as a Morse matching")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("reorder", help="permute bases by the sort keys")
    r.add_argument("input")
    _add_reduce_flags(r)
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_reorder)

    for name, fn, helptext in (("reduce", cmd_reduce, "iterated Morse reduction"),
                               ("bench", cmd_bench, "reduce and tabulate per-pass statistics")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        _add_reduce_flags(p)
        p.add_argument("--passes", default="auto")
        p.add_argument("--report", help="RunReport JSON path (default: stderr)")
        p.add_argument("--quiet", action="store_true")
        if name == "reduce":
            p.add_argument("-o", "--out")
            p.add_argument("--emit-f")
            p.add_argument("--emit-g")
            p.add_argument("--format", choices=("text", "json"), default="text")
        else:
            p.add_argument("--with-f", action="store_true")
        p.set_defaults(func=fn)

    h = sub.add_parser("homology", help="homology with optional generators")
    h.add_argument("input")
    _add_reduce_flags(h)
    h.add_argument("--generators", action="store_true")
    h.add_argument("--labels", help="basis labels JSON (from gen --labels-out)")
    h.add_argument("--snf-limit", type=int, default=DEFAULT_SNF_LIMIT)
    h.add_argument("--format", choices=("text", "json"), default="text")
    h.set_defaults(func=cmd_homology)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        return args.func(args)
    except ResidualTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, FormatError, RingError, TooLarge, InvalidMatching, ComplexError,
            OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AssertionError, SteepMorseError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
