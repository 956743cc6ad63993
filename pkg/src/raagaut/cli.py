"""Command-line front end.

Exit codes: 0 success, 1 verification failure (including ``eq`` on unequal
words), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .automorphisms import (
    Automorphism,
    AutomorphismError,
    DescentError,
    MembershipError,
    FAMILY_NAMES,
    classify,
    compose,
    factor_conjugating,
    format_symbols,
)
from .graph_lattice import Graph, GraphError, enumerate_lattice, fixture_names, load_fixture
from .relations import (
    DEFAULT_BOUND,
    RelationError,
    emit_presentation,
    verify_families,
)
from .report import analyze
from .words import Word, WordError, equal, normalize

OK, FAIL, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def load_graph(source: str) -> Graph:
    """A graph file path, or the name of a bundled fixture such as ``GD``."""
    path = Path(source)
    if path.is_file():
        return Graph.load(path)
    if source in fixture_names():
        return load_fixture(source)
    raise InputError(f"no graph file or fixture named {source!r} (fixtures: {', '.join(fixture_names())})")


def _tie_breaks(path):
    if path is None:
        return None
    return Path(path).read_text().split()


def _graph_arg(args) -> Graph:
    source = getattr(args, "graph_file", None) or args.graph
    if source is None:
        raise InputError("a graph is required (positional file or --graph)")
    return load_graph(source)


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    g = _graph_arg(args)
    a = analyze(g, _tie_breaks(args.tie_break))
    fmt = args.format or "text"
    if fmt == "json":
        _emit(a.to_json())
    elif fmt == "tsv":
        _emit(a.to_tsv())
    elif fmt == "dot":
        _emit(g.to_dot())
    else:
        _emit(a.to_text())
    if args.report:
        from .figures import analysis_figures

        out = Path(args.report)
        out.mkdir(parents=True, exist_ok=True)
        (out / "analysis.tsv").write_text(a.to_tsv())
        for p in analysis_figures(g, out):
            print(f"wrote {p}", file=sys.stderr)
    return OK


def cmd_nf(args) -> int:
    g = _graph_arg(args)
    nf = normalize(Word.parse(g, args.word))
    if args.format == "json":
        _emit(json.dumps({"normal_form": str(nf), "length": len(nf)}))
    else:
        _emit(str(nf))
    return OK


def cmd_eq(args) -> int:
    g = _graph_arg(args)
    same = equal(Word.parse(g, args.u), Word.parse(g, args.v))
    _emit("equal" if same else "not equal")
    return OK if same else FAIL


def cmd_aut(args) -> int:
    g = _graph_arg(args)
    phi = Automorphism.parse(g, args.symbols)
    if args.action == "eval":
        vs = [args.on] if args.on else g.vertices
        for v in vs:
            g._idx(v)
        if args.format == "json":
            _emit(json.dumps({v: str(phi.image(v)) for v in vs}))
        else:
            for v in vs:
                _emit(f"{v} -> {phi.image(v)}")
        return OK
    if args.action == "compose":
        if not args.other:
            raise InputError("compose needs a second symbol word")
        psi = compose(phi, Automorphism.parse(g, args.other))
        _emit(str(psi))
        for v in g.vertices:
            _emit(f"{v} -> {psi.image(v)}")
        return OK
    if args.action == "classify":
        rep = classify(phi, bound=args.bounds)
        _emit(json.dumps(rep.to_dict(), indent=2) if args.format == "json" else rep.to_text())
        return OK
    word = factor_conjugating(phi, args.target)
    _emit(format_symbols(word) or "id")
    return OK


def cmd_relators(args) -> int:
    g = _graph_arg(args)
    bounds = args.bounds if args.bounds is not None else DEFAULT_BOUND
    rep = verify_families(g, args.families, bounds)
    fmt = args.format or "tsv"
    counts = rep.counts()
    if fmt == "json":
        _emit(json.dumps({f: {"instances": c[0], "passed": c[1]} for f, c in counts.items()}, indent=2))
    elif fmt == "text":
        for f, (n, p) in counts.items():
            _emit(f"{f:<9} {p}/{n}")
        _emit(f"total     {rep.total - len(rep.failures)}/{rep.total}")
    else:
        _emit(rep.to_tsv())
    if args.report:
        from .figures import draw_family_counts

        out = Path(args.report)
        out.mkdir(parents=True, exist_ok=True)
        (out / "relators.tsv").write_text(rep.to_tsv())
        draw_family_counts(counts, out / "relators.png")
    return FAIL if rep.failures else OK


def cmd_presentation(args) -> int:
    g = _graph_arg(args)
    bounds = args.bounds if args.bounds is not None else DEFAULT_BOUND
    pres = emit_presentation(g, args.families, bounds)
    _emit(pres.to_json() if args.format == "json" else pres.to_text())
    return OK


def cmd_verify(args) -> int:
    from .acceptance import run_all

    results = run_all(seed=args.seed)
    for r in results:
        _emit(r.line())
    return OK if all(r.passed for r in results) else FAIL


def cmd_export(args) -> int:
    g = _graph_arg(args)
    fmt = args.format or "text"
    if args.lattice:
        lat = enumerate_lattice(g, args.lattice)
        if fmt == "dot":
            _emit(lat.to_dot())
        elif fmt == "json":
            _emit(json.dumps({"elements": [list(Y.names()) for Y in lat.elements], "hasse": list(lat.hasse)}))
        else:
            _emit("\n".join("{" + ",".join(Y.names()) + "}" for Y in lat.elements))
        return OK
    if fmt == "json":
        _emit(g.to_json())
    elif fmt == "dot":
        _emit(g.to_dot())
    else:
        _emit(g.to_text())
    return OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file or bundled fixture name")
    common.add_argument("--format", choices=("text", "json", "dot", "tsv"))
    common.add_argument("--bounds", type=int, help="enumeration or search bound")
    common.add_argument("--tie-break", help="file listing vertices in tie-break priority")
    common.add_argument("--families", help="comma-separated relator families, ranges like R1-R11 allowed")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    p = argparse.ArgumentParser(prog="raagaut", description="Computations in partially commutative groups and their automorphisms.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="closure, lattice and class tables for a graph")
    a.add_argument("graph_file", nargs="?")
    a.add_argument("--report", metavar="DIR", help="also write analysis.tsv and PNG figures to DIR")
    a.set_defaults(func=cmd_analyze)

    n = sub.add_parser("nf", parents=[common], help="normal form of a word")
    n.add_argument("word")
    n.set_defaults(func=cmd_nf, graph_file=None)

    e = sub.add_parser("eq", parents=[common], help="decide equality of two words")
    e.add_argument("u")
    e.add_argument("v")
    e.set_defaults(func=cmd_eq, graph_file=None)

    au = sub.add_parser("aut", parents=[common], help="evaluate, compose, classify or factor automorphisms")
    au.add_argument("action", choices=("eval", "compose", "classify", "factor"))
    au.add_argument("symbols", help='generator word, e.g. "tr(v,a) lc({a,r,s},v)^-1"')
    au.add_argument("other", nargs="?", help="second generator word for compose")
    au.add_argument("--on", help="vertex to evaluate on")
    au.add_argument("--target", default="LInn", choices=FAMILY_NAMES, help="generator family for factor")
    au.set_defaults(func=cmd_aut, graph_file=None)

    r = sub.add_parser("relators", parents=[common], help="instantiate and verify relator families")
    r.add_argument("action", choices=("verify",))
    r.add_argument("graph_file", nargs="?")
    r.add_argument("--report", metavar="DIR", help="also write relators.tsv and a PNG summary to DIR")
    r.set_defaults(func=cmd_relators)

    pr = sub.add_parser("presentation", parents=[common], help="emit the presentation of the automorphism group")
    pr.add_argument("action", choices=("emit",))
    pr.add_argument("graph_file", nargs="?")
    pr.set_defaults(func=cmd_presentation)

    v = sub.add_parser("verify-paper", parents=[common], help="run the acceptance suite")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("export", parents=[common], help="write a graph or lattice as text, JSON or DOT")
    x.add_argument("graph_file", nargs="?")
    x.add_argument("--lattice", choices=("K", "L"))
    x.set_defaults(func=cmd_export)
    return p


INPUT_ERRORS = (InputError, GraphError, WordError, AutomorphismError, RelationError, OSError, ValueError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MembershipError, DescentError) as exc:
        print(f"not factored: {exc}", file=sys.stderr)
        return FAIL
    except INPUT_ERRORS as exc:
        witness = getattr(exc, "witness", None)
        msg = f"error: {exc}"
        if witness is not None:
            msg += f" (witness: {witness})"
        print(msg, file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
