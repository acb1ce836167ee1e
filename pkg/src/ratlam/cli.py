"""Command-line front end: every operation, scriptable and byte-deterministic.

Exit codes: 0 success (or true), 1 semantic false, 2 usage / parse errors.
"""

from __future__ import annotations

import argparse
import sys

from .boehm import BtBudget, bt_graph, bt_truncate, gen_s, gen_u
from .coalgebra import (
    InvalidCoalgebra,
    c_construct,
    gen_pair,
    gen_rsigma,
    graph_to_coalgebra,
    instantiate,
    parse_coalgebra,
    parse_root,
    print_coalgebra,
    rsigma_count,
    size_bound,
)
from .substitution import subst_rational
from .terms import (
    Interner,
    TermGraph,
    TermSyntaxError,
    UnboundRef,
    UnguardedMu,
    alpha_bisim,
    graph_of,
    is_finite,
    parse_term,
    print_graph,
    print_term,
    subtree_count,
    truncate,
)


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}")


def _parse(text: str, interner: Interner):
    try:
        return parse_term(text, interner)
    except (TermSyntaxError, UnboundRef, UnguardedMu) as e:
        raise CliError(f"parse error: {e}")


def _parse_finite(text: str, interner: Interner):
    t = _parse(text, interner)
    if not is_finite(t):
        raise CliError("this command needs a finite term (no mu / #refs)")
    return t


def _intern_header(interner: Interner, out) -> None:
    for name, atom in interner.table().items():
        if name != str(atom):
            print(f"# {name} = {atom}", file=out)


def _graph(text: str, interner: Interner) -> TermGraph:
    return graph_of(_parse(text, interner))


def run(argv, out=sys.stdout) -> int:
    ap = argparse.ArgumentParser(prog="ratlam", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a file (or - for stdin) and echo canonical form")
    p.add_argument("source")
    p = sub.add_parser("print", help="parse a term argument and echo canonical form")
    p.add_argument("term")
    p = sub.add_parser("truncate", help="cut the unfolding at depth N")
    p.add_argument("-d", "--depth", type=int, required=True)
    p.add_argument("term")
    p = sub.add_parser("alpha-eq", help="α-equivalence of two (possibly infinite) terms")
    p.add_argument("term1")
    p.add_argument("term2")
    p = sub.add_parser("subtrees", help="count distinct subtrees of the unfolding")
    p.add_argument("term")
    p = sub.add_parser("subst", help="substitute: TERM1[ATOM := TERM2]")
    p.add_argument("-v", "--var", required=True)
    p.add_argument("term1")
    p.add_argument("term2")
    p = sub.add_parser("bt", help="Böhm tree prefix of a finite term")
    p.add_argument("-d", "--depth", type=int, default=8)
    p.add_argument("-f", "--fuel", type=int, default=64)
    p.add_argument("term")
    p = sub.add_parser("bt-graph", help="Böhm tree as a μ-term, if detectably rational")
    p.add_argument("-s", "--states", type=int, default=64)
    p.add_argument("-f", "--fuel", type=int, default=64)
    p.add_argument("term")
    p = sub.add_parser("c-construct", help="materialize a coalgebra element as a μ-term")
    p.add_argument("coalgfile")
    p.add_argument("root")
    p = sub.add_parser("examples", help="emit a built-in example: pair | rsigma:L | u | s")
    p.add_argument("name")
    p = sub.add_parser("bench", help="subtree count vs closed form")
    p.add_argument("family", choices=["rsigma"])
    p.add_argument("level", type=int)

    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    interner = Interner()
    try:
        match args.command:
            case "parse":
                t = _parse(_read_source(args.source), interner)
                _intern_header(interner, out)
                print(print_term(t), file=out)
            case "print":
                t = _parse(args.term, interner)
                _intern_header(interner, out)
                print(print_term(t), file=out)
            case "truncate":
                g = _graph(args.term, interner)
                print(print_term(truncate(g, args.depth)), file=out)
            case "alpha-eq":
                g1 = _graph(args.term1, interner)
                g2 = _graph(args.term2, interner)
                eq = alpha_bisim(g1, g2)
                print("true" if eq else "false", file=out)
                return 0 if eq else 1
            case "subtrees":
                print(subtree_count(_graph(args.term, interner)), file=out)
            case "subst":
                v = interner.atom(args.var)
                g1 = _graph(args.term1, interner)
                g2 = _graph(args.term2, interner)
                print(print_graph(subst_rational(g1, v, g2)), file=out)
            case "bt":
                t = _parse_finite(args.term, interner)
                budget = BtBudget(fuel=args.fuel, depth=args.depth)
                print(print_term(bt_truncate(t, budget)), file=out)
            case "bt-graph":
                t = _parse_finite(args.term, interner)
                budget = BtBudget(fuel=args.fuel, states=args.states)
                g = bt_graph(t, budget)
                print("unknown" if g is None else print_graph(g), file=out)
            case "c-construct":
                try:
                    sym = parse_coalgebra(_read_source(args.coalgfile))
                    root = parse_root(args.root, sym)
                    conc = instantiate(sym)
                    g = c_construct(conc, root, sym.carrier)
                except (InvalidCoalgebra, KeyError, ValueError) as e:
                    raise CliError(f"invalid coalgebra: {e}")
                n = len(sym.carrier.schemas)
                print(print_graph(g), file=out)
                print(f"nodes={len(g.nodes)} bound={size_bound(n, conc.support_bound)}", file=out)
            case "examples":
                _examples(args.name, out)
            case "bench":
                g = gen_rsigma(args.level)
                got, want = subtree_count(g), rsigma_count(args.level)
                print(f"{got} {want} {'ok' if got == want else 'MISMATCH'}", file=out)
                return 0 if got == want else 1
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    return 0


def _examples(name: str, out) -> None:
    if name == "pair":
        sym, root = gen_pair()
        out.write(print_coalgebra(sym))
        print(f"root {root}", file=out)
    elif name.startswith("rsigma:"):
        try:
            level = int(name.split(":", 1)[1])
        except ValueError:
            raise CliError(f"bad rsigma level in {name!r}")
        print(print_graph(gen_rsigma(level)), file=out)
    elif name == "u":
        print(print_term(gen_u()), file=out)
    elif name == "s":
        print(print_term(gen_s()), file=out)
    else:
        raise CliError(f"unknown example {name!r} (try pair | rsigma:L | u | s)")


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
