"""Tour of mu-terms, term graphs, truncation and alpha-equivalence.

Run with: python3 demos/rational_trees.py
"""

from ratlam import (
    alpha_bisim,
    graph_of,
    parse_term,
    print_graph,
    print_term,
    subtree_count,
    truncate,
)


def show(title, value):
    print(f"{title:<44} {value}")


def main():
    # An infinite term with a finite description: f (f (f (...)))
    g = graph_of(parse_term("mu r. v0 #r"))
    show("mu r. v0 #r printed back:", print_graph(g))
    for d in (1, 2, 4):
        show(f"  truncated at depth {d}:", print_term(truncate(g, d)))
    show("  distinct subtrees:", subtree_count(g))
    print()

    # Bound names are irrelevant; free names are not.
    a = graph_of(parse_term("mu r. \\v0. v0 #r"))
    b = graph_of(parse_term("mu r. \\v1. v1 #r"))
    c = graph_of(parse_term("mu r. v1 #r"))
    show("loop with binder v0 == loop with binder v1:", alpha_bisim(a, b))
    show("free v0 loop == free v1 loop:", alpha_bisim(g, c))
    print()

    # Unfolding a mu-term is literal, so a reference under a different
    # binder gets captured -- on purpose.
    t = parse_term("mu a. \\v0. ((mu b. \\v0. #b) (mu c. v0 #c))")
    gg = graph_of(t)
    show("uplink term:", print_graph(gg))
    show("  depth-5 unfolding:", print_term(truncate(gg, 5)))
    show("  distinct subtrees:", subtree_count(gg))


if __name__ == "__main__":
    main()
