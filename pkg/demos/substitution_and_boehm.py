"""Capture-avoiding substitution on infinite terms, and Böhm trees.

Run with: python3 demos/substitution_and_boehm.py
"""

from ratlam import (
    App,
    Atom,
    BtBudget,
    Var,
    bt_graph,
    bt_truncate,
    gen_omega,
    gen_s,
    gen_u,
    graph_of,
    parse_term,
    print_graph,
    print_term,
    subst_rational,
    truncate,
)


def main():
    # Substitution runs corecursively on the graph, so it works on infinite
    # terms, and the freshening step keeps incoming free names from being
    # captured.
    g = graph_of(parse_term("mu r. \\v0. v0 (v1 #r)"))
    s = graph_of(parse_term("v0 v2"))
    out = subst_rational(g, Atom(1), s)
    print(f"substituting {print_graph(s)} for v1 in {print_graph(g)}:")
    print(f"  {print_graph(out)}")
    print(f"  depth-4 unfolding: {print_term(truncate(out, 4))}")
    print()

    # A fixed point whose Böhm tree is itself a rational tree: the
    # detector finds the loop and emits a finite graph.
    s_term = gen_s()
    print(f"looping fixed point: {print_term(s_term)}")
    bt = bt_graph(s_term, BtBudget())
    print(f"  Böhm tree: {print_graph(bt)}")
    print()

    # A fixed point whose Böhm tree keeps growing new leaves: the detector
    # honestly reports unknown, and the prefixes keep getting bigger.
    u_applied = App(gen_u(), Var(Atom(3)))
    print(f"growing fixed point applied to v3: {print_term(u_applied)}")
    print(f"  rational? {bt_graph(u_applied, BtBudget(states=64))}")
    for d in (3, 5, 7):
        prefix = bt_truncate(u_applied, BtBudget(depth=d))
        print(f"  depth-{d} prefix: {print_term(prefix)}")
    print()

    # No head normal form at all: the Böhm tree is a single bottom.
    print(f"omega: {print_term(gen_omega())}")
    print(f"  Böhm tree prefix: {print_term(bt_truncate(gen_omega(), BtBudget()))}")


if __name__ == "__main__":
    main()
