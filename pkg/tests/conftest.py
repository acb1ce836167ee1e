"""Shared corpus and random generators for the test suite."""

import random

import pytest

from ratlam import (
    AbsStep,
    App,
    AppStep,
    Atom,
    BOT,
    FRESH,
    Lam,
    OrbitElement,
    OrbitSchema,
    OrbitSet,
    Perm,
    SymbolicCoalgebra,
    TermGraph,
    Var,
    VarStep,
    graph_of,
    parse_term,
)

# A corpus of small mu-terms.  Every identifier is written as an explicit
# v<index> so that parsing with independent interners never collapses two
# names.  All terms are bottom-free (so they convert to coalgebras) and every
# graph is small enough that depth-12 truncations distinguish inequivalent
# unfoldings.
CORPUS = [
    "mu r. v0 #r",
    "mu r. v0 (v0 #r)",
    "mu a. \\v0. ((mu b. \\v0. #b) (mu c. v0 #c))",
    "mu r. (\\v0. (\\v1. #r) v1) v0",
    "mu a. \\v0. mu b. \\v1. #a #b",
    "v0",
    "v0 v1",
    "\\v0. v0",
    "\\v0. \\v1. v0",
    "\\v0. \\v1. v1",
    "(\\v0. v0 v0) (\\v0. v0 v0)",
    "mu r. \\v0. v0 #r",
    "mu r. \\v1. v1 #r",
    "mu r. v1 #r",
    "mu r. #r #r",
    "mu r. \\v0. #r",
    "mu r. v0 (v1 #r)",
    "mu r. (#r v0) v1",
    "\\v0. mu r. v0 #r",
    "mu r. (\\v0. v0) #r",
    "mu r. \\v0. v0 (v1 #r)",
    "v0 (v1 v2)",
    "(v0 v1) v2",
    "\\v0. v1",
    "\\v1. v1",
    "mu r. v0 (#r #r)",
    "mu a. v0 (mu b. v1 (#a #b))",
    "\\v2. v2 (mu r. v2 #r)",
    "mu r. (\\v0. #r) v0",
    "mu r. (mu s. v0 #s) #r",
    "\\v0. v0 v0",
    "mu r. \\v0. \\v1. #r",
    "v3",
    "mu r. v2 (v2 (v2 #r))",
    "\\v0. (\\v1. v0 v1) v2",
]


@pytest.fixture(scope="session")
def corpus_graphs():
    return [graph_of(parse_term(src)) for src in CORPUS]


def random_perm(rng: random.Random, indices=range(8)) -> Perm:
    pool = [Atom(i) for i in indices]
    image = pool[:]
    rng.shuffle(image)
    return Perm(dict(zip(pool, image)))


def random_finite_term(rng: random.Random, depth: int = 4):
    atoms = [Atom(i) for i in range(4)]
    if depth <= 0 or rng.random() < 0.3:
        return Var(rng.choice(atoms)) if rng.random() < 0.85 else BOT
    kind = rng.random()
    if kind < 0.4:
        return Lam(rng.choice(atoms), random_finite_term(rng, depth - 1))
    return App(random_finite_term(rng, depth - 1), random_finite_term(rng, depth - 1))


def random_term_graph(rng: random.Random, max_nodes: int = 5) -> TermGraph:
    """A random bottom-free term graph; cycles are fine since Var nodes are leaves."""
    n = rng.randint(1, max_nodes)
    atoms = [Atom(i) for i in range(4)]
    nodes = {}
    for i in range(n):
        kind = rng.random()
        if kind < 0.35 or n == 1:
            nodes[i] = ("var", rng.choice(atoms))
        elif kind < 0.6:
            nodes[i] = ("lam", rng.choice(atoms), rng.randrange(n))
        else:
            nodes[i] = ("app", rng.randrange(n), rng.randrange(n))
    return TermGraph(nodes, 0)


def random_symbolic_coalgebra(rng: random.Random):
    """A random valid coalgebra (trivial stabilizers) plus a root element."""
    n = rng.randint(1, 4)
    arities = [rng.randint(0, 3) for _ in range(n)]
    if all(a == 0 for a in arities):
        arities[0] = rng.randint(1, 3)
    schemas = [OrbitSchema(f"o{i}", arities[i]) for i in range(n)]

    def injective_slots(source_arity: int, count: int):
        return tuple(rng.sample(range(source_arity), count))

    steps = {}
    for i, k in enumerate(arities):
        choices = []
        if k >= 1:
            choices.append("var")
        app_targets = [j for j in range(n) if arities[j] <= k]
        if app_targets:
            choices.append("app")
        abs_targets = [j for j in range(n) if arities[j] <= k + 1]
        if abs_targets:
            choices.append("abs")
        kind = rng.choice(choices)
        if kind == "var":
            steps[f"o{i}"] = VarStep(rng.randrange(k))
        elif kind == "app":
            lt = rng.choice(app_targets)
            rt = rng.choice(app_targets)
            steps[f"o{i}"] = AppStep(
                f"o{lt}", injective_slots(k, arities[lt]),
                f"o{rt}", injective_slots(k, arities[rt]),
            )
        else:
            t = rng.choice(abs_targets)
            j = arities[t]
            use_fresh = j == k + 1 or (j >= 1 and rng.random() < 0.5)
            if use_fresh:
                src = injective_slots(k, j - 1)
                pos = rng.randrange(j)
                asg = src[:pos] + (FRESH,) + src[pos:]
            else:
                asg = injective_slots(k, j)
            steps[f"o{i}"] = AbsStep(FRESH, f"o{t}", asg)

    sym = SymbolicCoalgebra(OrbitSet(tuple(schemas)), steps)
    root_idx = rng.choice([i for i in range(n)])
    root = OrbitElement(schemas[root_idx], tuple(Atom(j) for j in range(arities[root_idx])))
    return sym, root


def graph_eq_literal(g1: TermGraph, g2: TermGraph) -> bool:
    return g1.nodes == g2.nodes and g1.root == g2.root
