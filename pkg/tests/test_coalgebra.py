import random

import pytest

from ratlam import (
    AbsStep,
    AppStep,
    Atom,
    BOT,
    ConcreteCoalgebra,
    EscapesCarrier,
    FRESH,
    InvalidCoalgebra,
    Lam,
    OrbitElement,
    OrbitSchema,
    OrbitSet,
    SupportTooLarge,
    SymbolicCoalgebra,
    VarStep,
    alpha_bisim,
    alpha_eq_finite,
    c_construct,
    gen_pair,
    gen_rsigma,
    graph_of,
    graph_to_coalgebra,
    instantiate,
    naive_unfold,
    orbit_count,
    parse_coalgebra,
    parse_root,
    parse_term,
    print_coalgebra,
    rsigma_count,
    size_bound,
    subtree_count,
    truncate,
    validate_coalgebra,
)
from ratlam.coalgebra import ConcreteStepAbs, ConcreteStepApp, ConcreteStepVar

from conftest import CORPUS, random_symbolic_coalgebra

S2 = frozenset({(0, 1), (1, 0)})


def _single(schema, step, root_atoms=()):
    sym = SymbolicCoalgebra(OrbitSet((schema,)), {schema.id: step})
    return sym, OrbitElement(schema, root_atoms)


# ---------------------------------------------------------------------------
# Validation


def test_validate_pair():
    sym, _ = gen_pair()
    validate_coalgebra(sym)


def test_validate_rejects_missing_step():
    sym = SymbolicCoalgebra(OrbitSet((OrbitSchema("o", 1),)), {})
    with pytest.raises(InvalidCoalgebra):
        validate_coalgebra(sym)


def test_validate_rejects_slot_out_of_range():
    sym, _ = _single(OrbitSchema("o", 1), VarStep(3), (Atom(0),))
    with pytest.raises(InvalidCoalgebra):
        validate_coalgebra(sym)


def test_validate_rejects_non_injective_assignment():
    o = OrbitSchema("o", 2)
    sym, _ = _single(o, AppStep("o", (0, 0), "o", (0, 1)), (Atom(0), Atom(1)))
    with pytest.raises(InvalidCoalgebra):
        validate_coalgebra(sym)


def test_validate_rejects_double_fresh():
    o = OrbitSchema("o", 2)
    sym, _ = _single(o, AbsStep(FRESH, "o", (FRESH, FRESH)), (Atom(0), Atom(1)))
    with pytest.raises(InvalidCoalgebra):
        validate_coalgebra(sym)


def test_stabilizer_well_definedness():
    # under the slot swap, var-of-slot-1 changes: ill-defined on the quotient
    u = OrbitSchema("u", 2, S2)
    bad, _ = _single(u, VarStep(0), (Atom(0), Atom(1)))
    with pytest.raises(InvalidCoalgebra):
        validate_coalgebra(bad)
    # an application into the same unordered pair is symmetric, hence fine
    good, _ = _single(u, AppStep("u", (0, 1), "u", (0, 1)), (Atom(0), Atom(1)))
    validate_coalgebra(good)
    # so is abstracting a fresh name over the same unordered pair
    good2, _ = _single(u, AbsStep(FRESH, "u", (0, 1)), (Atom(0), Atom(1)))
    validate_coalgebra(good2)


# ---------------------------------------------------------------------------
# Instantiation


def test_instantiate_pair_steps():
    sym, root = gen_pair()
    conc = instantiate(sym)
    step = conc.step_fn(root)
    assert isinstance(step, ConcreteStepApp)
    assert step.left.atoms == (Atom(0),)
    assert step.right.atoms == (Atom(1),)
    var = sym.element("var", (Atom(7),))
    assert conc.step_fn(var) == ConcreteStepVar(Atom(7))


def test_instantiate_fresh_binder_is_least_fresh():
    o0 = OrbitSchema("o0", 0)
    o1 = OrbitSchema("o1", 1)
    sym = SymbolicCoalgebra(
        OrbitSet((o0, o1)),
        {"o0": AbsStep(FRESH, "o1", (FRESH,)), "o1": VarStep(0)},
    )
    conc = instantiate(sym)
    step = conc.step_fn(OrbitElement(o0, ()))
    assert isinstance(step, ConcreteStepAbs)
    assert step.binder == Atom(0)
    assert step.body.atoms == (Atom(0),)
    # the whole thing unfolds to the identity function
    g = c_construct(conc, OrbitElement(o0, ()), sym.carrier)
    assert alpha_bisim(g, graph_of(parse_term(r"\x. x")))


# ---------------------------------------------------------------------------
# The finite construction


def test_size_bound_values():
    assert size_bound(2, 2) == 12
    assert size_bound(1, 0) == 1
    assert size_bound(3, 1) == 6


def test_pair_construction():
    sym, root = gen_pair()
    conc = instantiate(sym)
    g = c_construct(conc, root, sym.carrier)
    assert len(g.nodes) == 9
    assert len(g.nodes) <= size_bound(2, 2)
    assert subtree_count(g) == 3
    assert truncate(g, 2) == parse_term("v0 v1")
    reach = c_construct(conc, root)
    assert len(reach.nodes) == 3
    assert alpha_bisim(g, reach)


def test_self_loop_application():
    o = OrbitSchema("o", 0)
    sym, root = _single(o, AppStep("o", (), "o", ()))
    g = c_construct(instantiate(sym), root, sym.carrier)
    assert len(g.nodes) == 1
    assert g.nodes[g.root] == ("app", g.root, g.root)


def test_binder_reuse_tower():
    o = OrbitSchema("o", 0)
    sym, root = _single(o, AbsStep(FRESH, "o", ()))
    g = c_construct(instantiate(sym), root, sym.carrier)
    assert len(g.nodes) == 1
    v0 = Atom(0)
    assert truncate(g, 3) == Lam(v0, Lam(v0, Lam(v0, BOT)))


def test_support_too_large():
    o = OrbitSchema("o", 2)
    conc = ConcreteCoalgebra(lambda e: ConcreteStepVar(e.atoms[0]), support_bound=1)
    with pytest.raises(SupportTooLarge):
        c_construct(conc, OrbitElement(o, (Atom(0), Atom(1))))


def test_escapes_carrier():
    o = OrbitSchema("o", 1)
    stray = OrbitElement(o, (Atom(9),))
    conc = ConcreteCoalgebra(lambda e: ConcreteStepApp(stray, stray), support_bound=1)
    with pytest.raises(EscapesCarrier):
        c_construct(conc, OrbitElement(o, (Atom(0),)), OrbitSet((o,)))


def test_construction_agrees_with_naive_unfolding():
    corpus = [gen_pair(), *(random_symbolic_coalgebra(random.Random(s)) for s in range(5))]
    for sym, root in corpus:
        conc = instantiate(sym)
        g = c_construct(conc, root, sym.carrier)
        for d in range(11):
            assert alpha_eq_finite(truncate(g, d), naive_unfold(conc, root, d))


def test_reachable_and_enumerative_modes_agree():
    for seed in range(8):
        sym, root = random_symbolic_coalgebra(random.Random(100 + seed))
        conc = instantiate(sym)
        assert alpha_bisim(c_construct(conc, root, sym.carrier), c_construct(conc, root))


# ---------------------------------------------------------------------------
# Graph -> coalgebra


def test_graph_to_coalgebra_shapes():
    sym, root = graph_to_coalgebra(graph_of(parse_term("v0 v1")))
    assert sorted(s.arity for s in sym.carrier) == [1, 1, 2]
    assert root.atoms == (Atom(0), Atom(1))

    sym1, root1 = graph_to_coalgebra(graph_of(parse_term("v3")))
    (schema,) = sym1.carrier.schemas
    assert schema.arity == 1
    assert sym1.steps[schema.id] == VarStep(0)


def test_graph_to_coalgebra_rejects_bottom():
    with pytest.raises(ValueError):
        graph_to_coalgebra(graph_of(parse_term("_|_")))


def test_roundtrip_on_sample():
    for src in CORPUS[:10]:
        g = graph_of(parse_term(src))
        sym, root = graph_to_coalgebra(g)
        back = c_construct(instantiate(sym), root)
        assert alpha_bisim(g, back)


# ---------------------------------------------------------------------------
# Example families


def test_rsigma_counts_small():
    assert rsigma_count(1) == 3
    assert rsigma_count(2) == 8
    assert rsigma_count(3) == 88
    assert subtree_count(gen_rsigma(1)) == 3
    assert subtree_count(gen_rsigma(2)) == 8


def test_rsigma_rejects_bad_levels():
    with pytest.raises(ValueError):
        gen_rsigma(0)
    with pytest.raises(ValueError):
        gen_rsigma(5)


def test_orbit_count_examples():
    assert orbit_count(graph_of(parse_term("v0 v1"))) == 2
    assert orbit_count(gen_rsigma(1)) == 3
    assert orbit_count(gen_rsigma(2)) == 4


# ---------------------------------------------------------------------------
# Text format


PAIR_TEXT = """\
orbit var arity=1 stab=trivial
orbit pair arity=2 stab=trivial
step var = var 1
step pair = app var(1) var(2)
"""


def test_parse_coalgebra_text():
    sym = parse_coalgebra(PAIR_TEXT)
    validate_coalgebra(sym)
    assert sym.steps["pair"] == AppStep("var", (0,), "var", (1,))
    root = parse_root("pair(v0,v1)", sym)
    g = c_construct(instantiate(sym), root, sym.carrier)
    assert len(g.nodes) == 9


def test_parse_coalgebra_with_stabilizer():
    text = (
        "orbit u arity=2 stab=(1 2)\n"
        "step u = app u(1,2) u(1,2)\n"
    )
    sym = parse_coalgebra(text)
    validate_coalgebra(sym)
    (schema,) = sym.carrier.schemas
    assert schema.stabilizer == frozenset({(0, 1), (1, 0)})


def test_print_parse_coalgebra_roundtrip():
    for sym in [gen_pair()[0], parse_coalgebra(PAIR_TEXT)]:
        back = parse_coalgebra(print_coalgebra(sym))
        assert back.steps == sym.steps
        assert [
            (s.id, s.arity, s.stabilizer) for s in back.carrier
        ] == [(s.id, s.arity, s.stabilizer) for s in sym.carrier]


def test_parse_coalgebra_rejects_garbage():
    with pytest.raises(InvalidCoalgebra):
        parse_coalgebra("nonsense line\n")
    with pytest.raises(InvalidCoalgebra):
        parse_coalgebra("step o = app var(1)\n")
