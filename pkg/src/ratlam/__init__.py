"""Rational λ-trees modulo α-equivalence as finite coalgebras over nominal sets."""

from .nominal import (
    Atom,
    Perm,
    abstraction_eq,
    fresh_atom,
    fresh_atoms,
    is_fresh,
    perm_compose,
    swap,
)
from .orbits import (
    ArityMismatch,
    NotASubgroup,
    OrbitElement,
    OrbitSchema,
    OrbitSet,
    count_same_support,
    elem_eq,
    enumerate_support_in,
    validate_orbit_set,
)
from .terms import (
    BOT,
    App,
    Bot,
    Interner,
    Lam,
    Mu,
    Ref,
    TermGraph,
    TermSyntaxError,
    UnboundRef,
    UnguardedMu,
    Var,
    alpha_bisim,
    alpha_eq_finite,
    fv,
    graph_of,
    minimize,
    parse_term,
    print_graph,
    print_term,
    subtree_count,
    truncate,
    unfold_muterm,
)
from .coalgebra import (
    FRESH,
    AbsStep,
    AppStep,
    ConcreteCoalgebra,
    EscapesCarrier,
    InvalidCoalgebra,
    SupportTooLarge,
    SymbolicCoalgebra,
    VarStep,
    c_construct,
    gen_pair,
    gen_rsigma,
    graph_to_coalgebra,
    instantiate,
    naive_unfold,
    orbit_count,
    parse_coalgebra,
    parse_root,
    print_coalgebra,
    rsigma_count,
    size_bound,
    validate_coalgebra,
)
from .substitution import InB, InTriple, subst_finite, subst_rational
from .boehm import (
    BottomVerdict,
    BtBudget,
    HnfDecomposition,
    bt_graph,
    bt_truncate,
    gen_omega,
    gen_s,
    gen_u,
    head_reduce,
)

__version__ = "0.1.0"
