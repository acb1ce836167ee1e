"""Capture-avoiding substitution: finite oracle and corecursive rational version.

The rational version runs the substitution coalgebra on states that are
either an element of the replacement coalgebra, or a triple (element being
rewritten, variable marker, replacement element), and materializes the
behavior of the root triple with the finite construction in reachable mode.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nominal import Atom, Perm, fresh_atom, swap
from .coalgebra import (
    ConcreteCoalgebra,
    ConcreteStepAbs,
    ConcreteStepApp,
    ConcreteStepVar,
    c_construct,
    graph_to_coalgebra,
    instantiate,
)
from .terms import BOT, App, Bot, FiniteTerm, Lam, TermGraph, Var, fv


# ---------------------------------------------------------------------------
# Finite terms (oracle)


def subst_finite(t: FiniteTerm, v: Atom, s: FiniteTerm) -> FiniteTerm:
    """t[v := s], capture-avoiding; binders renamed to least fresh atoms."""
    match t:
        case Var(a):
            return s if a == v else t
        case Bot():
            return t
        case App(f, a):
            return App(subst_finite(f, v, s), subst_finite(a, v, s))
        case Lam(x, b):
            if x == v or v not in fv(b):
                return t
            if x in fv(s):
                x2 = fresh_atom(fv(b) | fv(s) | {v})
                b = _rename_free(b, x, x2)
                x = x2
            return Lam(x, subst_finite(b, v, s))
    raise TypeError(f"not a finite term: {t!r}")


def _rename_free(t: FiniteTerm, old: Atom, new: Atom) -> FiniteTerm:
    """Rename free occurrences of old to new (new assumed fresh for t)."""
    match t:
        case Var(a):
            return Var(new) if a == old else t
        case Bot():
            return t
        case App(f, a):
            return App(_rename_free(f, old, new), _rename_free(a, old, new))
        case Lam(x, b):
            if x == old:
                return t
            if x == new:
                # new is fresh for t, so this binder has no occurrences of old below
                return t
            return Lam(x, _rename_free(b, old, new))


# ---------------------------------------------------------------------------
# Substitution states


@dataclass(frozen=True)
class InB:
    elem: object

    def support(self) -> frozenset[Atom]:
        return self.elem.support()

    def act(self, p: Perm) -> "InB":
        return InB(self.elem.act(p))


@dataclass(frozen=True)
class InTriple:
    elem: object
    marker: Atom
    repl: object

    def support(self) -> frozenset[Atom]:
        return self.elem.support() | {self.marker} | self.repl.support()

    def act(self, p: Perm) -> "InTriple":
        return InTriple(self.elem.act(p), p(self.marker), self.repl.act(p))


def subst_coalgebra(a: ConcreteCoalgebra, b: ConcreteCoalgebra) -> ConcreteCoalgebra:
    """The coalgebra on B + A×V×B whose behavior is substitution."""

    def wrap_b(step):
        match step:
            case ConcreteStepVar():
                return step
            case ConcreteStepApp(left=l, right=r):
                return ConcreteStepApp(InB(l), InB(r))
            case ConcreteStepAbs(binder=v, body=y):
                return ConcreteStepAbs(v, InB(y))

    def step_fn(state):
        match state:
            case InB(elem=y):
                return wrap_b(b.step_fn(y))
            case InTriple(elem=x, marker=w, repl=y):
                match a.step_fn(x):
                    case ConcreteStepVar(atom=u):
                        if u != w:
                            return ConcreteStepVar(u)
                        return wrap_b(b.step_fn(y))
                    case ConcreteStepAbs(binder=u, body=x2):
                        # rename the abstraction representative away from the
                        # marker and the replacement before pairing (strength)
                        u2 = fresh_atom({w} | y.support() | x.support())
                        return ConcreteStepAbs(
                            u2, InTriple(x2.act(swap(u, u2)), w, y)
                        )
                    case ConcreteStepApp(left=x1, right=x2):
                        return ConcreteStepApp(
                            InTriple(x1, w, y), InTriple(x2, w, y)
                        )
        raise TypeError(f"not a substitution state: {state!r}")

    return ConcreteCoalgebra(step_fn, a.support_bound + 1 + b.support_bound)


def subst_rational(t: TermGraph, v: Atom, s: TermGraph) -> TermGraph:
    """Substitution on rational trees via the corecursive construction."""
    sym_a, root_a = graph_to_coalgebra(t)
    sym_b, root_b = graph_to_coalgebra(s)
    conc = subst_coalgebra(instantiate(sym_a), instantiate(sym_b))
    return c_construct(conc, InTriple(root_a, v, root_b))
