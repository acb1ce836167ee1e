"""Fuel-bounded head reduction, Böhm-tree prefixes and rationality detection.

Whether a term has a head normal form is only semi-decidable, so every
operation here takes an explicit budget; running out of fuel is a value
(⊥ / unknown), never an error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nominal import Atom, fresh_atom, fresh_atoms
from .substitution import subst_finite
from .terms import BOT, App, Bot, FiniteTerm, Lam, TermGraph, Var, fv


@dataclass(frozen=True)
class HnfDecomposition:
    """λx1…λxn. y N1 … Nm, split into binders, head variable and arguments."""

    binders: tuple[Atom, ...]
    head: Atom
    args: tuple[FiniteTerm, ...]

    def term(self) -> FiniteTerm:
        t: FiniteTerm = Var(self.head)
        for a in self.args:
            t = App(t, a)
        for x in reversed(self.binders):
            t = Lam(x, t)
        return t


@dataclass(frozen=True)
class BottomVerdict:
    fuel_exhausted: bool


@dataclass(frozen=True)
class BtBudget:
    fuel: int = 64
    depth: int = 8
    states: int = 64

    def __post_init__(self):
        if self.fuel <= 0 or self.depth <= 0 or self.states <= 0:
            raise ValueError("budget components must be positive")


def _spine(t: FiniteTerm) -> tuple[tuple[Atom, ...], FiniteTerm, list[FiniteTerm]]:
    """Strip λx1…λxn and the application spine: t = λxs. head N1…Nm."""
    binders = []
    while isinstance(t, Lam):
        binders.append(t.binder)
        t = t.body
    args: list[FiniteTerm] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return tuple(binders), t, args


def head_reduce(t: FiniteTerm, fuel: int) -> HnfDecomposition | BottomVerdict:
    """Contract the head redex until a head normal form or the fuel runs out."""
    while True:
        binders, head, args = _spine(t)
        match head:
            case Var(a):
                return HnfDecomposition(binders, a, tuple(args))
            case Bot():
                return BottomVerdict(fuel_exhausted=False)
            case Lam(x, b):
                # head is a redex: (λx.b) args[0] args[1:] under the binders
                if not args:
                    raise AssertionError("spine stripping left a bare lambda")
                if fuel <= 0:
                    return BottomVerdict(fuel_exhausted=True)
                fuel -= 1
                reduced = subst_finite(b, x, args[0])
                for a in args[1:]:
                    reduced = App(reduced, a)
                for x2 in reversed(binders):
                    reduced = Lam(x2, reduced)
                t = reduced


def bt_truncate(t: FiniteTerm, budget: BtBudget) -> FiniteTerm:
    """Depth-bounded prefix of the Böhm tree; ⊥ marks cuts and dead ends.

    Depth is tree depth of the emitted prefix, so the result agrees with
    `truncate` applied to the full Böhm tree at the same depth.
    """
    d = budget.depth

    def rec(term: FiniteTerm, cur: int) -> FiniteTerm:
        if cur >= d:
            return BOT
        res = head_reduce(term, budget.fuel)
        if isinstance(res, BottomVerdict):
            return BOT
        n, m = len(res.binders), len(res.args)
        out: FiniteTerm = Var(res.head) if cur + n + m < d else BOT
        for i, arg in enumerate(res.args):
            app_depth = cur + n + m - 1 - i
            if app_depth >= d:
                out = BOT
            else:
                out = App(out, rec(arg, app_depth + 1))
        for j in range(n - 1, -1, -1):
            if cur + j >= d:
                out = BOT
            else:
                out = Lam(res.binders[j], out)
        return out

    return rec(t, 0)


def _canonicalize(t: FiniteTerm) -> FiniteTerm:
    """Rename binders to the least atoms outside fv(t), in traversal order.

    α-equivalent terms with the same free variables get identical results,
    which makes canonical forms usable as memo keys.
    """
    free = fv(t)
    names = iter(_fresh_stream(free))
    mapping: dict[Atom, Atom] = {}

    def rec(t: FiniteTerm, bound: dict[Atom, Atom]) -> FiniteTerm:
        match t:
            case Var(a):
                return Var(bound.get(a, a))
            case Bot():
                return t
            case App(f, a):
                return App(rec(f, bound), rec(a, bound))
            case Lam(x, b):
                x2 = next(names)
                return Lam(x2, rec(b, {**bound, x: x2}))

    return rec(t, {})


def _fresh_stream(avoid):
    taken = {a.index for a in avoid}
    i = 0
    while True:
        if i not in taken:
            yield Atom(i)
        i += 1


class _StateBudgetExceeded(Exception):
    pass


def bt_graph(t: FiniteTerm, budget: BtBudget) -> TermGraph | None:
    """Try to build the Böhm tree as a finite graph; None means unknown.

    Pending terms are memoized by α-canonical form (free atoms stay
    concrete); a recurring state becomes a back edge.  If the state budget
    is exceeded the Böhm tree may still be rational — this is a
    semi-decision.
    """
    nodes: dict[int, tuple] = {}
    memo: dict[FiniteTerm, int] = {}
    counter = iter(range(10**9))

    def build(term: FiniteTerm) -> int:
        key = _canonicalize(term)
        if key in memo:
            return memo[key]
        if len(memo) >= budget.states:
            raise _StateBudgetExceeded
        nid = next(counter)
        memo[key] = nid
        res = head_reduce(key, budget.fuel)
        if isinstance(res, BottomVerdict):
            if res.fuel_exhausted:
                raise _StateBudgetExceeded  # honest unknown, not a ⊥ claim
            nodes[nid] = ("bot",)
            return nid
        # emit the hnf skeleton; only the root of the skeleton is the state node
        spine: int | None = None
        cur = next(counter)
        nodes[cur] = ("var", res.head)
        for arg in res.args:
            child = build(arg)
            new = next(counter)
            nodes[new] = ("app", cur, child)
            cur = new
        for x in reversed(res.binders):
            new = next(counter)
            nodes[new] = ("lam", x, cur)
            cur = new
        # alias the reserved state id to the skeleton root
        nodes[nid] = nodes[cur]
        del nodes[cur]
        _repoint(nodes, cur, nid)
        return nid

    try:
        root = build(t)
    except _StateBudgetExceeded:
        return None
    return TermGraph(nodes, root)


def _repoint(nodes: dict[int, tuple], old: int, new: int):
    for nid, label in list(nodes.items()):
        match label:
            case ("lam", x, b) if b == old:
                nodes[nid] = ("lam", x, new)
            case ("app", f, a):
                if f == old or a == old:
                    nodes[nid] = ("app", new if f == old else f, new if a == old else a)


# ---------------------------------------------------------------------------
# Example terms


def _y_of(f: FiniteTerm) -> FiniteTerm:
    """(λz. f (z z)) (λz. f (z z)) for a term f."""
    z = fresh_atom(fv(f))
    half = Lam(z, App(f, App(Var(z), Var(z))))
    return App(half, half)


def gen_u() -> FiniteTerm:
    """The fixed point of λg.λx. x (g (x y)); finite, but its Böhm tree has
    ever-growing leaf fronts and is not rational.  y stays free."""
    g, x, y = Atom(0), Atom(1), Atom(2)
    f = Lam(g, Lam(x, App(Var(x), App(Var(g), App(Var(x), Var(y))))))
    return _y_of(f)


def gen_s() -> FiniteTerm:
    """The fixed point of λg.λx.λy. x g y; closed, with a rational Böhm tree."""
    g, x, y = Atom(0), Atom(1), Atom(2)
    f = Lam(g, Lam(x, Lam(y, App(App(Var(x), Var(g)), Var(y)))))
    return _y_of(f)


def gen_omega() -> FiniteTerm:
    """(λx. x x) (λx. x x): no head normal form at all."""
    x = Atom(0)
    half = Lam(x, App(Var(x), Var(x)))
    return App(half, half)
