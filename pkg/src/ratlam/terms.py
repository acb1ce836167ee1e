"""Finite λ⊥-terms, μ-term syntax, rational term graphs and α-equivalence.

Two decision procedures for α-equivalence live here: the structural one on
finite terms (via abstraction equality at each binder) and the bisimulation
one on term graphs, which decides α-equivalence of the infinite unfoldings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .nominal import Atom, Perm, abstraction_eq, fresh_atom, swap

# ---------------------------------------------------------------------------
# Term syntax


@dataclass(frozen=True)
class Var:
    atom: Atom

    def act(self, p: Perm) -> "Var":
        return Var(p(self.atom))

    def support(self) -> frozenset[Atom]:
        return frozenset({self.atom})

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class Bot:
    def act(self, p: Perm) -> "Bot":
        return self

    def support(self) -> frozenset[Atom]:
        return frozenset()

    def __str__(self):
        return print_term(self)


BOT = Bot()


@dataclass(frozen=True)
class Lam:
    binder: Atom
    body: "FiniteTerm"

    def act(self, p: Perm) -> "Lam":
        return Lam(p(self.binder), self.body.act(p))

    def support(self) -> frozenset[Atom]:
        return fv(self)

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class App:
    fn: "FiniteTerm"
    arg: "FiniteTerm"

    def act(self, p: Perm) -> "App":
        return App(self.fn.act(p), self.arg.act(p))

    def support(self) -> frozenset[Atom]:
        return fv(self)

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class Mu:
    label: str
    body: "MuTerm"

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class Ref:
    label: str

    def __str__(self):
        return print_term(self)


FiniteTerm = Var | Bot | Lam | App
MuTerm = Var | Bot | Lam | App | Mu | Ref


@lru_cache(maxsize=None)
def fv(t: MuTerm) -> frozenset[Atom]:
    """Free variables; μ-references contribute nothing by themselves."""
    match t:
        case Var(a):
            return frozenset({a})
        case Bot() | Ref(_):
            return frozenset()
        case Lam(x, b):
            return fv(b) - {x}
        case App(f, a):
            return fv(f) | fv(a)
        case Mu(_, b):
            return fv(b)
    raise TypeError(f"not a term: {t!r}")


def is_finite(t: MuTerm) -> bool:
    match t:
        case Mu(_, _) | Ref(_):
            return False
        case Lam(_, b):
            return is_finite(b)
        case App(f, a):
            return is_finite(f) and is_finite(a)
    return True


# ---------------------------------------------------------------------------
# Parsing


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnboundRef(ValueError):
    def __init__(self, label: str):
        super().__init__(f"reference #{label} is not enclosed by a matching mu")
        self.label = label


class UnguardedMu(ValueError):
    def __init__(self, label: str):
        super().__init__(f"mu {label} is unguarded: a reference occurs under no constructor")
        self.label = label


class Interner:
    """Maps identifiers to atoms.

    Identifiers of the shape v<digits> map to that atom directly; any other
    identifier gets the least atom index not yet in use.  Sharing one
    interner across several parses keeps distinct names distinct.
    """

    def __init__(self):
        self._by_name: dict[str, Atom] = {}
        self._used: set[int] = set()

    def reserve(self, text: str):
        """Pre-claim every v<digits> identifier occurring in text."""
        for m in re.finditer(r"\bv(\d+)\b", text):
            self._used.add(int(m.group(1)))

    def atom(self, name: str) -> Atom:
        if name in self._by_name:
            return self._by_name[name]
        m = re.fullmatch(r"v(\d+)", name)
        if m:
            idx = int(m.group(1))
        else:
            idx = 0
            while idx in self._used:
                idx += 1
        self._used.add(idx)
        a = Atom(idx)
        self._by_name[name] = a
        return a

    def table(self) -> dict[str, Atom]:
        return dict(self._by_name)


_TOKEN = re.compile(
    r"\s*(?:(?P<lam>\\|λ)|(?P<mu>μ|\bmu\b)|(?P<bot>⊥|_\|_)"
    r"|(?P<ref>#[a-zA-Z][a-zA-Z0-9']*)|(?P<ident>[a-zA-Z][a-zA-Z0-9']*)"
    r"|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\)))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise TermSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, interner: Interner):
        self.tokens = tokens
        self.i = 0
        self.interner = interner

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise TermSyntaxError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def term(self) -> MuTerm:
        kind, _, _ = self.peek()
        if kind == "lam":
            self.next()
            name = self.expect("ident")[1]
            self.expect("dot")
            return Lam(self.interner.atom(name), self.term())
        if kind == "mu":
            self.next()
            label = self.expect("ident")[1]
            self.expect("dot")
            return Mu(label, self.term())
        return self.application()

    def application(self) -> MuTerm:
        t = self.atom_term()
        while self.peek()[0] in ("ident", "bot", "ref", "lp", "mu"):
            t = App(t, self.atom_term())
        return t

    def atom_term(self) -> MuTerm:
        kind, value, pos = self.next()
        if kind == "ident":
            return Var(self.interner.atom(value))
        if kind == "bot":
            return BOT
        if kind == "ref":
            return Ref(value[1:])
        if kind == "mu":
            label = self.expect("ident")[1]
            self.expect("dot")
            return Mu(label, self.term())
        if kind == "lp":
            t = self.term()
            self.expect("rp")
            return t
        raise TermSyntaxError(f"unexpected token {value!r}", pos)


def check_muterm(t: MuTerm, bound: frozenset[str] = frozenset(), guarded: frozenset[str] = frozenset()):
    """Check that refs are bound and every mu is guarded by a Lam or App."""
    match t:
        case Mu(l, b):
            check_muterm(b, bound | {l}, guarded - {l})
        case Ref(l):
            if l not in bound:
                raise UnboundRef(l)
            if l not in guarded:
                raise UnguardedMu(l)
        case Lam(_, b):
            check_muterm(b, bound, bound)
        case App(f, a):
            check_muterm(f, bound, bound)
            check_muterm(a, bound, bound)
        case _:
            pass


def parse_term(text: str, interner: Interner | None = None) -> MuTerm:
    if interner is None:
        interner = Interner()
    interner.reserve(text)
    p = _Parser(_tokenize(text), interner)
    t = p.term()
    p.expect("eof")
    check_muterm(t)
    return t


# ---------------------------------------------------------------------------
# Pretty printing (ASCII form of the same grammar)


def _atom_name(a: Atom) -> str:
    return f"v{a.index}"


def print_term(t: MuTerm) -> str:
    def go(t: MuTerm, ctx: str) -> str:
        # ctx: 'top' (binder bodies), 'fn' (left of application), 'arg'
        match t:
            case Var(a):
                return _atom_name(a)
            case Bot():
                return "_|_"
            case Ref(l):
                return f"#{l}"
            case Lam(x, b):
                s = f"\\{_atom_name(x)}. {go(b, 'top')}"
                return s if ctx == "top" else f"({s})"
            case Mu(l, b):
                s = f"mu {l}. {go(b, 'top')}"
                return s if ctx == "top" else f"({s})"
            case App(f, a):
                s = f"{go(f, 'fn')} {go(a, 'arg')}"
                return f"({s})" if ctx == "arg" else s
        raise TypeError(f"not a term: {t!r}")

    return go(t, "top")


# ---------------------------------------------------------------------------
# Term graphs


class TermGraph:
    """A rooted finite system of Var/Bot/Lam/App nodes with child references.

    Node labels are tuples: ('var', Atom) | ('bot',) | ('lam', Atom, nid)
    | ('app', nid, nid).  The graph is the finite representation of the
    rational λ-tree obtained as its infinite unfolding.
    """

    def __init__(self, nodes: dict[int, tuple], root: int):
        for nid, label in nodes.items():
            for child in _children(label):
                if child not in nodes:
                    raise ValueError(f"node {nid} references missing node {child}")
        if root not in nodes:
            raise ValueError("root node missing")
        self.nodes = dict(nodes)
        self.root = root
        self._fv: dict[int, frozenset[Atom]] | None = None

    def reachable(self) -> list[int]:
        seen: list[int] = []
        stack = [self.root]
        visited = set()
        while stack:
            n = stack.pop()
            if n in visited:
                continue
            visited.add(n)
            seen.append(n)
            stack.extend(reversed(_children(self.nodes[n])))
        return seen

    def fv_map(self) -> dict[int, frozenset[Atom]]:
        """Free variables per node: least fixpoint of the structural equations."""
        if self._fv is not None:
            return self._fv
        fvs: dict[int, frozenset[Atom]] = {n: frozenset() for n in self.nodes}
        changed = True
        while changed:
            changed = False
            for n, label in self.nodes.items():
                match label:
                    case ("var", a):
                        new = frozenset({a})
                    case ("bot",):
                        new = frozenset()
                    case ("lam", x, b):
                        new = fvs[b] - {x}
                    case ("app", f, a):
                        new = fvs[f] | fvs[a]
                if new != fvs[n]:
                    fvs[n] = new
                    changed = True
        self._fv = fvs
        return fvs

    def support(self) -> frozenset[Atom]:
        return self.fv_map()[self.root]

    def all_atoms(self) -> frozenset[Atom]:
        out: set[Atom] = set()
        for label in self.nodes.values():
            match label:
                case ("var", a) | ("lam", a, _):
                    out.add(a)
        return frozenset(out)

    def act(self, p: Perm) -> "TermGraph":
        """Rename every atom occurrence, binders and leaves alike."""
        def rn(label):
            match label:
                case ("var", a):
                    return ("var", p(a))
                case ("lam", x, b):
                    return ("lam", p(x), b)
                case other:
                    return other

        return TermGraph({n: rn(l) for n, l in self.nodes.items()}, self.root)

    def __str__(self):
        return print_graph(self)

    def __repr__(self):
        return f"TermGraph<{print_graph(self)}>"


def _children(label: tuple) -> tuple[int, ...]:
    match label:
        case ("lam", _, b):
            return (b,)
        case ("app", f, a):
            return (f, a)
        case _:
            return ()


def graph_of(t: MuTerm) -> TermGraph:
    """One node per constructor; μ nodes are elided into back references."""
    nodes: dict[int, tuple] = {}
    counter = iter(range(10**9))

    def go(t: MuTerm, env: dict[str, int], nid: int | None = None) -> int:
        match t:
            case Mu(l, b):
                if nid is None:
                    nid = next(counter)
                return go(b, {**env, l: nid}, nid)
            case Ref(l):
                return env[l]
            case _:
                if nid is None:
                    nid = next(counter)
                match t:
                    case Var(a):
                        nodes[nid] = ("var", a)
                    case Bot():
                        nodes[nid] = ("bot",)
                    case Lam(x, b):
                        nodes[nid] = ("lam", x, go(b, env))
                    case App(f, a):
                        nodes[nid] = ("app", go(f, env), go(a, env))
                return nid

    root = go(t, {})
    return TermGraph(nodes, root)


def print_graph(g: TermGraph) -> str:
    """Print a graph as a μ-term, one μ per shared or cyclic node."""
    order = g.reachable()
    indeg: dict[int, int] = {n: 0 for n in order}
    for n in order:
        for c in _children(g.nodes[n]):
            if c in indeg:
                indeg[c] += 1
    cyclic = _cyclic_nodes(g, order)
    candidates = {n for n in order if indeg[n] > 1 or n in cyclic}

    # first pass: find which candidate nodes are actually re-entered
    used: set[int] = set()
    emitted: set[int] = set()

    def scan(n: int):
        if n in candidates and n in emitted:
            used.add(n)
            return
        emitted.add(n)
        for c in _children(g.nodes[n]):
            scan(c)

    scan(g.root)
    labels = {n: f"r{i}" for i, n in enumerate(n for n in order if n in used)}

    emitted = set()

    def go(n: int) -> MuTerm:
        if n in labels and n in emitted:
            return Ref(labels[n])
        emitted.add(n)
        match g.nodes[n]:
            case ("var", a):
                body: MuTerm = Var(a)
            case ("bot",):
                body = BOT
            case ("lam", x, b):
                body = Lam(x, go(b))
            case ("app", f, a):
                body = App(go(f), go(a))
        if n in labels:
            return Mu(labels[n], body)
        return body

    return print_term(go(g.root))


def _cyclic_nodes(g: TermGraph, order) -> set[int]:
    """Nodes that can reach themselves."""
    reach: dict[int, set[int]] = {n: set(_children(g.nodes[n])) for n in order}
    changed = True
    while changed:
        changed = False
        for n in order:
            new = set(reach[n])
            for c in list(reach[n]):
                new |= reach.get(c, set())
            if new != reach[n]:
                reach[n] = new
                changed = True
    return {n for n in order if n in reach[n]}


# ---------------------------------------------------------------------------
# Truncation


def truncate(g: TermGraph | FiniteTerm, depth: int) -> FiniteTerm:
    """Cut the unfolding at the given depth, replacing cut subtrees by ⊥.

    The root sits at depth 0, so truncate(·, 0) is ⊥.
    """
    if isinstance(g, TermGraph):
        memo: dict[tuple[int, int], FiniteTerm] = {}

        def go(n: int, d: int) -> FiniteTerm:
            if d <= 0:
                return BOT
            key = (n, d)
            if key in memo:
                return memo[key]
            match g.nodes[n]:
                case ("var", a):
                    out: FiniteTerm = Var(a)
                case ("bot",):
                    out = BOT
                case ("lam", x, b):
                    out = Lam(x, go(b, d - 1))
                case ("app", f, a):
                    out = App(go(f, d - 1), go(a, d - 1))
            memo[key] = out
            return out

        return go(g.root, depth)

    def got(t: FiniteTerm, d: int) -> FiniteTerm:
        if d <= 0:
            return BOT
        match t:
            case Var(_) | Bot():
                return t
            case Lam(x, b):
                return Lam(x, got(b, d - 1))
            case App(f, a):
                return App(got(f, d - 1), got(a, d - 1))
        raise TypeError(f"truncate expects a finite term or graph, got {t!r}")

    return got(g, depth)


# ---------------------------------------------------------------------------
# α-equivalence, finite terms


def alpha_eq_finite(t1: FiniteTerm, t2: FiniteTerm) -> bool:
    """α-equivalence of finite λ⊥-terms; ⊥ is equal only to ⊥."""
    match (t1, t2):
        case (Var(a), Var(b)):
            return a == b
        case (Bot(), Bot()):
            return True
        case (App(f1, a1), App(f2, a2)):
            return alpha_eq_finite(f1, f2) and alpha_eq_finite(a1, a2)
        case (Lam(x1, b1), Lam(x2, b2)):
            return abstraction_eq(x1, b1, x2, b2, eq=alpha_eq_finite)
        case _:
            return False


# ---------------------------------------------------------------------------
# α-equivalence of unfoldings: bisimulation on term graphs


def alpha_bisim(g1: TermGraph, g2: TermGraph) -> bool:
    """True iff the infinite unfoldings of g1 and g2 are α-equivalent.

    Free variables are concrete names, so the initial correspondence is the
    identity on the shared free variables.
    """
    if g1.fv_map()[g1.root] != g2.fv_map()[g2.root]:
        return False
    rho0 = frozenset((a, a) for a in g1.fv_map()[g1.root])
    return _bisim_from(g1, g1.root, g2, g2.root, rho0)


def _bisim_from(g1: TermGraph, n1: int, g2: TermGraph, n2: int,
                rho0: frozenset[tuple[Atom, Atom]]) -> bool:
    """Greatest fixpoint over (node, node, injection) triples.

    The candidate relation is uniquely determined at every state, so
    assume-and-check with a memoized assumption set is a sound and complete
    decision procedure on the finite state space.
    """
    fv1, fv2 = g1.fv_map(), g2.fv_map()
    assumed: set[tuple] = set()

    def check(n1: int, n2: int, rho: frozenset[tuple[Atom, Atom]]) -> bool:
        state = (n1, n2, rho)
        if state in assumed:
            return True
        dom = frozenset(a for a, _ in rho)
        img = {b for _, b in rho}
        if dom != fv1[n1] or img != fv2[n2] or len(img) != len(rho):
            return False
        assumed.add(state)
        rmap = dict(rho)
        match (g1.nodes[n1], g2.nodes[n2]):
            case (("var", a), ("var", b)):
                return rmap[a] == b
            case (("bot",), ("bot",)):
                return True
            case (("app", f1, a1), ("app", f2, a2)):
                return check(f1, f2, _restrict(rho, fv1[f1])) and check(
                    a1, a2, _restrict(rho, fv1[a1])
                )
            case (("lam", x1, b1), ("lam", x2, b2)):
                pairs = {(a, b) for a, b in rho if a in fv1[b1] and a != x1}
                if any(b == x2 for _, b in pairs):
                    return False  # free name would be captured
                if x1 in fv1[b1]:
                    pairs.add((x1, x2))
                return check(b1, b2, frozenset(pairs))
            case _:
                return False

    return check(n1, n2, rho0)


def _restrict(rho: frozenset[tuple[Atom, Atom]], dom: frozenset[Atom]):
    return frozenset((a, b) for a, b in rho if a in dom)


def alpha_bisim_renaming(g1: TermGraph, g2: TermGraph, rho: dict[Atom, Atom]) -> bool:
    """α-bisimulation with an explicit free-variable correspondence."""
    return _bisim_from(g1, g1.root, g2, g2.root, frozenset(rho.items()))


# ---------------------------------------------------------------------------
# Subtree counting and minimization (literal labeled-tree equality)


def _literal_classes(g: TermGraph) -> dict[int, int]:
    """Partition refinement: greatest bisimulation under literal label equality."""
    order = g.reachable()
    cls = {n: _label_key(g.nodes[n]) for n in order}
    while True:
        sig = {
            n: (cls[n], tuple(cls[c] for c in _children(g.nodes[n]))) for n in order
        }
        renum: dict[tuple, int] = {}
        new = {}
        for n in order:
            if sig[n] not in renum:
                renum[sig[n]] = len(renum)
            new[n] = renum[sig[n]]
        if new == cls:
            return new
        cls = new


def _label_key(label: tuple):
    match label:
        case ("var", a):
            return ("var", a)
        case ("bot",):
            return ("bot",)
        case ("lam", x, _):
            return ("lam", x)
        case ("app", _, _):
            return ("app",)


def subtree_count(g: TermGraph) -> int:
    """Number of distinct subtrees of the unfolding, as literal labeled trees."""
    return len(set(_literal_classes(g).values()))


def minimize(g: TermGraph) -> TermGraph:
    """Merge nodes with literally equal unfoldings; one node per subtree."""
    cls = _literal_classes(g)
    nodes: dict[int, tuple] = {}
    for n in g.reachable():
        c = cls[n]
        if c in nodes:
            continue
        match g.nodes[n]:
            case ("var", a):
                nodes[c] = ("var", a)
            case ("bot",):
                nodes[c] = ("bot",)
            case ("lam", x, b):
                nodes[c] = ("lam", x, cls[b])
            case ("app", f, a):
                nodes[c] = ("app", cls[f], cls[a])
    return TermGraph(nodes, cls[g.root])


# ---------------------------------------------------------------------------
# Direct μ-term unfolding (oracle for graph_of + truncate)


def unfold_muterm(t: MuTerm, depth: int) -> FiniteTerm:
    """Unfold by substituting Mu bodies for refs, cutting at the given depth."""

    def go(t: MuTerm, env: dict[str, MuTerm], d: int) -> FiniteTerm:
        if d <= 0:
            return BOT
        match t:
            case Mu(l, b):
                return go(b, {**env, l: t}, d)
            case Ref(l):
                return go(env[l], env, d)
            case Var(_) | Bot():
                return t
            case Lam(x, b):
                return Lam(x, go(b, env, d - 1))
            case App(f, a):
                return App(go(f, env, d - 1), go(a, env, d - 1))

    return go(t, {}, depth)
