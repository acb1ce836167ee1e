"""Orbit-finite coalgebras for the λ-tree functor and the finite construction.

A symbolic coalgebra gives the structure map schema-wise: each orbit gets a
step template over its slots.  Instantiating yields a concrete coalgebra on
elements, and `c_construct` restricts it to elements supported inside a name
pool of size m+1, producing a finite term graph that unfolds to the
represented rational λ-tree.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import factorial
from typing import Callable

from .nominal import Atom, abstraction_eq, fresh_atom, fresh_atoms, swap
from .orbits import (
    OrbitElement,
    OrbitSchema,
    OrbitSet,
    apply_slot_perm,
    enumerate_support_in,
    validate_orbit_set,
)
from .terms import BOT, App, Bot, FiniteTerm, Lam, TermGraph, Var

# FRESH marker in step views
FRESH = None

# slot assignment: tuple over target slots; each entry a source slot index or FRESH
Assignment = tuple


@dataclass(frozen=True)
class VarStep:
    source: int | Atom  # slot index, or a literal atom


@dataclass(frozen=True)
class AbsStep:
    binder: int | None  # slot index, or FRESH
    target_schema: str
    assignment: Assignment


@dataclass(frozen=True)
class AppStep:
    left_schema: str
    left_assignment: Assignment
    right_schema: str
    right_assignment: Assignment


StepView = VarStep | AbsStep | AppStep


@dataclass(frozen=True)
class SymbolicCoalgebra:
    carrier: OrbitSet
    steps: dict[str, StepView]

    def element(self, schema_id: str, atoms) -> OrbitElement:
        return OrbitElement(self.carrier[schema_id], tuple(atoms))


@dataclass(frozen=True)
class ConcreteStepVar:
    atom: Atom


@dataclass(frozen=True)
class ConcreteStepAbs:
    binder: Atom
    body: object


@dataclass(frozen=True)
class ConcreteStepApp:
    left: object
    right: object


@dataclass
class ConcreteCoalgebra:
    """A total step function on elements, with a bound on support sizes."""

    step_fn: Callable
    support_bound: int


class InvalidCoalgebra(ValueError):
    pass


class SupportTooLarge(ValueError):
    def __init__(self, elem):
        super().__init__(f"element {elem} exceeds the support bound")
        self.elem = elem


class EscapesCarrier(ValueError):
    def __init__(self, elem):
        super().__init__(f"step target {elem} lies outside the restricted carrier")
        self.elem = elem


# ---------------------------------------------------------------------------
# Validation and instantiation


def _check_assignment(schema: OrbitSchema, target: OrbitSchema, assignment: Assignment,
                      allow_fresh: bool):
    if len(assignment) != target.arity:
        raise InvalidCoalgebra(
            f"step of {schema.id!r}: assignment length {len(assignment)} "
            f"does not match arity of {target.id!r}"
        )
    slots = [s for s in assignment if s is not FRESH]
    if len(assignment) - len(slots) > (1 if allow_fresh else 0):
        raise InvalidCoalgebra(f"step of {schema.id!r}: more than one FRESH slot")
    if not allow_fresh and len(slots) != len(assignment):
        raise InvalidCoalgebra(f"step of {schema.id!r}: FRESH not allowed here")
    for s in slots:
        if not 0 <= s < schema.arity:
            raise InvalidCoalgebra(f"step of {schema.id!r}: slot {s} out of range")
    if len(set(slots)) != len(slots):
        raise InvalidCoalgebra(f"step of {schema.id!r}: assignment not injective")


def _step_of_tuple(c: SymbolicCoalgebra, schema: OrbitSchema, atoms: tuple[Atom, ...]):
    """Instantiate the schema's step view at a concrete atom tuple."""
    view = c.steps[schema.id]
    match view:
        case VarStep(source=src):
            return ConcreteStepVar(atoms[src] if isinstance(src, int) else src)
        case AppStep(left_schema=ls, left_assignment=la,
                     right_schema=rs, right_assignment=ra):
            left = OrbitElement(c.carrier[ls], tuple(atoms[s] for s in la))
            right = OrbitElement(c.carrier[rs], tuple(atoms[s] for s in ra))
            return ConcreteStepApp(left, right)
        case AbsStep(binder=binder, target_schema=ts, assignment=asg):
            if binder is FRESH:
                v = fresh_atom(atoms)
            else:
                v = atoms[binder]
            body = OrbitElement(
                c.carrier[ts], tuple(v if s is FRESH else atoms[s] for s in asg)
            )
            return ConcreteStepAbs(v, body)
    raise InvalidCoalgebra(f"unknown step view {view!r}")


def validate_coalgebra(c: SymbolicCoalgebra) -> SymbolicCoalgebra:
    """Check slot sanity and well-definedness under every stabilizer member."""
    validate_orbit_set(c.carrier.schemas)
    for schema in c.carrier:
        if schema.id not in c.steps:
            raise InvalidCoalgebra(f"orbit {schema.id!r} has no step")
        view = c.steps[schema.id]
        match view:
            case VarStep(source=src):
                if isinstance(src, int) and not 0 <= src < schema.arity:
                    raise InvalidCoalgebra(f"step of {schema.id!r}: slot {src} out of range")
            case AppStep(left_schema=ls, left_assignment=la,
                         right_schema=rs, right_assignment=ra):
                _check_assignment(schema, c.carrier[ls], la, allow_fresh=False)
                _check_assignment(schema, c.carrier[rs], ra, allow_fresh=False)
            case AbsStep(binder=b, target_schema=ts, assignment=asg):
                if b is not FRESH and not 0 <= b < schema.arity:
                    raise InvalidCoalgebra(f"step of {schema.id!r}: binder slot {b} out of range")
                _check_assignment(schema, c.carrier[ts], asg, allow_fresh=True)
        # well-definedness on the stabilizer quotient, checked exhaustively
        base = tuple(Atom(i) for i in range(schema.arity))
        s0 = _step_of_tuple(c, schema, base)
        for g in schema.stabilizer:
            sg = _step_of_tuple(c, schema, apply_slot_perm(g, base))
            if not _steps_agree(s0, sg):
                raise InvalidCoalgebra(
                    f"step of {schema.id!r} is not well-defined under stabilizer {g}"
                )
    return c


def _steps_agree(s1, s2) -> bool:
    match (s1, s2):
        case (ConcreteStepVar(atom=a), ConcreteStepVar(atom=b)):
            return a == b
        case (ConcreteStepApp(left=l1, right=r1), ConcreteStepApp(left=l2, right=r2)):
            return l1 == l2 and r1 == r2
        case (ConcreteStepAbs(binder=v1, body=b1), ConcreteStepAbs(binder=v2, body=b2)):
            return abstraction_eq(v1, b1, v2, b2)
        case _:
            return False


def instantiate(c: SymbolicCoalgebra) -> ConcreteCoalgebra:
    validate_coalgebra(c)
    m = max((s.arity for s in c.carrier), default=0)

    def step_fn(e: OrbitElement):
        return _step_of_tuple(c, e.schema, e.atoms)

    return ConcreteCoalgebra(step_fn, m)


# ---------------------------------------------------------------------------
# The finite-representation construction


def size_bound(n: int, m: int) -> int:
    """Bound on the number of elements supported inside an (m+1)-atom pool."""
    return n * factorial(m + 1)


def c_construct(conc: ConcreteCoalgebra, root, carrier: OrbitSet | None = None) -> TermGraph:
    """Materialize the behavior of an element as a finite term graph.

    The name pool W is the support of the root padded with least fresh atoms
    to m+1 names, so every element has some name in W fresh for it.  With a
    carrier given, the node set is every carrier element supported in W;
    without one, only the part reachable from the root is built.
    """
    m = conc.support_bound
    if len(root.support()) > m:
        raise SupportTooLarge(root)
    pad = fresh_atoms(root.support(), m + 1 - len(root.support()))
    W = frozenset(root.support()) | frozenset(pad)

    ids: dict = {}
    nodes: dict[int, tuple] = {}
    pending: list = []

    enumerative = carrier is not None

    def node_id(e, from_step: bool):
        if len(e.support()) > m:
            raise SupportTooLarge(e)
        if e in ids:
            return ids[e]
        if enumerative and from_step:
            raise EscapesCarrier(e)
        ids[e] = len(ids)
        pending.append(e)
        return ids[e]

    if enumerative:
        for e in enumerate_support_in(carrier, W):
            node_id(e, from_step=False)
        if root not in ids:
            raise EscapesCarrier(root)
    else:
        node_id(root, from_step=False)

    while pending:
        e = pending.pop(0)
        nid = ids[e]
        step = conc.step_fn(e)
        match step:
            case ConcreteStepVar(atom=a):
                nodes[nid] = ("var", a)
            case ConcreteStepApp(left=l, right=r):
                nodes[nid] = ("app", node_id(l, True), node_id(r, True))
            case ConcreteStepAbs(binder=v, body=body):
                free_in_w = W - e.support()
                if not free_in_w:
                    raise SupportTooLarge(e)
                w = min(free_in_w)
                y = body if v == w else body.act(swap(v, w))
                nodes[nid] = ("lam", w, node_id(y, True))
            case other:
                raise InvalidCoalgebra(f"unknown concrete step {other!r}")

    return TermGraph(nodes, ids[root])


def naive_unfold(conc: ConcreteCoalgebra, root, depth: int) -> FiniteTerm:
    """Corecursive unfolding with globally fresh binder names; truncates at depth.

    Independent oracle for c_construct: it never reuses a binder name, so it
    exercises none of the name-pool bookkeeping.
    """
    top = max((a.index for a in root.support()), default=-1)
    counter = itertools.count(top + conc.support_bound + 2)

    def go(e, d: int) -> FiniteTerm:
        if d <= 0:
            return BOT
        step = conc.step_fn(e)
        match step:
            case ConcreteStepVar(atom=a):
                return Var(a)
            case ConcreteStepApp(left=l, right=r):
                return App(go(l, d - 1), go(r, d - 1))
            case ConcreteStepAbs(binder=v, body=body):
                u = Atom(next(counter))
                return Lam(u, go(body.act(swap(v, u)), d - 1))

    return go(root, depth)


# ---------------------------------------------------------------------------
# Term graph -> symbolic coalgebra (one orbit per node)


def graph_to_coalgebra(g: TermGraph) -> tuple[SymbolicCoalgebra, OrbitElement]:
    """Present a term graph as an orbit-finite coalgebra plus a root element.

    Each reachable node becomes one trivial-stabilizer orbit whose slots are
    the node's free variables in sorted order.
    """
    fvs = g.fv_map()
    order = g.reachable()
    schemas = {}
    for n in order:
        slots = tuple(sorted(fvs[n]))
        schemas[n] = (OrbitSchema(f"n{n}", len(slots)), slots)

    def slot_of(n: int, a: Atom) -> int:
        return schemas[n][1].index(a)

    steps: dict[str, StepView] = {}
    for n in order:
        match g.nodes[n]:
            case ("var", a):
                steps[f"n{n}"] = VarStep(slot_of(n, a))
            case ("bot",):
                raise ValueError("⊥ nodes have no step in the λ-tree functor")
            case ("app", f, a):
                steps[f"n{n}"] = AppStep(
                    f"n{f}", tuple(slot_of(n, b) for b in schemas[f][1]),
                    f"n{a}", tuple(slot_of(n, b) for b in schemas[a][1]),
                )
            case ("lam", x, b):
                asg = tuple(
                    FRESH if a == x else slot_of(n, a) for a in schemas[b][1]
                )
                steps[f"n{n}"] = AbsStep(FRESH, f"n{b}", asg)

    carrier = OrbitSet(tuple(schemas[n][0] for n in order))
    sym = SymbolicCoalgebra(carrier, steps)
    root = OrbitElement(schemas[g.root][0], schemas[g.root][1])
    return sym, root


# ---------------------------------------------------------------------------
# Example generators


def gen_pair() -> tuple[SymbolicCoalgebra, OrbitElement]:
    """Two orbits: single variables, and ordered pairs of distinct variables."""
    var = OrbitSchema("var", 1)
    pair = OrbitSchema("pair", 2)
    carrier = OrbitSet((var, pair))
    steps = {
        "var": VarStep(0),
        "pair": AppStep("var", (0,), "var", (1,)),
    }
    sym = SymbolicCoalgebra(carrier, steps)
    return sym, OrbitElement(pair, (Atom(0), Atom(1)))


def gen_rsigma(levels: int) -> TermGraph:
    """The family of application-only trees whose subtrees realize every
    permutation of m = 2^(levels-1) variables; root at the identity."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if levels > 4:
        raise ValueError("levels > 4 is not desk-scale")
    m = 2 ** (levels - 1)
    base = tuple(Atom(i) for i in range(1, m + 1))

    nodes: dict[int, tuple] = {}
    counter = itertools.count()
    fronts = list(itertools.permutations(base))
    r_id = {f: next(counter) for f in fronts}
    h_id = {f: next(counter) for f in fronts}

    bin_memo: dict[tuple[Atom, ...], int] = {}

    def bin_node(front: tuple[Atom, ...]) -> int:
        if front in bin_memo:
            return bin_memo[front]
        nid = next(counter)
        bin_memo[front] = nid
        if len(front) == 1:
            nodes[nid] = ("var", front[0])
        else:
            h = len(front) // 2
            nodes[nid] = ("app", bin_node(front[:h]), bin_node(front[h:]))
        return nid

    for f in fronts:
        transposed = (f[1], f[0]) + f[2:] if m >= 2 else f
        rotated = f[1:] + f[:1]
        nodes[h_id[f]] = ("app", r_id[transposed], r_id[rotated])
        nodes[r_id[f]] = ("app", h_id[f], bin_node(f))

    return TermGraph(nodes, r_id[base])


def rsigma_count(levels: int) -> int:
    """Closed form for the number of distinct subtrees of gen_rsigma."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    m = 2 ** (levels - 1)
    return 2 * factorial(m) + sum(
        factorial(m) // factorial(m - 2 ** (i - 1)) for i in range(1, levels + 1)
    )


# ---------------------------------------------------------------------------
# Orbit counting on term graphs


def orbit_count(g: TermGraph) -> int:
    """Number of orbits among the distinct subtrees of g's unfolding.

    Two subtrees are in the same orbit iff some renaming of their free
    variables makes them α-equivalent.  The graph is minimized first, so the
    count is over distinct subtrees, not over nodes.
    """
    from .terms import _bisim_from, minimize

    gm = minimize(g)
    fvs = gm.fv_map()
    reps: list[int] = []
    for n in gm.reachable():
        if not any(_same_orbit(gm, fvs, n, r) for r in reps):
            reps.append(n)
    return len(reps)


def _same_orbit(g: TermGraph, fvs, n1: int, n2: int) -> bool:
    from .terms import _bisim_from

    a1, a2 = sorted(fvs[n1]), sorted(fvs[n2])
    if len(a1) != len(a2):
        return False
    if _label_kind(g.nodes[n1]) != _label_kind(g.nodes[n2]):
        return False
    for image in itertools.permutations(a2):
        rho = frozenset(zip(a1, image))
        if _bisim_from(g, n1, g, n2, rho):
            return True
    return False


def _label_kind(label: tuple) -> str:
    return label[0]


# ---------------------------------------------------------------------------
# Text format


_ORBIT_RE = re.compile(r"orbit\s+(\S+)\s+arity=(\d+)\s+stab=(.+)")
_STEP_RE = re.compile(r"step\s+(\S+)\s*=\s*(var|app|abs)\s*(.*)")
_TARGET_RE = re.compile(r"(\S+?)\(([^)]*)\)")


def _parse_slot_perm(text: str, arity: int) -> tuple[int, ...]:
    perm = list(range(arity))
    for cyc in re.findall(r"\(([^)]*)\)", text):
        entries = [int(x) - 1 for x in cyc.split()]
        for i, src in enumerate(entries):
            perm[src] = entries[(i + 1) % len(entries)]
    return tuple(perm)


def _parse_assignment(text: str) -> Assignment:
    if not text.strip():
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        out.append(FRESH if part == "fresh" else int(part) - 1)
    return tuple(out)


def parse_coalgebra(text: str) -> SymbolicCoalgebra:
    schemas: list[OrbitSchema] = []
    steps: dict[str, StepView] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if m := _ORBIT_RE.fullmatch(line):
            sid, arity, stab = m.group(1), int(m.group(2)), m.group(3).strip()
            if stab == "trivial":
                schema = OrbitSchema(sid, arity)
            else:
                perms = {_parse_slot_perm(p, arity) for p in stab.split(";")}
                perms.add(tuple(range(arity)))
                schema = OrbitSchema(sid, arity, frozenset(perms))
            schemas.append(schema)
        elif m := _STEP_RE.fullmatch(line):
            sid, kind, rest = m.group(1), m.group(2), m.group(3).strip()
            if kind == "var":
                steps[sid] = VarStep(int(rest) - 1)
            elif kind == "app":
                targets = _TARGET_RE.findall(rest)
                if len(targets) != 2:
                    raise InvalidCoalgebra(f"bad app step: {line!r}")
                (ls, la), (rs, ra) = targets
                steps[sid] = AppStep(ls, _parse_assignment(la), rs, _parse_assignment(ra))
            else:
                parts = rest.split(None, 1)
                if len(parts) != 2:
                    raise InvalidCoalgebra(f"bad abs step: {line!r}")
                binder = FRESH if parts[0] == "fresh" else int(parts[0]) - 1
                tm = _TARGET_RE.fullmatch(parts[1].strip())
                if not tm:
                    raise InvalidCoalgebra(f"bad abs step: {line!r}")
                steps[sid] = AbsStep(binder, tm.group(1), _parse_assignment(tm.group(2)))
        else:
            raise InvalidCoalgebra(f"unrecognized line: {line!r}")
    return SymbolicCoalgebra(validate_orbit_set(schemas), steps)


def print_coalgebra(c: SymbolicCoalgebra) -> str:
    def cycle_str(g: tuple[int, ...]) -> str:
        seen, cycles = set(), []
        for i in range(len(g)):
            if i in seen or g[i] == i:
                seen.add(i)
                continue
            cyc = [i]
            seen.add(i)
            j = g[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = g[j]
            cycles.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
        return "".join(cycles)

    def asg_str(asg: Assignment) -> str:
        return ",".join("fresh" if s is FRESH else str(s + 1) for s in asg)

    lines = []
    for s in c.carrier:
        nontrivial = [g for g in sorted(s.stabilizer) if g != tuple(range(s.arity))]
        stab = ";".join(cycle_str(g) for g in nontrivial) if nontrivial else "trivial"
        lines.append(f"orbit {s.id} arity={s.arity} stab={stab}")
    for s in c.carrier:
        view = c.steps[s.id]
        match view:
            case VarStep(source=src):
                lines.append(f"step {s.id} = var {src + 1}")
            case AppStep(left_schema=ls, left_assignment=la,
                         right_schema=rs, right_assignment=ra):
                lines.append(f"step {s.id} = app {ls}({asg_str(la)}) {rs}({asg_str(ra)})")
            case AbsStep(binder=b, target_schema=ts, assignment=asg):
                bs = "fresh" if b is FRESH else str(b + 1)
                lines.append(f"step {s.id} = abs {bs} {ts}({asg_str(asg)})")
    return "\n".join(lines) + "\n"


def parse_root(text: str, c: SymbolicCoalgebra) -> OrbitElement:
    m = _TARGET_RE.fullmatch(text.strip())
    if not m:
        raise InvalidCoalgebra(f"bad root element: {text!r}")
    sid, atoms = m.group(1), m.group(2)
    names = [a.strip() for a in atoms.split(",")] if atoms.strip() else []
    parsed = []
    for name in names:
        am = re.fullmatch(r"v(\d+)", name)
        if not am:
            raise InvalidCoalgebra(f"bad atom {name!r} in root element")
        parsed.append(Atom(int(am.group(1))))
    return OrbitElement(c.carrier[sid], tuple(parsed))
