"""Finite presentations of orbit-finite nominal sets.

A single orbit is presented by an arity k and a subgroup of the symmetric
group on the k slot positions; an element is an injective k-tuple of atoms,
taken modulo that stabilizer.  Support, action, equality and bounded-support
enumeration are all directly computable from this presentation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

from .nominal import Atom, Perm

# A slot permutation on {0..k-1}, stored as the tuple of images.
SlotPerm = tuple[int, ...]


class NotASubgroup(ValueError):
    def __init__(self, schema_id: str, reason: str):
        super().__init__(f"stabilizer of orbit {schema_id!r} is not a subgroup: {reason}")
        self.schema_id = schema_id


class ArityMismatch(ValueError):
    pass


def slot_identity(k: int) -> SlotPerm:
    return tuple(range(k))


def slot_compose(g: SlotPerm, h: SlotPerm) -> SlotPerm:
    """g after h."""
    return tuple(g[h[i]] for i in range(len(g)))


def slot_inverse(g: SlotPerm) -> SlotPerm:
    inv = [0] * len(g)
    for i, j in enumerate(g):
        inv[j] = i
    return tuple(inv)


def apply_slot_perm(g: SlotPerm, t: tuple) -> tuple:
    return tuple(t[g[i]] for i in range(len(g)))


@dataclass(frozen=True)
class OrbitSchema:
    """One orbit: injective `arity`-tuples of atoms modulo `stabilizer`."""

    id: str
    arity: int
    stabilizer: frozenset[SlotPerm] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.stabilizer is None:
            object.__setattr__(self, "stabilizer", frozenset({slot_identity(self.arity)}))

    def check(self):
        ident = slot_identity(self.arity)
        for g in self.stabilizer:
            if len(g) != self.arity or sorted(g) != list(range(self.arity)):
                raise NotASubgroup(self.id, f"{g} is not a permutation of the slots")
        if ident not in self.stabilizer:
            raise NotASubgroup(self.id, "identity missing")
        for g in self.stabilizer:
            if slot_inverse(g) not in self.stabilizer:
                raise NotASubgroup(self.id, f"inverse of {g} missing")
            for h in self.stabilizer:
                if slot_compose(g, h) not in self.stabilizer:
                    raise NotASubgroup(self.id, f"composite of {g} and {h} missing")


@dataclass(frozen=True)
class OrbitSet:
    schemas: tuple[OrbitSchema, ...]

    def __post_init__(self):
        ids = [s.id for s in self.schemas]
        if len(set(ids)) != len(ids):
            raise ValueError("schema ids must be pairwise distinct")

    def __getitem__(self, schema_id: str) -> OrbitSchema:
        for s in self.schemas:
            if s.id == schema_id:
                return s
        raise KeyError(schema_id)

    def __iter__(self):
        return iter(self.schemas)


def validate_orbit_set(schemas) -> OrbitSet:
    s = OrbitSet(tuple(schemas))
    for schema in s.schemas:
        schema.check()
    return s


class OrbitElement:
    """A schema together with an injective atom tuple, modulo the stabilizer.

    Equality and hashing go through the canonical representative: the
    lexicographically least tuple in the stabilizer class.
    """

    __slots__ = ("schema", "atoms", "_canon")

    def __init__(self, schema: OrbitSchema, atoms: tuple[Atom, ...]):
        atoms = tuple(atoms)
        if len(atoms) != schema.arity:
            raise ArityMismatch(
                f"orbit {schema.id!r} expects {schema.arity} atoms, got {len(atoms)}"
            )
        if len(set(atoms)) != len(atoms):
            raise ValueError("atom tuple entries must be pairwise distinct")
        self.schema = schema
        self.atoms = atoms
        self._canon = min(apply_slot_perm(g, atoms) for g in schema.stabilizer)

    def canonical(self) -> tuple[Atom, ...]:
        return self._canon

    def __eq__(self, other):
        return (
            isinstance(other, OrbitElement)
            and self.schema.id == other.schema.id
            and self._canon == other._canon
        )

    def __hash__(self):
        return hash((self.schema.id, self._canon))

    def support(self) -> frozenset[Atom]:
        return frozenset(self.atoms)

    def act(self, p: Perm) -> "OrbitElement":
        return OrbitElement(self.schema, tuple(p(a) for a in self.atoms))

    def __str__(self):
        return f"{self.schema.id}({','.join(map(str, self.atoms))})"

    def __repr__(self):
        return f"OrbitElement<{self}>"


def elem_eq(e1: OrbitElement, e2: OrbitElement) -> bool:
    return e1 == e2


def enumerate_support_in(s: OrbitSet, atoms) -> list[OrbitElement]:
    """All elements supported inside the given atom pool, duplicate-free.

    Order is deterministic: schemas in presentation order, elements by
    canonical tuple.
    """
    pool = sorted(set(atoms))
    out: list[OrbitElement] = []
    for schema in s.schemas:
        seen: set[OrbitElement] = set()
        for t in itertools.permutations(pool, schema.arity):
            e = OrbitElement(schema, t)
            if e not in seen:
                seen.add(e)
        out.extend(sorted(seen, key=lambda e: e.canonical()))
    return out


def count_same_support(schema: OrbitSchema, support) -> int:
    """Number of distinct orbit elements whose support is exactly the given set.

    By orbit-stabilizer this is arity! / |stabilizer|, which never exceeds
    arity!.
    """
    support = set(support)
    if len(support) != schema.arity:
        raise ArityMismatch(
            f"support size {len(support)} does not match arity {schema.arity}"
        )
    return factorial(schema.arity) // len(schema.stabilizer)
