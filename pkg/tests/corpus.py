"""Seeded random knowledge bases for differential testing."""

from __future__ import annotations

import random

from tableau_kb.model import (
    TOP,
    BOTTOM,
    And,
    AsymmetricRole,
    AtLeast,
    AtMost,
    Atomic,
    ConceptAssertion,
    ConceptInclusion,
    DifferentIndividuals,
    DisjointRoles,
    Exists,
    ForAll,
    InverseRole,
    IrreflexiveRole,
    KnowledgeBase,
    NegatedRoleAssertion,
    Not,
    Or,
    ReflexiveRole,
    Role,
    RoleAssertion,
    RoleInclusion,
    SameIndividual,
    TransitiveRole,
    conj,
    disj,
)
from tableau_kb.normalize import role_closure

CONCEPTS = ("A", "B", "C")
ROLES = ("r", "s")
INDIVIDUALS = ("a", "b")


class _Gen:
    def __init__(self, rng, full):
        self.rng = rng
        self.full = full
        self.simple = set(ROLES)

    def role(self, simple_only=False):
        pool = sorted(self.simple) if simple_only else list(ROLES)
        name = self.rng.choice(pool)
        if self.full and self.rng.random() < 0.3:
            return InverseRole(name)
        return Role(name)

    def concept(self, depth):
        rng = self.rng
        if depth == 0 or rng.random() < 0.3:
            x = rng.random()
            if x < 0.05:
                return TOP
            if x < 0.08:
                return BOTTOM
            a = Atomic(rng.choice(CONCEPTS))
            return Not(a) if rng.random() < 0.3 else a
        kinds = ["not", "and", "or", "some", "only"]
        if self.full and self.simple:
            kinds += ["min", "max"]
        k = rng.choice(kinds)
        if k == "not":
            return Not(self.concept(depth - 1))
        if k in ("and", "or"):
            ops = [self.concept(depth - 1) for _ in range(2)]
            return (conj if k == "and" else disj)(*ops)
        if k == "some":
            return Exists(self.role(), self.concept(depth - 1))
        if k == "only":
            return ForAll(self.role(), self.concept(depth - 1))
        n = rng.randint(0, 2) if k == "max" else rng.randint(1, 2)
        cls = AtLeast if k == "min" else AtMost
        filler = TOP if rng.random() < 0.4 else self.concept(depth - 1)
        return cls(n, self.role(simple_only=True), filler)


def random_kb(seed: int, full: bool = False, depth: int = 3) -> KnowledgeBase:
    """One small knowledge base; ``full`` adds number restrictions, inverses and role axioms."""
    rng = random.Random(seed)
    g = _Gen(rng, full)
    axioms = []
    if full:
        if rng.random() < 0.3:
            t = rng.choice(ROLES)
            axioms.append(TransitiveRole(Role(t)))
            g.simple.discard(t)
        if rng.random() < 0.3:
            axioms.append(RoleInclusion(Role("r"), g.role() if rng.random() < 0.5 else Role("s")))
        if rng.random() < 0.2:
            axioms.append(DisjointRoles(Role("r"), Role("s")))
        if rng.random() < 0.1:
            axioms.append(rng.choice([AsymmetricRole, IrreflexiveRole, ReflexiveRole])(Role(rng.choice(ROLES))))
        _drop_non_simple(axioms, g)
    for _ in range(rng.randint(0, 2)):
        axioms.append(ConceptInclusion(g.concept(depth - 1), g.concept(depth - 1)))
    for _ in range(rng.randint(1, 3)):
        axioms.append(ConceptAssertion(g.concept(depth), rng.choice(INDIVIDUALS)))
    for _ in range(rng.randint(0, 2)):
        axioms.append(RoleAssertion(Role(rng.choice(ROLES)), rng.choice(INDIVIDUALS), rng.choice(INDIVIDUALS)))
    if full:
        if rng.random() < 0.2:
            axioms.append(rng.choice([SameIndividual, DifferentIndividuals])("a", "b"))
        if rng.random() < 0.15 and g.simple:
            axioms.append(NegatedRoleAssertion(Role(sorted(g.simple)[0]), "a", rng.choice(INDIVIDUALS)))
    return KnowledgeBase(tuple(axioms))


def _drop_non_simple(axioms, g):
    """Keep the simple-role pool honest and drop role axioms that would need a non-simple role."""
    closure = role_closure(KnowledgeBase(tuple(axioms)))
    g.simple = {r for r in ROLES if closure.is_simple(Role(r))}
    for a in list(axioms):
        if isinstance(a, DisjointRoles) and not {a.r.name, a.s.name} <= g.simple:
            axioms.remove(a)
        elif isinstance(a, (AsymmetricRole, IrreflexiveRole)) and a.role.name not in g.simple:
            axioms.remove(a)
