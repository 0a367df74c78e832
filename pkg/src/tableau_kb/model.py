"""Immutable domain types: concepts, roles, axioms, rules and knowledge bases.

Every type here is a frozen dataclass, so values hash, compare structurally
and can be shared freely between threads. Constructors normalize where the
normal form is forced (nested conjunctions flatten, inverse role assertions
swap their arguments) so that two equal knowledge bases always compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import NameClashError

MAX_CARDINALITY = 2**31 - 1

#: Built-in non-DL predicate that holds exactly for the named individuals.
INDIVIDUAL_PREDICATE = "O"


# --------------------------------------------------------------------------
# Roles


class RoleExpr:
    __slots__ = ()

    def __str__(self):
        from .dlsyntax import format_role

        return format_role(self)


@dataclass(frozen=True, repr=False)
class Role(RoleExpr):
    name: str

    def __repr__(self):
        return f"Role({self.name!r})"


@dataclass(frozen=True, repr=False)
class InverseRole(RoleExpr):
    name: str

    def __repr__(self):
        return f"InverseRole({self.name!r})"


@dataclass(frozen=True, repr=False)
class UniversalRole(RoleExpr):
    def __repr__(self):
        return "UNIVERSAL"


UNIVERSAL = UniversalRole()


def inverse(role: RoleExpr) -> RoleExpr:
    """Return the inverse of ``role``; inverting twice gives the role back."""
    if isinstance(role, Role):
        return InverseRole(role.name)
    if isinstance(role, InverseRole):
        return Role(role.name)
    return role


def role_name(role: RoleExpr) -> str | None:
    return getattr(role, "name", None)


def as_role(value) -> RoleExpr:
    return Role(value) if isinstance(value, str) else value


# --------------------------------------------------------------------------
# Concepts


class Concept:
    __slots__ = ()

    def __str__(self):
        from .dlsyntax import format_concept

        return format_concept(self)


@dataclass(frozen=True, repr=False)
class Atomic(Concept):
    name: str

    def __repr__(self):
        return f"Atomic({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Concept):
    def __repr__(self):
        return "TOP"


@dataclass(frozen=True, repr=False)
class Bottom(Concept):
    def __repr__(self):
        return "BOTTOM"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Not(Concept):
    operand: Concept


def _flatten(kind, operands):
    seen = []
    for op in operands:
        if isinstance(op, str):
            op = Atomic(op)
        parts = op.operands if isinstance(op, kind) else (op,)
        for part in parts:
            if part not in seen:
                seen.append(part)
    return tuple(seen)


@dataclass(frozen=True)
class And(Concept):
    operands: tuple

    def __post_init__(self):
        ops = _flatten(And, self.operands)
        if len(ops) < 2:
            raise ValueError("a conjunction needs at least two distinct operands")
        object.__setattr__(self, "operands", ops)


@dataclass(frozen=True)
class Or(Concept):
    operands: tuple

    def __post_init__(self):
        ops = _flatten(Or, self.operands)
        if len(ops) < 2:
            raise ValueError("a disjunction needs at least two distinct operands")
        object.__setattr__(self, "operands", ops)


def conj(*operands: Concept) -> Concept:
    """Conjunction that collapses to its single operand when possible."""
    ops = _flatten(And, operands)
    if not ops:
        return TOP
    return ops[0] if len(ops) == 1 else And(ops)


def disj(*operands: Concept) -> Concept:
    ops = _flatten(Or, operands)
    if not ops:
        return BOTTOM
    return ops[0] if len(ops) == 1 else Or(ops)


@dataclass(frozen=True)
class Exists(Concept):
    role: RoleExpr
    filler: Concept = TOP

    def __post_init__(self):
        object.__setattr__(self, "role", as_role(self.role))


@dataclass(frozen=True)
class ForAll(Concept):
    role: RoleExpr
    filler: Concept = TOP

    def __post_init__(self):
        object.__setattr__(self, "role", as_role(self.role))


def _check_cardinality(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"cardinality must be a non-negative integer, got {n!r}")
    if n > MAX_CARDINALITY:
        raise ValueError(f"cardinality {n} exceeds 2^31-1")


@dataclass(frozen=True)
class AtLeast(Concept):
    n: int
    role: RoleExpr
    filler: Concept = TOP

    def __post_init__(self):
        _check_cardinality(self.n)
        object.__setattr__(self, "role", as_role(self.role))


@dataclass(frozen=True)
class AtMost(Concept):
    n: int
    role: RoleExpr
    filler: Concept = TOP

    def __post_init__(self):
        _check_cardinality(self.n)
        object.__setattr__(self, "role", as_role(self.role))


@dataclass(frozen=True)
class SelfRestriction(Concept):
    role: RoleExpr

    def __post_init__(self):
        object.__setattr__(self, "role", as_role(self.role))


@dataclass(frozen=True)
class Nominal(Concept):
    individuals: frozenset

    def __post_init__(self):
        names = (
            frozenset([self.individuals])
            if isinstance(self.individuals, str)
            else frozenset(self.individuals)
        )
        if not names:
            raise ValueError("a nominal needs at least one individual")
        object.__setattr__(self, "individuals", names)


def walk(concept: Concept) -> Iterator[Concept]:
    """Yield ``concept`` and all of its sub-concepts, pre-order."""
    stack = [concept]
    while stack:
        c = stack.pop()
        yield c
        if isinstance(c, Not):
            stack.append(c.operand)
        elif isinstance(c, (And, Or)):
            stack.extend(reversed(c.operands))
        elif isinstance(c, (Exists, ForAll, AtLeast, AtMost)):
            stack.append(c.filler)


def concept_roles(concept: Concept) -> Iterator[RoleExpr]:
    for c in walk(concept):
        if isinstance(c, (Exists, ForAll, AtLeast, AtMost, SelfRestriction)):
            yield c.role


# --------------------------------------------------------------------------
# Literals (opaque data values)


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: str = "xsd:string"
    lang: str | None = None


Individual = Union[str, Literal]


# --------------------------------------------------------------------------
# Axioms


class Axiom:
    __slots__ = ()

    def __str__(self):
        from .dlsyntax import format_axiom

        return format_axiom(self)


@dataclass(frozen=True)
class ConceptInclusion(Axiom):
    sub: Concept
    sup: Concept


@dataclass(frozen=True)
class ConceptEquivalence(Axiom):
    a: Concept
    b: Concept


@dataclass(frozen=True)
class Domain(Axiom):
    role: RoleExpr
    concept: Concept

    def __post_init__(self):
        object.__setattr__(self, "role", as_role(self.role))

    def desugar(self) -> ConceptInclusion:
        return ConceptInclusion(Exists(self.role, TOP), self.concept)


@dataclass(frozen=True)
class Range(Axiom):
    role: RoleExpr
    concept: Concept

    def __post_init__(self):
        object.__setattr__(self, "role", as_role(self.role))

    def desugar(self) -> ConceptInclusion:
        return ConceptInclusion(TOP, ForAll(self.role, self.concept))


@dataclass(frozen=True)
class ConceptAssertion(Axiom):
    concept: Concept
    individual: str

    def __post_init__(self):
        if isinstance(self.concept, str):
            object.__setattr__(self, "concept", Atomic(self.concept))


def _normalize_role_args(obj):
    role = as_role(obj.role)
    if isinstance(role, InverseRole):
        subj, objct = obj.object, obj.subject
        object.__setattr__(obj, "subject", subj)
        object.__setattr__(obj, "object", objct)
        role = Role(role.name)
    object.__setattr__(obj, "role", role)


@dataclass(frozen=True)
class RoleAssertion(Axiom):
    """``role(subject, object)``; an inverse role is stored as the swapped pair."""

    role: RoleExpr
    subject: Individual
    object: Individual

    def __post_init__(self):
        _normalize_role_args(self)


@dataclass(frozen=True)
class NegatedRoleAssertion(Axiom):
    role: RoleExpr
    subject: str
    object: str

    def __post_init__(self):
        _normalize_role_args(self)


@dataclass(frozen=True)
class SameIndividual(Axiom):
    a: str
    b: str


@dataclass(frozen=True)
class DifferentIndividuals(Axiom):
    a: str
    b: str


@dataclass(frozen=True)
class RoleInclusion(Axiom):
    sub: RoleExpr
    sup: RoleExpr

    def __post_init__(self):
        object.__setattr__(self, "sub", as_role(self.sub))
        object.__setattr__(self, "sup", as_role(self.sup))


@dataclass(frozen=True)
class RoleEquivalence(Axiom):
    a: RoleExpr
    b: RoleExpr

    def __post_init__(self):
        object.__setattr__(self, "a", as_role(self.a))
        object.__setattr__(self, "b", as_role(self.b))


@dataclass(frozen=True)
class ComplexRoleInclusion(Axiom):
    chain: tuple
    sup: RoleExpr

    def __post_init__(self):
        chain = tuple(as_role(r) for r in self.chain)
        if len(chain) < 2:
            raise ValueError("role chains need length >= 2; use RoleInclusion")
        object.__setattr__(self, "chain", chain)
        object.__setattr__(self, "sup", as_role(self.sup))


@dataclass(frozen=True)
class _UnaryRoleAxiom(Axiom):
    role: RoleExpr

    def __post_init__(self):
        object.__setattr__(self, "role", as_role(self.role))


class TransitiveRole(_UnaryRoleAxiom):
    pass


class AsymmetricRole(_UnaryRoleAxiom):
    pass


class ReflexiveRole(_UnaryRoleAxiom):
    pass


class IrreflexiveRole(_UnaryRoleAxiom):
    pass


@dataclass(frozen=True)
class DisjointRoles(Axiom):
    r: RoleExpr
    s: RoleExpr

    def __post_init__(self):
        object.__setattr__(self, "r", as_role(self.r))
        object.__setattr__(self, "s", as_role(self.s))


TBOX_AXIOMS = (ConceptInclusion, ConceptEquivalence, Domain, Range)
ABOX_AXIOMS = (
    ConceptAssertion,
    RoleAssertion,
    NegatedRoleAssertion,
    SameIndividual,
    DifferentIndividuals,
)
RBOX_AXIOMS = (
    RoleInclusion,
    RoleEquivalence,
    ComplexRoleInclusion,
    TransitiveRole,
    DisjointRoles,
    AsymmetricRole,
    ReflexiveRole,
    IrreflexiveRole,
)


def axiom_concepts(ax: Axiom) -> tuple:
    if isinstance(ax, ConceptInclusion):
        return (ax.sub, ax.sup)
    if isinstance(ax, ConceptEquivalence):
        return (ax.a, ax.b)
    if isinstance(ax, (Domain, Range, ConceptAssertion)):
        return (ax.concept,)
    return ()


def axiom_roles(ax: Axiom) -> tuple:
    """Role expressions written directly in ``ax`` (not inside concepts)."""
    if isinstance(ax, (RoleAssertion, NegatedRoleAssertion, Domain, Range)):
        return (ax.role,)
    if isinstance(ax, RoleInclusion):
        return (ax.sub, ax.sup)
    if isinstance(ax, RoleEquivalence):
        return (ax.a, ax.b)
    if isinstance(ax, ComplexRoleInclusion):
        return ax.chain + (ax.sup,)
    if isinstance(ax, _UnaryRoleAxiom):
        return (ax.role,)
    if isinstance(ax, DisjointRoles):
        return (ax.r, ax.s)
    return ()


def axiom_individuals(ax: Axiom) -> tuple:
    if isinstance(ax, ConceptAssertion):
        return (ax.individual,)
    if isinstance(ax, (RoleAssertion, NegatedRoleAssertion)):
        return tuple(i for i in (ax.subject, ax.object) if isinstance(i, str))
    if isinstance(ax, (SameIndividual, DifferentIndividuals)):
        return (ax.a, ax.b)
    return ()


# --------------------------------------------------------------------------
# Rules


@dataclass(frozen=True, order=True)
class Variable:
    name: str

    def __str__(self):
        return "?" + self.name


@dataclass(frozen=True, order=True)
class Constant:
    name: str

    def __str__(self):
        return self.name


Term = Union[Variable, Constant]


def as_term(value) -> Term:
    if isinstance(value, (Variable, Constant)):
        return value
    if value.startswith("?"):
        return Variable(value[1:])
    return Constant(value)


class Atom:
    __slots__ = ()

    @property
    def variables(self) -> tuple:
        return tuple(t for t in self.terms if isinstance(t, Variable))

    def __str__(self):
        return f"{self.predicate}({', '.join(map(str, self.terms))})"


@dataclass(frozen=True, repr=False)
class ConceptAtom(Atom):
    concept: str
    term: Term

    def __post_init__(self):
        object.__setattr__(self, "term", as_term(self.term))

    @property
    def predicate(self):
        return self.concept

    @property
    def terms(self):
        return (self.term,)

    def __repr__(self):
        return f"ConceptAtom({self})"


@dataclass(frozen=True, repr=False)
class RoleAtom(Atom):
    role: str
    subject: Term
    object: Term

    def __post_init__(self):
        object.__setattr__(self, "subject", as_term(self.subject))
        object.__setattr__(self, "object", as_term(self.object))

    @property
    def predicate(self):
        return self.role

    @property
    def terms(self):
        return (self.subject, self.object)

    def __repr__(self):
        return f"RoleAtom({self})"


@dataclass(frozen=True, repr=False)
class NonDlAtom(Atom):
    predicate: str
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(as_term(t) for t in self.terms))

    def __repr__(self):
        return f"NonDlAtom({self})"


def guard(var: Variable | str) -> NonDlAtom:
    """The ``O(?v)`` atom restricting ``var`` to named individuals."""
    return NonDlAtom(INDIVIDUAL_PREDICATE, (as_term(var) if isinstance(var, str) else var,))


@dataclass(frozen=True)
class DlSafeRule:
    """``head <- body``.

    The head is a concept or role atom. A rule with an empty body and a
    ground non-DL head is a plain fact for that non-DL predicate.
    """

    head: Atom
    body: tuple = ()
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        body = tuple(self.body)
        object.__setattr__(self, "body", body)
        if isinstance(self.head, NonDlAtom) and (body or self.head.variables):
            raise ValueError("a non-DL head is only allowed as a ground fact")
        if isinstance(self.head, NonDlAtom) and self.head.predicate == INDIVIDUAL_PREDICATE:
            raise ValueError(f"{INDIVIDUAL_PREDICATE} is built in and cannot be asserted")
        body_vars = {v for atom in body for v in atom.variables}
        missing = [v for v in self.head.variables if v not in body_vars]
        if missing:
            raise ValueError(f"head variable {missing[0]} does not occur in the rule body")

    @property
    def variables(self) -> tuple:
        """Variables in order of first occurrence, head first."""
        seen = []
        for atom in (self.head,) + self.body:
            for v in atom.variables:
                if v not in seen:
                    seen.append(v)
        return tuple(seen)

    @property
    def is_fact(self) -> bool:
        return not self.body and not self.head.variables

    def __str__(self):
        from .dlsyntax import format_rule

        return format_rule(self)


# --------------------------------------------------------------------------
# Signature and knowledge base


@dataclass(frozen=True)
class Signature:
    concepts: frozenset = frozenset()
    roles: frozenset = frozenset()
    individuals: frozenset = frozenset()
    predicates: frozenset = frozenset()

    def kind_of(self, name: str) -> str | None:
        for kind in ("concepts", "roles", "individuals", "predicates"):
            if name in getattr(self, kind):
                return kind[:-1]
        return None


class _SigBuilder:
    def __init__(self):
        self.kinds = {}

    def add(self, name, kind):
        prev = self.kinds.setdefault(name, kind)
        if prev != kind:
            raise NameClashError(f"name {name!r} is used both as {prev} and as {kind}")

    def concept(self, c):
        for sub in walk(c):
            if isinstance(sub, Atomic):
                self.add(sub.name, "concept")
            elif isinstance(sub, Nominal):
                for i in sub.individuals:
                    self.add(i, "individual")
        for r in concept_roles(c):
            self.role(r)

    def role(self, r):
        name = role_name(r)
        if name is not None:
            self.add(name, "role")

    def build(self):
        groups = {"concept": set(), "role": set(), "individual": set(), "predicate": set()}
        for name, kind in self.kinds.items():
            groups[kind].add(name)
        return Signature(
            frozenset(groups["concept"]),
            frozenset(groups["role"]),
            frozenset(groups["individual"]),
            frozenset(groups["predicate"]),
        )


def compute_signature(axioms: Iterable[Axiom], rules: Iterable[DlSafeRule] = ()) -> Signature:
    b = _SigBuilder()
    for ax in axioms:
        for c in axiom_concepts(ax):
            b.concept(c)
        for r in axiom_roles(ax):
            b.role(r)
        for i in axiom_individuals(ax):
            b.add(i, "individual")
    for rule in rules:
        for atom in (rule.head,) + rule.body:
            if isinstance(atom, ConceptAtom):
                b.add(atom.concept, "concept")
            elif isinstance(atom, RoleAtom):
                b.add(atom.role, "role")
            elif atom.predicate != INDIVIDUAL_PREDICATE:
                b.add(atom.predicate, "predicate")
            for t in atom.terms:
                if isinstance(t, Constant):
                    b.add(t.name, "individual")
    return b.build()


def _dedupe(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return tuple(out)


@dataclass(frozen=True)
class KnowledgeBase:
    """TBox, ABox and RBox axioms (in input order) plus DL-safe rules."""

    axioms: tuple = ()
    rules: tuple = ()
    signature: Signature = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "axioms", _dedupe(self.axioms))
        object.__setattr__(self, "rules", _dedupe(self.rules))
        object.__setattr__(self, "signature", compute_signature(self.axioms, self.rules))

    @property
    def tbox(self) -> tuple:
        return tuple(a for a in self.axioms if isinstance(a, TBOX_AXIOMS))

    @property
    def abox(self) -> tuple:
        return tuple(a for a in self.axioms if isinstance(a, ABOX_AXIOMS))

    @property
    def rbox(self) -> tuple:
        return tuple(a for a in self.axioms if isinstance(a, RBOX_AXIOMS))

    def axiom_set(self) -> frozenset:
        return frozenset(self.axioms)

    def extend(self, axioms=(), rules=()) -> "KnowledgeBase":
        return KnowledgeBase(self.axioms + tuple(axioms), self.rules + tuple(rules))

    def __len__(self):
        return len(self.axioms) + len(self.rules)


def signature_of(kb: KnowledgeBase) -> Signature:
    """Recompute the exact sets of names occurring in ``kb``."""
    return compute_signature(kb.axioms, kb.rules)
