"""Entailment, classification and realization on top of the tableau and rules."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentKBError, UnsupportedAxiomError, UnsupportedConstructError
from .model import (
    BOTTOM,
    TOP,
    Atomic,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptInclusion,
    KnowledgeBase,
    RoleAssertion,
    UniversalRole,
)
from .rules import ENTAILMENT, _Entailments, atom_args, materialize
from .tableau import instance_of, is_consistent, is_satisfiable_concept, subsumes

TOP_NAME = "TOP"
BOTTOM_NAME = "BOTTOM"


def _consistent(kb, max_nodes=None) -> bool:
    v = is_consistent(kb, max_nodes=max_nodes)
    if not v.conclusive:
        from .errors import ResourceLimitExceeded

        raise ResourceLimitExceeded("tableau node cap reached while checking consistency")
    return v.satisfiable


def with_rule_consequences(kb: KnowledgeBase, max_nodes=None) -> KnowledgeBase:
    """``kb`` plus the facts its rules and role chains derive over named individuals."""
    if not kb.rules and not kb.rbox:
        return kb
    store = materialize(kb, ENTAILMENT, max_nodes=max_nodes)
    extra = store.to_kb(derived_only=True)
    return kb.extend(extra.axioms)


def entails(kb: KnowledgeBase, ax, max_nodes=None) -> bool:
    """Whether ``ax`` follows from ``kb``.

    Concept inclusions are decided by the tableau alone. Concept assertions
    are decided by the tableau on ``kb`` extended with rule consequences.
    Role assertions hold iff they are among the asserted or derived facts
    closed under the role hierarchy and ``SAME`` statements.
    """
    if isinstance(ax, ConceptInclusion):
        return subsumes(kb, ax.sup, ax.sub, max_nodes=max_nodes)
    if isinstance(ax, ConceptEquivalence):
        raise UnsupportedAxiomError("entails accepts concept inclusions, concept assertions and role assertions")
    if isinstance(ax, (ConceptAssertion, RoleAssertion)):
        if not _consistent(kb, max_nodes):
            return True
        if isinstance(ax, ConceptAssertion):
            working = with_rule_consequences(kb, max_nodes)
            return instance_of(working, ax.individual, ax.concept, max_nodes=max_nodes)
        if isinstance(ax.role, UniversalRole):
            raise UnsupportedConstructError("universal role is not supported in reasoning")
        store = materialize(kb, ENTAILMENT, max_nodes=max_nodes)
        rows = {}
        for fact in store:
            if hasattr(fact, "role"):
                rows.setdefault(fact.role, set()).add(atom_args(fact))
        closed = _Entailments(kb, max_nodes).role_relation(rows)
        return (ax.subject, ax.object) in closed.get(ax.role.name, ())
    raise UnsupportedAxiomError(
        f"entails accepts concept inclusions, concept assertions and role assertions, not {type(ax).__name__}"
    )


# --------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class ConceptHierarchy:
    """Direct subsumptions between classes of equivalent concept names.

    ``classes[0]`` is the top class (holding ``TOP`` and any names
    equivalent to it) and ``classes[-1]`` the bottom class. ``edges`` are
    ``(parent, child)`` index pairs of the transitive reduction.
    """

    classes: tuple  # tuple of tuples of names
    edges: tuple
    inconsistent: bool = False

    @property
    def top(self) -> int:
        return 0

    @property
    def bottom(self) -> int:
        return len(self.classes) - 1

    def index_of(self, name: str) -> int:
        for i, members in enumerate(self.classes):
            if name in members:
                return i
        raise KeyError(name)

    def children(self, i) -> list:
        return [c for p, c in self.edges if p == i]

    def parents(self, i) -> list:
        return [p for p, c in self.edges if c == i]

    def reaches(self, sup: str, sub: str) -> bool:
        """True iff ``sub`` lies at or below ``sup`` in the hierarchy."""
        start, goal = self.index_of(sup), self.index_of(sub)
        stack, seen = [start], set()
        while stack:
            i = stack.pop()
            if i == goal:
                return True
            if i not in seen:
                seen.add(i)
                stack.extend(self.children(i))
        return False

    def equivalents(self, name: str) -> tuple:
        return self.classes[self.index_of(name)]

    def _label(self, i):
        return " = ".join(self.classes[i])

    def to_text(self) -> str:
        lines = []
        if self.inconsistent:
            lines.append("# inconsistent knowledge base: every concept is unsatisfiable")

        def walk(i, depth):
            lines.append("  " * depth + self._label(i))
            for c in sorted(self.children(i), key=lambda k: self.classes[k]):
                if c != self.bottom:
                    walk(c, depth + 1)

        walk(self.top, 0)
        if self.bottom != self.top:
            lines.append(self._label(self.bottom))
        return "\n".join(lines) + "\n"

    def to_turtle(self) -> str:
        from .turtle import axiom_to_turtle, prefix_block

        axioms = []

        def concept(i):
            if i == self.top:
                return TOP
            if i == self.bottom:
                return BOTTOM
            return Atomic(self.classes[i][0])

        for i, members in enumerate(self.classes):
            names = [m for m in members if m not in (TOP_NAME, BOTTOM_NAME)]
            base = concept(i) if i in (self.top, self.bottom) else Atomic(names[0])
            start = 0 if i in (self.top, self.bottom) else 1
            for other in names[start:]:
                axioms.append(ConceptEquivalence(Atomic(other), base))
        for p, c in self.edges:
            if p == self.top or c == self.bottom:
                continue
            axioms.append(ConceptInclusion(concept(c), concept(p)))
        body = "".join(axiom_to_turtle(a) + "\n" for a in axioms)
        return prefix_block() + ("\n" + body if body else "")


def _told_supers(kb):
    told = {}
    for ax in kb.tbox:
        pairs = []
        if isinstance(ax, ConceptInclusion):
            pairs = [(ax.sub, ax.sup)]
        elif isinstance(ax, ConceptEquivalence):
            pairs = [(ax.a, ax.b), (ax.b, ax.a)]
        for sub, sup in pairs:
            if isinstance(sub, Atomic) and isinstance(sup, Atomic):
                told.setdefault(sub.name, set()).add(sup.name)
    closed = {}
    for name in told:
        seen, stack = set(), [name]
        while stack:
            for s in told.get(stack.pop(), ()):
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        closed[name] = seen
    return closed


def classify(kb: KnowledgeBase, max_nodes=None) -> ConceptHierarchy:
    """Compute the concept hierarchy over the concept names of ``kb``."""
    names = sorted(kb.signature.concepts)
    if not _consistent(kb, max_nodes):
        classes = ((TOP_NAME,), (BOTTOM_NAME,) + tuple(names))
        return ConceptHierarchy(classes, ((0, 1),), inconsistent=True)
    unsat = {
        a
        for a in names
        if not _require(is_satisfiable_concept(kb, Atomic(a), max_nodes=max_nodes)).satisfiable
    }
    sat = [a for a in names if a not in unsat]
    told = _told_supers(kb)
    tops = {a for a in sat if subsumes(kb, Atomic(a), TOP, max_nodes=max_nodes)}
    middle = [a for a in sat if a not in tops]
    above = {a: set() for a in middle}  # a -> names subsuming a (excluding a)
    for a in middle:
        for b in middle:
            if a == b:
                continue
            if b in told.get(a, ()) or subsumes(kb, Atomic(b), Atomic(a), max_nodes=max_nodes):
                above[a].add(b)
    # group equivalent names
    groups = []
    assigned = {}
    for a in middle:
        if a in assigned:
            continue
        members = tuple(sorted([a] + [b for b in above[a] if a in above[b]]))
        for m in members:
            assigned[m] = len(groups)
        groups.append(members)
    order = sorted(range(len(groups)), key=lambda g: groups[g])
    classes = [(TOP_NAME,) + tuple(sorted(tops))]
    position = {}
    for g in order:
        position[g] = len(classes)
        classes.append(groups[g])
    classes.append((BOTTOM_NAME,) + tuple(sorted(unsat)))
    bottom = len(classes) - 1

    def strict_supers(g):
        rep = groups[g][0]
        return {assigned[b] for b in above[rep]} - {g}

    supers = {g: strict_supers(g) for g in range(len(groups))}
    edges = set()
    for g in range(len(groups)):
        direct = {s for s in supers[g] if not any(s in supers[t] for t in supers[g])}
        if direct:
            edges |= {(position[s], position[g]) for s in direct}
        else:
            edges.add((0, position[g]))
    has_child = {p for p, _ in edges}
    leaves = [position[g] for g in range(len(groups)) if position[g] not in has_child]
    if leaves:
        edges |= {(leaf, bottom) for leaf in leaves}
    else:
        edges.add((0, bottom))
    return ConceptHierarchy(tuple(classes), tuple(sorted(edges)))


def _require(verdict):
    if not verdict.conclusive:
        from .errors import ResourceLimitExceeded

        raise ResourceLimitExceeded("tableau node cap reached during classification")
    return verdict


# --------------------------------------------------------------------------
# Realization


def realize(kb: KnowledgeBase, max_nodes=None) -> dict:
    """Map each named individual to its most specific concept names.

    Rule and role-chain consequences are taken into account. Individuals
    with no entailed concept name map to the empty set.
    """
    if not _consistent(kb, max_nodes):
        raise InconsistentKBError("cannot realize an inconsistent knowledge base")
    working = with_rule_consequences(kb, max_nodes)
    hierarchy = classify(working, max_nodes)
    individuals = sorted(i for i in working.signature.individuals if isinstance(i, str))
    result = {}
    # visit classes parents-first so a class is tested only if all its parents hold
    order = _topological(hierarchy)
    for ind in individuals:
        holds = {hierarchy.top}
        for i in order:
            if i in (hierarchy.top, hierarchy.bottom):
                continue
            if not all(p in holds for p in hierarchy.parents(i)):
                continue
            if instance_of(working, ind, Atomic(hierarchy.classes[i][0]), max_nodes=max_nodes):
                holds.add(i)
        specific = [
            i for i in holds if i != hierarchy.top and not any(c in holds for c in hierarchy.children(i))
        ]
        if not specific:
            specific = [hierarchy.top]
        result[ind] = frozenset(
            n for i in specific for n in hierarchy.classes[i] if n not in (TOP_NAME, BOTTOM_NAME)
        )
    return result


def _topological(h: ConceptHierarchy) -> list:
    indeg = {i: len(h.parents(i)) for i in range(len(h.classes))}
    ready = sorted(i for i, d in indeg.items() if d == 0)
    out = []
    while ready:
        i = ready.pop(0)
        out.append(i)
        for c in sorted(h.children(i)):
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
        ready.sort()
    return out


def format_realization(result: dict) -> str:
    lines = []
    for ind in sorted(result):
        lines.append(f"{ind}: {' '.join(sorted(result[ind]))}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


__all__ = [
    "ConceptHierarchy",
    "classify",
    "entails",
    "format_realization",
    "realize",
    "with_rule_consequences",
]
