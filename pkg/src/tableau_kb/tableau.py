"""Tableau satisfiability for the knowledge-base fragment.

The engine builds a completion graph from the ABox, expands it with the
usual SHOIQ-style rules, branches on disjunctions, ``<=``-merges, nominal
choices and the choose rule, and backtracks chronologically. Anonymous nodes
are cut off with pairwise (double) blocking.

Rule priority, highest first::

    and, nominal, at-most, or, forall, forall+, self, reflexive, choose,
    exists, at-least

Clashes are detected as soon as the offending label or edge is written.
Complex role chains are not applied here (they are compiled to rules over
named individuals); transitivity is handled by the ``forall+`` rule.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ResourceLimitExceeded, UnsupportedConstructError
from .model import (
    BOTTOM,
    TOP,
    And,
    AsymmetricRole,
    AtLeast,
    Atomic,
    AtMost,
    Bottom,
    ComplexRoleInclusion,
    ConceptAssertion,
    DifferentIndividuals,
    DisjointRoles,
    Exists,
    ForAll,
    InverseRole,
    IrreflexiveRole,
    KnowledgeBase,
    Literal,
    NegatedRoleAssertion,
    Nominal,
    Not,
    Or,
    ReflexiveRole,
    Role,
    RoleAssertion,
    SameIndividual,
    SelfRestriction,
    Top,
    UniversalRole,
    axiom_concepts,
    axiom_roles,
    concept_roles,
    inverse,
    walk,
)
from .normalize import absorb, complement, nnf, role_closure

DEFAULT_MAX_NODES = 100_000

SATISFIABLE = "satisfiable"
UNSATISFIABLE = "unsatisfiable"
INCONCLUSIVE = "inconclusive"

complement = lru_cache(maxsize=None)(complement)


# --------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class TraceEvent:
    rule: str
    nodes: tuple
    concept: str = ""

    def line(self) -> str:
        text = f"{self.rule} {','.join(map(str, self.nodes))}"
        return f"{text} {self.concept}" if self.concept else text


@dataclass(frozen=True)
class Clash:
    kind: str
    nodes: tuple
    detail: str = ""

    def line(self) -> str:
        return TraceEvent("clash:" + self.kind, self.nodes, self.detail).line()


@dataclass(frozen=True)
class ModelNode:
    id: int
    names: tuple  # individuals denoted by this node
    concepts: tuple  # concept names and nominals holding here
    blocked_by: int | None = None


@dataclass(frozen=True)
class ModelDescription:
    nodes: tuple
    edges: tuple  # (source id, role name, target id)

    def to_text(self) -> str:
        lines = []
        for n in self.nodes:
            who = "=".join(n.names) if n.names else "_"
            extra = f" blocked-by {n.blocked_by}" if n.blocked_by is not None else ""
            lines.append(f"node {n.id} {who}: {' '.join(n.concepts)}{extra}".rstrip())
        for s, r, t in self.edges:
            lines.append(f"edge {s} {r} {t}")
        return "\n".join(lines)


@dataclass(frozen=True)
class TableauVerdict:
    """Outcome of one tableau run.

    ``status`` is satisfiable, unsatisfiable or inconclusive (node cap hit).
    A satisfiable verdict carries ``model``; an unsatisfiable one ``clash``.
    ``trace`` lists every rule application across all branches.
    """

    status: str
    model: ModelDescription | None = None
    clash: Clash | None = None
    trace: tuple = ()
    backtracks: int = 0
    nodes_created: int = 0
    incomplete_reasons: tuple = ()

    @property
    def satisfiable(self) -> bool:
        return self.status == SATISFIABLE

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE

    @property
    def possibly_incomplete(self) -> bool:
        return bool(self.incomplete_reasons)

    def trace_text(self) -> str:
        lines = [e.line() for e in self.trace]
        if self.clash is not None:
            lines.append(self.clash.line())
        lines.append(f"result {self.status}")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Completion graph


class _Abort(Exception):
    pass


@dataclass
class CompletionGraph:
    labels: dict = field(default_factory=dict)  # node -> ordered set of concepts
    edges: dict = field(default_factory=dict)  # (x, y) -> ordered set of roles
    adj: dict = field(default_factory=dict)  # node -> set of adjacent nodes
    parent: dict = field(default_factory=dict)  # anonymous node -> parent
    names: dict = field(default_factory=dict)  # named node -> individuals
    individual_node: dict = field(default_factory=dict)
    merged: dict = field(default_factory=dict)  # removed node -> representative
    ineq: set = field(default_factory=set)
    stale: set = field(default_factory=set)  # nodes whose local rules need a look
    gen_stale: set = field(default_factory=set)  # same, for generating rules
    next_id: int = 0
    clash: Clash | None = None

    def copy(self) -> "CompletionGraph":
        return CompletionGraph(
            labels={k: dict(v) for k, v in self.labels.items()},
            edges={k: dict(v) for k, v in self.edges.items()},
            adj={k: set(v) for k, v in self.adj.items()},
            parent=dict(self.parent),
            names={k: list(v) for k, v in self.names.items()},
            individual_node=dict(self.individual_node),
            merged=dict(self.merged),
            ineq=set(self.ineq),
            stale=set(self.stale),
            gen_stale=set(self.gen_stale),
            next_id=self.next_id,
            clash=self.clash,
        )

    def find(self, node: int) -> int:
        while node in self.merged:
            node = self.merged[node]
        return node

    def node_of(self, individual) -> int:
        return self.find(self.individual_node[individual])

    def nodes(self):
        return sorted(self.labels)

    def is_named(self, node: int) -> bool:
        return node in self.names

    def ancestors(self, node: int):
        p = self.parent.get(node)
        while p is not None:
            yield p
            p = self.parent.get(p)


# --------------------------------------------------------------------------
# The engine


class _Branch:
    def __init__(self, rule, nodes, alternatives):
        self.rule = rule
        self.nodes = nodes
        self.alternatives = alternatives  # list of (kind, args...)


class Tableau:
    """One satisfiability run over a fixed knowledge base."""

    def __init__(self, kb: KnowledgeBase, extra_assertions=(), max_nodes=None):
        self.kb = kb
        self.extra = tuple(extra_assertions)
        self.max_nodes = _resolve_max_nodes(max_nodes)
        self._check_supported()
        self.closure = role_closure(kb)
        self.unfold, self.gcis = absorb(kb.tbox)
        self._supers = {}
        self.disjoint = []
        self.asymmetric = []
        self.irreflexive = []
        self.reflexive = []
        for ax in kb.rbox:
            if isinstance(ax, DisjointRoles):
                self.disjoint += [(ax.r, ax.s), (inverse(ax.r), inverse(ax.s))]
            elif isinstance(ax, AsymmetricRole):
                self.asymmetric.append(ax.role)
            elif isinstance(ax, IrreflexiveRole):
                self.irreflexive += [ax.role, inverse(ax.role)]
            elif isinstance(ax, ReflexiveRole):
                self.reflexive.append(ax.role)
        self.forbidden = [
            (ax.subject, ax.role, ax.object)
            for ax in kb.abox
            if isinstance(ax, NegatedRoleAssertion)
        ]
        self.trace = []
        self.backtracks = 0
        self.created = 0
        self._uses_nominals = any(
            isinstance(c, Nominal) for c in self._all_concepts() for c in walk(c)
        )

    # -- setup
    def _all_concepts(self):
        for ax in self.kb.axioms:
            yield from axiom_concepts(ax)
        for c, _ in self.extra:
            yield c

    def _check_supported(self):
        for ax in self.kb.axioms:
            roles = list(axiom_roles(ax))
            for c in axiom_concepts(ax):
                roles += list(concept_roles(c))
            if any(isinstance(r, UniversalRole) for r in roles):
                raise UnsupportedConstructError(f"universal role is not supported in reasoning: {ax}")
        for c, _ in self.extra:
            if any(isinstance(r, UniversalRole) for r in concept_roles(c)):
                raise UnsupportedConstructError("universal role is not supported in reasoning")

    def incomplete_reasons(self) -> tuple:
        reasons = []
        concepts = [s for c in self._all_concepts() for s in walk(c)]
        has_inverse = any(
            isinstance(r, InverseRole)
            for c in concepts
            for r in concept_roles(c)
        ) or any(
            isinstance(r, InverseRole) for ax in self.kb.rbox for r in axiom_roles(ax)
        )
        has_numbers = any(isinstance(c, (AtLeast, AtMost)) for c in concepts)
        if self._uses_nominals and has_inverse and has_numbers:
            reasons.append("nominals combined with inverse roles and number restrictions")
        if any(
            isinstance(ax, ComplexRoleInclusion)
            and not (len(ax.chain) == 2 and ax.chain[0] == ax.chain[1] == ax.sup)
            for ax in self.kb.rbox
        ):
            reasons.append("complex role chains are not applied to the completion graph")
        if self.kb.rules:
            reasons.append("DL-safe rules are not part of the tableau")
        return tuple(reasons)

    def supers(self, role):
        s = self._supers.get(role)
        if s is None:
            s = self.closure.supers(role)
            self._supers[role] = s
        return s

    def _log(self, rule, nodes, concept=""):
        self.trace.append(TraceEvent(rule, tuple(nodes), str(concept) if concept != "" else ""))

    def _initial_graph(self) -> CompletionGraph:
        g = CompletionGraph()
        sig = self.kb.signature
        individuals = sorted(sig.individuals)
        literals = sorted(
            {ax.object for ax in self.kb.abox if isinstance(ax, RoleAssertion) and isinstance(ax.object, Literal)}
        )
        extra_inds = sorted({i for _, i in self.extra} - set(individuals))
        for ind in individuals + extra_inds + literals:
            x = self._new_node(g, None)
            g.names[x] = [ind]
            g.individual_node[ind] = x
            if self._uses_nominals and isinstance(ind, str):
                self.add(g, x, Nominal(frozenset([ind])))
        lit_nodes = [g.individual_node[lit] for lit in literals]
        for i, x in enumerate(lit_nodes):
            for y in lit_nodes[i + 1:]:
                g.ineq.add(frozenset((x, y)))
        for ax in self.kb.abox:
            if isinstance(ax, ConceptAssertion):
                x = g.node_of(ax.individual)
                self.add(g, x, nnf(ax.concept))
                self._log("assert", (x,), ax.concept)
            elif isinstance(ax, RoleAssertion):
                self.add_edge(g, g.node_of(ax.subject), g.node_of(ax.object), ax.role)
            elif isinstance(ax, DifferentIndividuals):
                x, y = g.node_of(ax.a), g.node_of(ax.b)
                if x == y:
                    self._set_clash(g, "inequality", (x,), f"{ax.a} DIFF {ax.b}")
                g.ineq.add(frozenset((x, y)))
        for concept, ind in self.extra:
            x = g.node_of(ind)
            self.add(g, x, nnf(concept))
            self._log("assert", (x,), concept)
        for ax in self.kb.abox:
            if isinstance(ax, SameIndividual):
                x, y = g.node_of(ax.a), g.node_of(ax.b)
                if x != y:
                    self._log("same", (x, y))
                    self.merge(g, max(x, y), min(x, y))
        for x in g.nodes():
            self._check_node_edges(g, x)
        return g

    # -- primitive updates
    def _new_node(self, g, parent):
        x = g.next_id
        g.next_id += 1
        self.created += 1
        # the cap counts every node made in the run, so it also bounds backtracking
        if self.created > self.max_nodes:
            raise _Abort()
        g.labels[x] = {}
        g.adj[x] = set()
        self._touch(g, x)
        if parent is not None:
            g.parent[x] = parent
        for c in self.gcis:
            self.add(g, x, c)
        return x

    def _set_clash(self, g, kind, nodes, detail=""):
        if g.clash is None:
            g.clash = Clash(kind, tuple(nodes), str(detail))

    def add(self, g, x, c) -> bool:
        """Add ``c`` to the label of ``x``; returns False if already there."""
        label = g.labels[x]
        if c in label or isinstance(c, Top):
            return False
        label[c] = None
        self._touch(g, x)
        self._touch_counters(g, x, c)
        if isinstance(c, Bottom):
            self._set_clash(g, "bottom", (x,), c)
        elif isinstance(c, Not):
            if c.operand in label:
                self._set_clash(g, "atomic", (x,), c.operand)
            elif isinstance(c.operand, SelfRestriction) and c.operand.role in self.role_set(g, x, x):
                self._set_clash(g, "irreflexive", (x,), c)
        elif Not(c) in label:
            self._set_clash(g, "atomic", (x,), c)
        elif isinstance(c, (AtLeast, AtMost, Exists)):
            self._counting_clash(g, x, c)
        if isinstance(c, Atomic):
            for d in self.unfold.get(c, ()):
                self.add(g, x, d)
        return True

    def _counting_clash(self, g, x, c):
        # >= n r C next to <= m r D with n > m is hopeless when D is C or TOP;
        # catching it here saves generating successors and merging them back
        def bounds(d):
            if isinstance(d, Exists):
                return "min", 1, d.role, d.filler
            if isinstance(d, AtLeast):
                return "min", d.n, d.role, d.filler
            if isinstance(d, AtMost):
                return "max", d.n, d.role, d.filler
            return None

        kind, n, role, filler = bounds(c)
        for d in g.labels[x]:
            other = bounds(d)
            if other is None or other[0] == kind or other[2] != role:
                continue
            (lo, lo_filler), (hi, hi_filler) = ((n, filler), other[1::2]) if kind == "min" else (other[1::2], (n, filler))
            if lo > hi and (isinstance(hi_filler, Top) or hi_filler == lo_filler):
                self._set_clash(g, "at-most", (x,), d if kind == "min" else c)
                return

    @staticmethod
    def _touch(g, *nodes):
        g.stale.update(nodes)
        g.gen_stale.update(nodes)

    @staticmethod
    def _touch_counters(g, x, c):
        # adding c at x can only enable the at-most rule at a neighbour counting
        # c; every other rule there is satisfied, not triggered, by a bigger label
        for y in g.adj[x]:
            if y not in g.stale and any(isinstance(d, AtMost) and d.filler == c for d in g.labels[y]):
                g.stale.add(y)

    def role_set(self, g, x, y) -> set:
        """Roles R for which y is an R-neighbour of x (hierarchy applied)."""
        out = set()
        for s in g.edges.get((x, y), ()):
            out |= self.supers(s)
        for s in g.edges.get((y, x), ()):
            out |= self.supers(inverse(s))
        return out

    def neighbours(self, g, x, role):
        return [y for y in sorted(g.adj[x]) if role in self.role_set(g, x, y)]

    def add_edge(self, g, x, y, role):
        roles = g.edges.setdefault((x, y), {})
        if role in roles:
            return
        roles[role] = None
        g.adj[x].add(y)
        g.adj[y].add(x)
        self._touch(g, x, y)
        self._check_pair(g, x, y)

    def _check_pair(self, g, x, y):
        rs = self.role_set(g, x, y)
        if not rs:
            return
        for r, s in self.disjoint:
            if r in rs and s in rs:
                self._set_clash(g, "disjoint-roles", (x, y), f"DIS {r} {s}")
        for a in self.asymmetric:
            if a in rs and inverse(a) in rs:
                self._set_clash(g, "asymmetric", (x, y), f"ASY {a}")
        if x == y:
            for r in self.irreflexive:
                if r in rs:
                    self._set_clash(g, "irreflexive", (x,), f"IRR {r}")
            for c in g.labels[x]:
                if isinstance(c, Not) and isinstance(c.operand, SelfRestriction) and c.operand.role in rs:
                    self._set_clash(g, "irreflexive", (x,), c)
        for a, r, b in self.forbidden:
            na, nb = g.node_of(a), g.node_of(b)
            if (na, nb) == (x, y) and r in rs:
                self._set_clash(g, "negated-assertion", (x, y), f"{a} NOT {r} {b}")
            elif (na, nb) == (y, x) and r in self.role_set(g, y, x):
                self._set_clash(g, "negated-assertion", (y, x), f"{a} NOT {r} {b}")

    def _check_node_edges(self, g, x):
        for y in sorted(g.adj[x]):
            self._check_pair(g, x, y)

    def _prune(self, g, x):
        for child in [c for c, p in g.parent.items() if p == x]:
            if child in g.labels:
                self._prune(g, child)
                self._remove(g, child)

    def _remove(self, g, x):
        # neighbours may have relied on x for an existential
        self._touch(g, *g.adj[x])
        for y in list(g.adj[x]):
            g.edges.pop((x, y), None)
            g.edges.pop((y, x), None)
            g.adj[y].discard(x)
        del g.adj[x]
        del g.labels[x]
        g.stale.discard(x)
        g.gen_stale.discard(x)
        g.parent.pop(x, None)
        g.ineq = {p for p in g.ineq if x not in p}

    def merge(self, g, y, z):
        """Merge node ``y`` into ``z``; ``y`` disappears."""
        if frozenset((y, z)) in g.ineq:
            self._set_clash(g, "inequality", (y, z))
            return
        self._prune(g, y)
        for c in list(g.labels[y]):
            self.add(g, z, c)
        for (a, b), roles in list(g.edges.items()):
            if y not in (a, b):
                continue
            na = z if a == y else a
            nb = z if b == y else b
            for r in roles:
                self.add_edge(g, na, nb, r)
        for p in list(g.ineq):
            if y in p:
                (other,) = tuple(p - {y}) or (y,)
                if other == z:
                    self._set_clash(g, "inequality", (y, z))
                g.ineq.add(frozenset((z, other)))
        if y in g.names:
            g.names.setdefault(z, [])
            g.names[z] = sorted(set(g.names[z]) | set(g.names.pop(y)), key=str)
        self._remove(g, y)
        g.merged[y] = z
        for k, v in list(g.merged.items()):
            if v == y:
                g.merged[k] = z
        self._check_node_edges(g, z)
        self._touch(g, z)

    def merge_pair(self, g, a, b):
        """Merge two nodes, choosing the direction the calculus requires."""
        named_a, named_b = g.is_named(a), g.is_named(b)
        if named_a != named_b:
            src, dst = (b, a) if named_a else (a, b)
        elif a in set(g.ancestors(b)):
            src, dst = b, a
        elif b in set(g.ancestors(a)):
            src, dst = a, b
        else:
            src, dst = max(a, b), min(a, b)
        self._log("merge", (src, dst))
        self.merge(g, src, dst)

    # -- blocking
    def _edge_label(self, g, p, x):
        return frozenset(g.edges.get((p, x), ())) | frozenset(
            inverse(s) for s in g.edges.get((x, p), ())
        )

    def blocking(self, g) -> dict:
        """Map anonymous node -> ('direct', blocker) or ('indirect', ancestor)."""
        lazy = _BlockingStatus(self, g)
        return {x: st for x in g.nodes() if (st := lazy.get(x)) is not None}

    # -- expansion rules; each returns None, True (applied) or a _Branch
    def has(self, g, y, c):
        return isinstance(c, Top) or c in g.labels[y]

    def rule_and(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, And):
                missing = [o for o in c.operands if o not in g.labels[x]]
                if missing:
                    self._log("and", (x,), c)
                    for o in missing:
                        self.add(g, x, o)
                    return True
        return None

    def rule_nominal(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, Nominal):
                targets = sorted({g.node_of(i) for i in c.individuals})
                if x in targets:
                    continue
                if len(targets) == 1:
                    self._log("nominal", (x, targets[0]), c)
                    self.merge_pair(g, x, targets[0])
                    return True
                return _Branch("nominal", (x,), [("merge", x, t) for t in targets])
        return None

    def rule_at_most(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, AtMost):
                neigh = [y for y in self.neighbours(g, x, c.role) if self.has(g, y, c.filler)]
                if len(neigh) <= c.n:
                    continue
                pairs = [
                    (y, z)
                    for i, y in enumerate(neigh)
                    for z in neigh[i + 1:]
                    if frozenset((y, z)) not in g.ineq and y != z
                ]
                if not pairs:
                    self._set_clash(g, "at-most", (x,) + tuple(neigh), c)
                    return True
                if len(pairs) == 1:
                    self._log("at-most", (x,) + pairs[0], c)
                    self.merge_pair(g, *pairs[0])
                    return True
                return _Branch("at-most", (x,), [("merge", y, z) for y, z in pairs])
        return None

    def rule_or(self, g, x):
        label = g.labels[x]
        for c in list(label):
            if isinstance(c, Or):
                if any(o in label for o in c.operands):
                    continue
                cands = [o for o in c.operands if complement(o) not in label]
                if len(cands) <= 1:
                    chosen = cands[0] if cands else c.operands[0]
                    self._log("or", (x,), chosen)
                    self.add(g, x, chosen)
                    return True
                return _Branch("or", (x,), [("add", x, o) for o in cands])
        return None

    def rule_forall(self, g, x):
        applied = None
        for c in list(g.labels[x]):
            if isinstance(c, ForAll):
                for y in self.neighbours(g, x, c.role):
                    if not self.has(g, y, c.filler):
                        self._log("forall", (x, y), c.filler)
                        self.add(g, y, c.filler)
                        applied = True
                if applied:
                    return True
        return None

    def rule_forall_plus(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, ForAll):
                for t in sorted(self.closure.transitive, key=str):
                    if not self.closure.subsumes(t, c.role):
                        continue
                    prop = ForAll(t, c.filler)
                    for y in self.neighbours(g, x, t):
                        if prop not in g.labels[y]:
                            self._log("forall+", (x, y), prop)
                            self.add(g, y, prop)
                            return True
        return None

    def rule_self(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, SelfRestriction) and c.role not in self.role_set(g, x, x):
                self._log("self", (x,), c)
                self.add_edge(g, x, x, c.role)
                return True
        return None

    def rule_reflexive(self, g, x):
        for r in self.reflexive:
            if r not in self.role_set(g, x, x):
                self._log("reflexive", (x,), r)
                self.add_edge(g, x, x, r)
                return True
        return None

    def rule_choose(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, AtMost) and not isinstance(c.filler, Top):
                neg = complement(c.filler)
                for y in self.neighbours(g, x, c.role):
                    if not self.has(g, y, c.filler) and not self.has(g, y, neg):
                        return _Branch("choose", (x, y), [("add", y, c.filler), ("add", y, neg)])
        return None

    def rule_exists(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, Exists):
                if any(self.has(g, y, c.filler) for y in self.neighbours(g, x, c.role)):
                    continue
                y = self._new_node(g, x)
                self._log("exists", (x, y), c)
                self.add_edge(g, x, y, c.role)
                self.add(g, y, c.filler)
                return True
        return None

    def rule_at_least(self, g, x):
        for c in list(g.labels[x]):
            if isinstance(c, AtLeast):
                neigh = [y for y in self.neighbours(g, x, c.role) if self.has(g, y, c.filler)]
                if _has_distinct(neigh, c.n, g.ineq):
                    continue
                new = []
                for _ in range(c.n):
                    y = self._new_node(g, x)
                    self.add_edge(g, x, y, c.role)
                    self.add(g, y, c.filler)
                    new.append(y)
                for i, y in enumerate(new):
                    for z in new[i + 1:]:
                        g.ineq.add(frozenset((y, z)))
                self._log("at-least", (x,) + tuple(new), c)
                return True
        return None

    RULES = (
        ("and", "rule_and", False),
        ("nominal", "rule_nominal", False),
        ("at-most", "rule_at_most", False),
        ("or", "rule_or", False),
        ("forall", "rule_forall", False),
        ("forall+", "rule_forall_plus", False),
        ("self", "rule_self", False),
        ("reflexive", "rule_reflexive", False),
        ("choose", "rule_choose", False),
        ("exists", "rule_exists", True),
        ("at-least", "rule_at_least", True),
    )

    def _expand(self, g):
        """Apply rules until clash, completion or a branch point."""
        local = [getattr(self, meth) for _, meth, gen in self.RULES if not gen]
        generating = [getattr(self, meth) for _, meth, gen in self.RULES if gen]
        while True:
            if g.clash is not None:
                return g.clash
            status = _BlockingStatus(self, g)
            result = self._first_rule(g, status, local) or self._first_generating(g, status, generating)
            if result is None:
                return None
            if isinstance(result, _Branch):
                return result

    @staticmethod
    def _first_rule(g, status, rules):
        # non-generating rules: by priority, then oldest node first
        active = [x for x in sorted(g.stale) if status.get(x, ("",))[0] != "indirect"]
        for fn in rules:
            for x in active:
                result = fn(g, x)
                if result is not None:
                    return result
        g.stale.difference_update(active)
        return None

    @staticmethod
    def _first_generating(g, status, rules):
        # generating rules: oldest node first, so a node gets all its successors
        # before any of them grows its own
        for x in sorted(g.gen_stale):
            if x in status:
                continue
            for fn in rules:
                result = fn(g, x)
                if result is not None:
                    return result
            g.gen_stale.discard(x)
        return None

    def _apply(self, g, alt):
        kind = alt[0]
        if kind == "add":
            _, x, c = alt
            self.add(g, x, c)
        elif kind == "merge":
            self.merge_pair(g, alt[1], alt[2])

    def _describe(self, alt):
        if alt[0] == "add":
            return alt[1:2], alt[2]
        return alt[1:], "merge"

    def run(self) -> TableauVerdict:
        reasons = self.incomplete_reasons()
        try:
            g = self._initial_graph()
            stack = []
            while True:
                outcome = self._expand(g)
                if outcome is None:
                    return TableauVerdict(
                        SATISFIABLE,
                        model=self._model(g),
                        trace=tuple(self.trace),
                        backtracks=self.backtracks,
                        nodes_created=self.created,
                        incomplete_reasons=reasons,
                    )
                if isinstance(outcome, _Branch):
                    frame = [outcome, g, 0]
                    stack.append(frame)
                    g = g.copy()
                    nodes, what = self._describe(outcome.alternatives[0])
                    self._log(f"{outcome.rule}[1/{len(outcome.alternatives)}]", nodes, what)
                    self._apply(g, outcome.alternatives[0])
                    continue
                clash = outcome
                self._log("clash:" + clash.kind, clash.nodes, clash.detail)
                while stack:
                    frame = stack[-1]
                    branch, saved, idx = frame
                    idx += 1
                    if idx < len(branch.alternatives):
                        frame[2] = idx
                        self.backtracks += 1
                        self._log("backtrack", branch.nodes, branch.rule)
                        last = idx == len(branch.alternatives) - 1
                        g = saved if last else saved.copy()
                        if last:
                            stack.pop()
                        alt = branch.alternatives[idx]
                        nodes, what = self._describe(alt)
                        self._log(f"{branch.rule}[{idx + 1}/{len(branch.alternatives)}]", nodes, what)
                        self._apply(g, alt)
                        break
                    stack.pop()
                else:
                    return TableauVerdict(
                        UNSATISFIABLE,
                        clash=clash,
                        trace=tuple(self.trace[:-1]),
                        backtracks=self.backtracks,
                        nodes_created=self.created,
                        incomplete_reasons=reasons,
                    )
        except _Abort:
            return TableauVerdict(
                INCONCLUSIVE,
                trace=tuple(self.trace),
                backtracks=self.backtracks,
                nodes_created=self.created,
                incomplete_reasons=reasons,
            )

    def _model(self, g) -> ModelDescription:
        status = self.blocking(g)
        nodes = []
        for x in g.nodes():
            concepts = sorted(
                {c.name for c in g.labels[x] if isinstance(c, Atomic)}
                | {"{" + ",".join(sorted(c.individuals)) + "}" for c in g.labels[x] if isinstance(c, Nominal)}
            )
            st = status.get(x)
            nodes.append(
                ModelNode(
                    x,
                    tuple(str(n) for n in g.names.get(x, ())),
                    tuple(concepts),
                    st[1] if st and st[0] == "direct" else None,
                )
            )
        edges = sorted(
            {(a, str(r), b) for (a, b), roles in g.edges.items() for r in roles},
            key=lambda e: (e[0], e[2], e[1]),
        )
        return ModelDescription(tuple(nodes), tuple(edges))


class _BlockingStatus:
    """Pairwise blocking status of anonymous nodes, computed on demand."""

    def __init__(self, tableau, g):
        self.t = tableau
        self.g = g
        self.memo = {}
        self.frozen = {}

    def _fl(self, n):
        if n not in self.frozen:
            self.frozen[n] = frozenset(self.g.labels[n])
        return self.frozen[n]

    def __contains__(self, x):
        return self.get(x) is not None

    def get(self, x, default=None):
        # settle ancestors first, top-down, so long chains need no recursion
        chain = []
        n = x
        while n is not None and n not in self.memo:
            chain.append(n)
            n = self.g.parent.get(n)
        for n in reversed(chain):
            self.memo[n] = self._compute(n)
        st = self.memo[x]
        return default if st is None else st

    def _compute(self, x):
        g = self.g
        p = g.parent.get(x)
        if p is None:
            return None
        if self.memo.get(p) is not None:
            return ("indirect", p)
        if g.parent.get(p) is None:
            return None
        edge = None
        anc = p
        while anc is not None and g.parent.get(anc) is not None:
            ap = g.parent[anc]
            if g.parent.get(ap) is None:
                break
            if self._fl(anc) == self._fl(x) and self._fl(ap) == self._fl(p):
                if edge is None:
                    edge = self.t._edge_label(g, p, x)
                if self.t._edge_label(g, ap, anc) == edge:
                    return ("direct", anc)
            anc = ap
        return None


def _has_distinct(nodes, n, ineq):
    """True if ``nodes`` contains ``n`` pairwise-unequal members."""
    if n <= 0:
        return True
    if len(nodes) < n:
        return False
    if n == 1:
        return True

    def extend(chosen, start):
        if len(chosen) == n:
            return True
        for i in range(start, len(nodes)):
            y = nodes[i]
            if all(frozenset((y, z)) in ineq for z in chosen):
                if extend(chosen + [y], i + 1):
                    return True
        return False

    return extend([], 0)


def _resolve_max_nodes(value):
    if value is not None:
        return int(value)
    env = os.environ.get("TABLEAUKB_MAX_NODES")
    return int(env) if env else DEFAULT_MAX_NODES


# --------------------------------------------------------------------------
# Public entry points

_FRESH = "__concept_test__"


def is_consistent(kb: KnowledgeBase, max_nodes=None) -> TableauVerdict:
    """Decide whether ``kb`` (TBox, ABox, RBox without chains) has a model."""
    return Tableau(kb, max_nodes=max_nodes).run()


def is_satisfiable_concept(kb: KnowledgeBase, concept, max_nodes=None) -> TableauVerdict:
    """Satisfiability of ``concept`` w.r.t. ``kb``: ``kb`` plus ``concept(fresh)``."""
    fresh = _FRESH
    while fresh in kb.signature.individuals:
        fresh += "_"
    return Tableau(kb, extra_assertions=[(concept, fresh)], max_nodes=max_nodes).run()


def _require(verdict):
    if not verdict.conclusive:
        raise ResourceLimitExceeded(
            f"tableau node cap reached after {verdict.nodes_created} nodes"
        )
    return verdict


def subsumes(kb: KnowledgeBase, sup, sub, max_nodes=None) -> bool:
    """True iff ``sub SUBCLASS sup`` follows from ``kb``."""
    if isinstance(sup, Top) or isinstance(sub, Bottom) or sup == sub:
        return True
    v = _require(is_satisfiable_concept(kb, And((sub, Not(sup))), max_nodes=max_nodes))
    return not v.satisfiable


def instance_of(kb: KnowledgeBase, individual: str, concept, max_nodes=None) -> bool:
    """True iff ``concept(individual)`` follows from ``kb``."""
    v = Tableau(kb, extra_assertions=[(Not(concept), individual)], max_nodes=max_nodes).run()
    return not _require(v).satisfiable
