"""Finite-model oracle: exhaustive model search over small domains.

The oracle is the semantic reference for differential tests. It interprets
every construct with its unrestricted meaning (role chains everywhere, the
universal role as domain x domain, DL-safe rules over named individuals) and
shares no reasoning code with the tableau.

For each domain size ``d = 1 .. max_domain`` the knowledge base is grounded
into propositional clauses over "element e is in A", "(e, f) is in r" and
"individual a denotes e" variables, and the clause set is searched
exhaustively by a CDCL solver. Search order is fixed, so the model returned
is always the same.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import BudgetExceeded
from .model import (
    And,
    AsymmetricRole,
    AtLeast,
    Atomic,
    AtMost,
    Bottom,
    ComplexRoleInclusion,
    ConceptAssertion,
    ConceptAtom,
    ConceptEquivalence,
    ConceptInclusion,
    Constant,
    DifferentIndividuals,
    DisjointRoles,
    DlSafeRule,
    Domain,
    Exists,
    ForAll,
    INDIVIDUAL_PREDICATE,
    InverseRole,
    IrreflexiveRole,
    KnowledgeBase,
    Literal,
    NegatedRoleAssertion,
    Nominal,
    NonDlAtom,
    Not,
    Or,
    disj,
    Range,
    ReflexiveRole,
    Role,
    RoleAssertion,
    RoleAtom,
    RoleEquivalence,
    RoleInclusion,
    SameIndividual,
    SelfRestriction,
    Top,
    TransitiveRole,
    UniversalRole,
    axiom_individuals,
)
from .normalize import nnf
from .sat import BudgetExhausted, Solver

DEFAULT_BUDGET = 10**7


# --------------------------------------------------------------------------
# Interpretations and direct evaluation


@dataclass(frozen=True, eq=False)
class Interpretation:
    """A finite interpretation over the domain ``0 .. size-1``."""

    size: int
    concepts: dict = field(default_factory=dict)  # name -> frozenset of elements
    roles: dict = field(default_factory=dict)  # name -> frozenset of pairs
    individuals: dict = field(default_factory=dict)  # name or Literal -> element
    predicates: dict = field(default_factory=dict)  # name -> frozenset of tuples

    @property
    def domain(self) -> range:
        return range(self.size)

    def relation(self, role) -> frozenset:
        if isinstance(role, UniversalRole):
            return frozenset(product(self.domain, repeat=2))
        pairs = self.roles.get(role.name, frozenset())
        if isinstance(role, InverseRole):
            return frozenset((b, a) for a, b in pairs)
        return pairs

    def extension(self, c) -> frozenset:
        """Set of elements belonging to concept ``c``."""
        everything = frozenset(self.domain)
        if isinstance(c, Atomic):
            return self.concepts.get(c.name, frozenset())
        if isinstance(c, Top):
            return everything
        if isinstance(c, Bottom):
            return frozenset()
        if isinstance(c, Not):
            return everything - self.extension(c.operand)
        if isinstance(c, And):
            out = everything
            for o in c.operands:
                out &= self.extension(o)
            return out
        if isinstance(c, Or):
            out = frozenset()
            for o in c.operands:
                out |= self.extension(o)
            return out
        if isinstance(c, Nominal):
            return frozenset(self.individuals[i] for i in c.individuals)
        if isinstance(c, SelfRestriction):
            return frozenset(a for a, b in self.relation(c.role) if a == b)
        rel = self.relation(c.role)
        filler = self.extension(c.filler)
        counts = {e: 0 for e in self.domain}
        succ = {e: 0 for e in self.domain}
        for a, b in rel:
            succ[a] += 1
            if b in filler:
                counts[a] += 1
        if isinstance(c, Exists):
            return frozenset(e for e in self.domain if counts[e] >= 1)
        if isinstance(c, ForAll):
            return frozenset(e for e in self.domain if counts[e] == succ[e])
        if isinstance(c, AtLeast):
            return frozenset(e for e in self.domain if counts[e] >= c.n)
        if isinstance(c, AtMost):
            return frozenset(e for e in self.domain if counts[e] <= c.n)
        raise TypeError(f"not a concept: {c!r}")

    def compose(self, chain) -> frozenset:
        rel = frozenset((e, e) for e in self.domain)
        for r in chain:
            step = self.relation(r)
            rel = frozenset((a, c) for a, b in rel for b2, c in step if b == b2)
        return rel

    def to_text(self) -> str:
        """Element rows by concept columns, then individuals and role pairs."""
        names = sorted(self.concepts)
        lines = [f"domain {self.size}"]
        if names:
            lines.append("   " + " ".join(names))
            for e in self.domain:
                cells = []
                for n in names:
                    mark = "x" if e in self.concepts[n] else "."
                    cells.append(mark.ljust(len(n)))
                lines.append(f"{e:<2} " + " ".join(cells).rstrip())
        for ind in sorted(self.individuals, key=str):
            lines.append(f"{ind} = {self.individuals[ind]}")
        for r in sorted(self.roles):
            pairs = " ".join(f"({a},{b})" for a, b in sorted(self.roles[r]))
            lines.append(f"{r}: {pairs}".rstrip())
        for p in sorted(self.predicates):
            tuples = " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(self.predicates[p]))
            lines.append(f"{p}: {tuples}".rstrip())
        return "\n".join(lines) + "\n"


def satisfies(i: Interpretation, ax) -> bool:
    """Truth of an axiom or DL-safe rule in ``i`` under standard semantics."""
    if isinstance(ax, DlSafeRule):
        return _satisfies_rule(i, ax)
    if isinstance(ax, ConceptInclusion):
        return i.extension(ax.sub) <= i.extension(ax.sup)
    if isinstance(ax, ConceptEquivalence):
        return i.extension(ax.a) == i.extension(ax.b)
    if isinstance(ax, (Domain, Range)):
        d = ax.desugar()
        return i.extension(d.sub) <= i.extension(d.sup)
    if isinstance(ax, ConceptAssertion):
        return i.individuals[ax.individual] in i.extension(ax.concept)
    if isinstance(ax, RoleAssertion):
        return (i.individuals[ax.subject], i.individuals[ax.object]) in i.relation(ax.role)
    if isinstance(ax, NegatedRoleAssertion):
        return (i.individuals[ax.subject], i.individuals[ax.object]) not in i.relation(ax.role)
    if isinstance(ax, SameIndividual):
        return i.individuals[ax.a] == i.individuals[ax.b]
    if isinstance(ax, DifferentIndividuals):
        return i.individuals[ax.a] != i.individuals[ax.b]
    if isinstance(ax, RoleInclusion):
        return i.relation(ax.sub) <= i.relation(ax.sup)
    if isinstance(ax, RoleEquivalence):
        return i.relation(ax.a) == i.relation(ax.b)
    if isinstance(ax, ComplexRoleInclusion):
        return i.compose(ax.chain) <= i.relation(ax.sup)
    if isinstance(ax, TransitiveRole):
        return i.compose((ax.role, ax.role)) <= i.relation(ax.role)
    if isinstance(ax, DisjointRoles):
        return not (i.relation(ax.r) & i.relation(ax.s))
    if isinstance(ax, AsymmetricRole):
        rel = i.relation(ax.role)
        return not any((b, a) in rel for a, b in rel)
    if isinstance(ax, ReflexiveRole):
        rel = i.relation(ax.role)
        return all((e, e) in rel for e in i.domain)
    if isinstance(ax, IrreflexiveRole):
        return not any(a == b for a, b in i.relation(ax.role))
    raise TypeError(f"not an axiom: {ax!r}")


def _named_individuals(i: Interpretation):
    return sorted(n for n in i.individuals if isinstance(n, str))


def _satisfies_rule(i, rule):
    names = _named_individuals(i)
    variables = rule.variables
    for values in product(names, repeat=len(variables)):
        binding = dict(zip(variables, values))
        if all(_atom_holds(i, a, binding) for a in rule.body):
            if not _atom_holds(i, rule.head, binding):
                return False
    return True


def _atom_holds(i, atom, binding):
    def elem(t):
        return i.individuals[binding[t] if not isinstance(t, Constant) else t.name]

    if isinstance(atom, ConceptAtom):
        return elem(atom.term) in i.concepts.get(atom.concept, frozenset())
    if isinstance(atom, RoleAtom):
        return (elem(atom.subject), elem(atom.object)) in i.roles.get(atom.role, frozenset())
    if atom.predicate == INDIVIDUAL_PREDICATE:
        return True  # variables are bound to named individuals only
    return tuple(elem(t) for t in atom.terms) in i.predicates.get(atom.predicate, frozenset())


def is_model(i: Interpretation, kb: KnowledgeBase) -> bool:
    return all(satisfies(i, ax) for ax in kb.axioms) and all(
        satisfies(i, r) for r in kb.rules
    )


# --------------------------------------------------------------------------
# Grounding


class _Grounding:
    def __init__(self, kb: KnowledgeBase, size: int):
        self.kb = kb
        self.d = size
        self.s = Solver()
        sig = kb.signature
        self.concept_names = sorted(sig.concepts)
        self.role_names = sorted(sig.roles)
        self.names = sorted(sig.individuals)
        literals = set()
        for ax in kb.abox:
            for ind in axiom_individuals(ax):
                if isinstance(ind, Literal):
                    literals.add(ind)
            if isinstance(ax, RoleAssertion) and isinstance(ax.object, Literal):
                literals.add(ax.object)
        self.literals = sorted(literals)
        self.arity = {}
        for rule in kb.rules:
            for atom in (rule.head,) + rule.body:
                if isinstance(atom, NonDlAtom) and atom.predicate != INDIVIDUAL_PREDICATE:
                    self.arity[atom.predicate] = len(atom.terms)
        self.true = self.s.new_var()
        self.s.add_clause([self.true])
        self.cvar = {}
        self.rvar = {}
        self.pvar = {}
        self.eq = {}
        self.memo = {}
        dom = range(size)
        # variable creation fixes the decision order
        for k, ind in enumerate(self.names + self.literals):
            for e in dom:
                # restricted growth: the k-th individual uses elements 0..k
                if e <= k:
                    self.eq[ind, e] = self.s.new_var(prefer_true=True)
        for a in self.concept_names:
            for e in dom:
                self.cvar[a, e] = self.s.new_var()
        for r in self.role_names:
            for e in dom:
                for f in dom:
                    self.rvar[r, e, f] = self.s.new_var()
        for p in sorted(self.arity):
            for t in product(dom, repeat=self.arity[p]):
                self.pvar[p, t] = self.s.new_var()
        self._individual_constraints()
        for ax in kb.axioms:
            self._axiom(ax)
        for rule in kb.rules:
            self._rule(rule)

    # -- literal helpers
    def eq_lit(self, ind, e):
        v = self.eq.get((ind, e))
        return v if v is not None else -self.true

    def role_lit(self, role, e, f):
        if isinstance(role, UniversalRole):
            return self.true
        if isinstance(role, InverseRole):
            e, f = f, e
        return self.rvar[role.name, e, f]

    def aux(self):
        return self.s.new_var()

    def lit(self, c, e):
        """A literal that, when true, forces ``e`` into nnf concept ``c``."""
        if isinstance(c, Atomic):
            return self.cvar[c.name, e]
        if isinstance(c, Top):
            return self.true
        if isinstance(c, Bottom):
            return -self.true
        if isinstance(c, Not) and isinstance(c.operand, Atomic):
            return -self.cvar[c.operand.name, e]
        if isinstance(c, SelfRestriction):
            return self.role_lit(c.role, e, e)
        if isinstance(c, Not) and isinstance(c.operand, SelfRestriction):
            return -self.role_lit(c.operand.role, e, e)
        if isinstance(c, Nominal) and len(c.individuals) == 1:
            (ind,) = c.individuals
            return self.eq_lit(ind, e)
        if isinstance(c, Not) and isinstance(c.operand, Nominal) and len(c.operand.individuals) == 1:
            (ind,) = c.operand.individuals
            return -self.eq_lit(ind, e)
        key = (c, e)
        t = self.memo.get(key)
        if t is not None:
            return t
        t = self.aux()
        self.memo[key] = t
        self._define(t, c, e)
        return t

    def _define(self, t, c, e):
        add = self.s.add_clause
        dom = range(self.d)
        if isinstance(c, And):
            for o in c.operands:
                add([-t, self.lit(o, e)])
        elif isinstance(c, Or):
            add([-t] + [self.lit(o, e) for o in c.operands])
        elif isinstance(c, Nominal):
            add([-t] + [self.eq_lit(i, e) for i in sorted(c.individuals)])
        elif isinstance(c, Not) and isinstance(c.operand, Nominal):
            for i in sorted(c.operand.individuals):
                add([-t, -self.eq_lit(i, e)])
        elif isinstance(c, Exists):
            add([-t] + [self._pair(c.role, e, f, c.filler) for f in dom])
        elif isinstance(c, ForAll):
            for f in dom:
                add([-t, -self.role_lit(c.role, e, f), self.lit(c.filler, f)])
        elif isinstance(c, AtLeast):
            if c.n > self.d:
                add([-t])
                return
            q = [self._pair(c.role, e, f, c.filler) for f in dom]
            # at least n of q: every (d - n + 1)-subset contains a true one
            for subset in combinations(q, self.d - c.n + 1):
                add([-t] + list(subset))
        elif isinstance(c, AtMost):
            if c.n >= self.d:
                return
            neg = nnf(Not(c.filler))
            outs = [(-self.role_lit(c.role, e, f), self.lit(neg, f)) for f in dom]
            for subset in combinations(outs, c.n + 1):
                add([-t] + [x for pair in subset for x in pair])
        else:
            raise TypeError(f"concept is not in negation normal form: {c!r}")

    def _pair(self, role, e, f, filler):
        r = self.role_lit(role, e, f)
        if isinstance(filler, Top):
            return r
        p = self.aux()
        self.s.add_clause([-p, r])
        self.s.add_clause([-p, self.lit(filler, f)])
        return p

    # -- axioms
    def _individual_constraints(self):
        add = self.s.add_clause
        dom = range(self.d)
        everyone = self.names + self.literals
        for k, ind in enumerate(everyone):
            add([self.eq_lit(ind, e) for e in dom])
            for e, f in combinations(dom, 2):
                add([-self.eq_lit(ind, e), -self.eq_lit(ind, f)])
            for e in range(1, min(k, self.d - 1) + 1):
                add([-self.eq_lit(ind, e)] + [self.eq_lit(j, e - 1) for j in everyone[:k]])
        for x, y in combinations(self.literals, 2):
            for e in dom:
                add([-self.eq_lit(x, e), -self.eq_lit(y, e)])

    def _axiom(self, ax):
        add = self.s.add_clause
        dom = range(self.d)
        if isinstance(ax, (Domain, Range)):
            ax = ax.desugar()
        if isinstance(ax, ConceptInclusion):
            g = nnf(disj(Not(ax.sub), ax.sup))
            for e in dom:
                add([self.lit(g, e)])
        elif isinstance(ax, ConceptEquivalence):
            self._axiom(ConceptInclusion(ax.a, ax.b))
            self._axiom(ConceptInclusion(ax.b, ax.a))
        elif isinstance(ax, ConceptAssertion):
            c = nnf(ax.concept)
            for e in dom:
                add([-self.eq_lit(ax.individual, e), self.lit(c, e)])
        elif isinstance(ax, (RoleAssertion, NegatedRoleAssertion)):
            sign = 1 if isinstance(ax, RoleAssertion) else -1
            for e in dom:
                for f in dom:
                    add([
                        -self.eq_lit(ax.subject, e),
                        -self.eq_lit(ax.object, f),
                        sign * self.role_lit(ax.role, e, f),
                    ])
        elif isinstance(ax, SameIndividual):
            for e in dom:
                add([-self.eq_lit(ax.a, e), self.eq_lit(ax.b, e)])
                add([self.eq_lit(ax.a, e), -self.eq_lit(ax.b, e)])
        elif isinstance(ax, DifferentIndividuals):
            for e in dom:
                add([-self.eq_lit(ax.a, e), -self.eq_lit(ax.b, e)])
        elif isinstance(ax, RoleInclusion):
            for e in dom:
                for f in dom:
                    add([-self.role_lit(ax.sub, e, f), self.role_lit(ax.sup, e, f)])
        elif isinstance(ax, RoleEquivalence):
            self._axiom(RoleInclusion(ax.a, ax.b))
            self._axiom(RoleInclusion(ax.b, ax.a))
        elif isinstance(ax, (ComplexRoleInclusion, TransitiveRole)):
            chain, sup = (
                (ax.chain, ax.sup) if isinstance(ax, ComplexRoleInclusion) else ((ax.role, ax.role), ax.role)
            )
            for xs in product(dom, repeat=len(chain) + 1):
                clause = [-self.role_lit(r, xs[k], xs[k + 1]) for k, r in enumerate(chain)]
                add(clause + [self.role_lit(sup, xs[0], xs[-1])])
        elif isinstance(ax, DisjointRoles):
            for e in dom:
                for f in dom:
                    add([-self.role_lit(ax.r, e, f), -self.role_lit(ax.s, e, f)])
        elif isinstance(ax, AsymmetricRole):
            for e in dom:
                for f in dom:
                    add([-self.role_lit(ax.role, e, f), -self.role_lit(ax.role, f, e)])
        elif isinstance(ax, ReflexiveRole):
            for e in dom:
                add([self.role_lit(ax.role, e, e)])
        elif isinstance(ax, IrreflexiveRole):
            for e in dom:
                add([-self.role_lit(ax.role, e, e)])
        else:
            raise TypeError(f"not an axiom: {ax!r}")

    def _rule(self, rule):
        variables = rule.variables
        dom = range(self.d)
        for values in product(self.names, repeat=len(variables)):
            binding = dict(zip(variables, values))

            def name(t):
                return t.name if isinstance(t, Constant) else binding[t]

            inds = sorted({name(t) for a in (rule.head,) + rule.body for t in a.terms})
            for elems in product(dom, repeat=len(inds)):
                where = dict(zip(inds, elems))
                if any((ind, where[ind]) not in self.eq for ind in inds):
                    continue
                clause = [-self.eq[ind, where[ind]] for ind in inds]
                for atom in rule.body:
                    clause.append(-self._atom_lit(atom, name, where))
                clause.append(self._atom_lit(rule.head, name, where))
                self.s.add_clause(clause)

    def _atom_lit(self, atom, name, where):
        if isinstance(atom, ConceptAtom):
            return self.cvar[atom.concept, where[name(atom.term)]]
        if isinstance(atom, RoleAtom):
            return self.rvar[atom.role, where[name(atom.subject)], where[name(atom.object)]]
        if atom.predicate == INDIVIDUAL_PREDICATE:
            return self.true
        return self.pvar[atom.predicate, tuple(where[name(t)] for t in atom.terms)]

    def decode(self, assignment) -> Interpretation:
        concepts = {
            a: frozenset(e for e in range(self.d) if assignment[self.cvar[a, e]])
            for a in self.concept_names
        }
        roles = {
            r: frozenset(
                (e, f) for e in range(self.d) for f in range(self.d) if assignment[self.rvar[r, e, f]]
            )
            for r in self.role_names
        }
        individuals = {
            ind: e for (ind, e), v in self.eq.items() if assignment[v]
        }
        predicates = {
            p: frozenset(t for (q, t), v in self.pvar.items() if q == p and assignment[v])
            for p in sorted(self.arity)
        }
        return Interpretation(self.d, concepts, roles, individuals, predicates)


def find_model(kb: KnowledgeBase, max_domain: int, budget: int = DEFAULT_BUDGET):
    """First model of ``kb`` with at most ``max_domain`` elements, or None.

    Sizes are tried in increasing order. ``budget`` caps the total number of
    solver decisions and conflicts; running out raises BudgetExceeded rather
    than answering None.
    """
    if max_domain < 1:
        raise ValueError("max_domain must be at least 1")
    spent = 0
    for size in range(1, max_domain + 1):
        g = _Grounding(kb, size)
        try:
            assignment = g.s.solve(budget=budget - spent)
        except BudgetExhausted:
            raise BudgetExceeded(
                f"oracle budget of {budget} search steps exhausted at domain size {size}",
                domain_size=size,
            ) from None
        spent += g.s.steps
        if assignment is not None:
            return g.decode(assignment)
    return None
