"""DL-safe rules: safety guarding and forward-chaining materialization.

Rules only ever bind variables to named individuals, so evaluation is plain
datalog over a finite set of ground atoms. Two evaluation modes exist:

``asserted``
    DL body atoms hold iff the fact is in the ABox or was derived earlier.
``entailment``
    concept body atoms hold iff the tableau proves the membership from the
    knowledge base plus everything derived so far; role body atoms hold iff
    the fact follows from asserted and derived facts through the role
    hierarchy and ``SAME`` statements.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import InconsistentKBError, UnsafeRuleError
from .model import (
    INDIVIDUAL_PREDICATE,
    ConceptAssertion,
    ConceptAtom,
    Constant,
    Atomic,
    DlSafeRule,
    InverseRole,
    KnowledgeBase,
    NonDlAtom,
    Role,
    RoleAssertion,
    RoleAtom,
    SameIndividual,
    Variable,
    guard,
)
from .normalize import check_regularity, compile_chains_to_rules, role_closure

ASSERTED = "asserted"
ENTAILMENT = "entailment"


# --------------------------------------------------------------------------
# Safety


def unsafe_variables(rule: DlSafeRule) -> tuple:
    """Variables of ``rule`` with no occurrence in a non-DL body atom."""
    guarded = {v for a in rule.body if isinstance(a, NonDlAtom) for v in a.variables}
    return tuple(v for v in rule.variables if v not in guarded)


def make_safe(rule: DlSafeRule, mode: str = "auto") -> DlSafeRule:
    """Guard every unsafe variable with ``O(?v)`` (auto) or reject it (strict)."""
    missing = unsafe_variables(rule)
    if not missing:
        return rule
    if mode == "strict":
        v = missing[0]
        raise UnsafeRuleError(
            f"rule '{rule}' is not DL-safe: variable {v} occurs in no non-DL body atom",
            variable=v,
        )
    if mode != "auto":
        raise ValueError(f"unknown safety mode {mode!r}")
    return DlSafeRule(rule.head, rule.body + tuple(guard(v) for v in missing), label=rule.label)


# --------------------------------------------------------------------------
# Facts


def ground_atom(predicate_kind: str, predicate: str, args) -> object:
    args = tuple(args)
    if predicate_kind == "concept":
        return ConceptAtom(predicate, Constant(args[0]))
    if predicate_kind == "role":
        return RoleAtom(predicate, Constant(args[0]), Constant(args[1]))
    return NonDlAtom(predicate, tuple(Constant(a) for a in args))


def atom_args(atom) -> tuple:
    return tuple(t.name for t in atom.terms)


@dataclass(frozen=True)
class Derivation:
    """Why a fact is in the store: a rule instance, the ABox, or entailment."""

    source: str  # rule label, "asserted" or "entailed"
    bindings: tuple = ()  # ((variable name, individual), ...)

    def __str__(self):
        if not self.bindings:
            return self.source
        inner = ", ".join(f"?{v}={a}" for v, a in self.bindings)
        return f"{self.source} {{{inner}}}"


@dataclass
class FactStore:
    """Ground atoms with provenance, in the order they were added."""

    facts: dict = field(default_factory=dict)  # ground atom -> list of Derivation
    complete: bool = True
    rounds: int = 0
    mode: str = ASSERTED

    def add(self, atom, why: Derivation) -> bool:
        known = self.facts.get(atom)
        if known is None:
            self.facts[atom] = [why]
            return True
        if why.source in ("asserted", "entailed") and all(d.source != why.source for d in known):
            known.append(why)
        return False

    def __contains__(self, atom):
        return atom in self.facts

    def __len__(self):
        return len(self.facts)

    def __iter__(self):
        return iter(self.facts)

    @property
    def derived(self) -> tuple:
        """Facts produced by some rule, in derivation order."""
        return tuple(
            a for a, ds in self.facts.items() if any(d.source not in ("asserted", "entailed") for d in ds)
        )

    @property
    def asserted(self) -> tuple:
        return tuple(a for a, ds in self.facts.items() if ds[0].source == "asserted")

    def of(self, predicate: str) -> set:
        return {atom_args(a) for a in self.facts if a.predicate == predicate}

    def concept_facts(self) -> set:
        return {(a.concept, a.term.name) for a in self.facts if isinstance(a, ConceptAtom)}

    def role_facts(self) -> set:
        return {
            (a.role, a.subject.name, a.object.name) for a in self.facts if isinstance(a, RoleAtom)
        }

    def predicate_facts(self) -> set:
        return {(a.predicate, atom_args(a)) for a in self.facts if isinstance(a, NonDlAtom)}

    def provenance(self, atom) -> tuple:
        return tuple(self.facts.get(atom, ()))

    # -- export
    def to_kb(self, derived_only=True) -> KnowledgeBase:
        """The facts as ABox assertions (non-DL facts become bodiless rules)."""
        atoms = self.derived if derived_only else tuple(self.facts)
        axioms, rules = [], []
        for a in atoms:
            if isinstance(a, ConceptAtom):
                axioms.append(ConceptAssertion(Atomic(a.concept), a.term.name))
            elif isinstance(a, RoleAtom):
                axioms.append(RoleAssertion(Role(a.role), a.subject.name, a.object.name))
            else:
                rules.append(DlSafeRule(a))
        return KnowledgeBase(tuple(axioms), tuple(rules))

    def to_dl(self, derived_only=True) -> str:
        from .dlsyntax import serialize_dl

        return serialize_dl(self.to_kb(derived_only))

    def to_turtle(self, derived_only=True) -> str:
        from .turtle import to_turtle

        kb = self.to_kb(derived_only)
        return to_turtle(KnowledgeBase(kb.axioms))

    def provenance_report(self) -> str:
        lines = []
        for atom, ds in self.facts.items():
            for d in ds:
                lines.append(f"{atom} <- {d}")
        if not self.complete:
            lines.append("# incomplete: materialization stopped before the fixpoint")
        return "\n".join(lines) + ("\n" if lines else "")


def asserted_facts(kb: KnowledgeBase) -> list:
    """Ground atoms stated directly by ``kb`` (ABox and bodiless rules)."""
    out = []
    for ax in kb.abox:
        if isinstance(ax, ConceptAssertion) and isinstance(ax.concept, Atomic):
            out.append(ConceptAtom(ax.concept.name, Constant(ax.individual)))
        elif isinstance(ax, RoleAssertion) and isinstance(ax.role, Role) and isinstance(ax.object, str):
            out.append(RoleAtom(ax.role.name, Constant(ax.subject), Constant(ax.object)))
    for rule in kb.rules:
        if rule.is_fact:
            out.append(rule.head)
    return out


# --------------------------------------------------------------------------
# Evaluation


def _match(atom, row, binding):
    """Extend ``binding`` so that ``atom`` matches the tuple ``row``."""
    out = binding
    for term, value in zip(atom.terms, row):
        if isinstance(term, Constant):
            if term.name != value:
                return None
        else:
            bound = out.get(term)
            if bound is None:
                if out is binding:
                    out = dict(binding)
                out[term] = value
            elif bound != value:
                return None
    return out


def _instantiate(atom, binding):
    terms = tuple(Constant(binding[t]) if isinstance(t, Variable) else t for t in atom.terms)
    if isinstance(atom, ConceptAtom):
        return ConceptAtom(atom.concept, terms[0])
    if isinstance(atom, RoleAtom):
        return RoleAtom(atom.role, terms[0], terms[1])
    return NonDlAtom(atom.predicate, terms)


def _join(atoms, relations, first=None, first_rows=None):
    """All bindings satisfying ``atoms``.

    With ``first`` given, that atom is matched against ``first_rows`` (a
    delta) and placed first; the rest follow in ascending relation size.
    """
    rest = [a for i, a in enumerate(atoms) if i != first]
    rest.sort(key=lambda a: (len(relations.get(a.predicate, ())), str(a)))
    plan = []
    if first is not None:
        plan.append((atoms[first], first_rows))
    plan += [(a, relations.get(a.predicate, ())) for a in rest]

    def solve(k, binding):
        if k == len(plan):
            yield binding
            return
        atom, rows = plan[k]
        for row in sorted(rows):
            b = _match(atom, row, binding)
            if b is not None:
                yield from solve(k + 1, b)

    yield from solve(0, {})


def _rule_label(rule, index):
    return rule.label or f"rule#{index + 1}"


def _heads(rule, relations, deltas=None):
    """Ground head atoms of ``rule``, with their bindings, in a fixed order."""
    out = []
    seen = set()
    if deltas is None:
        passes = [(None, None)]
    else:
        passes = [
            (i, deltas[a.predicate])
            for i, a in enumerate(rule.body)
            if deltas.get(a.predicate)
        ]
    for first, rows in passes:
        for binding in _join(rule.body, relations, first, rows):
            head = _instantiate(rule.head, binding)
            if head not in seen:
                seen.add(head)
                out.append((head, binding))
    return out


def _base_relations(kb, store):
    rel = {}
    for atom in store:
        rel.setdefault(atom.predicate, set()).add(atom_args(atom))
    rel[INDIVIDUAL_PREDICATE] = {(i,) for i in kb.signature.individuals}
    return rel


def apply_rule(rule: DlSafeRule, kb: KnowledgeBase, store: FactStore | None = None) -> set:
    """New ground head atoms of one rule against the ABox plus ``store``."""
    if store is None:
        store = FactStore()
    facts = FactStore()
    for a in asserted_facts(kb):
        facts.add(a, Derivation("asserted"))
    for a in store:
        facts.add(a, Derivation("derived"))
    relations = _base_relations(kb, facts)
    return {head for head, _ in _heads(rule, relations) if head not in facts}


class _Entailments:
    """Memoized membership checks against a knowledge base that only grows."""

    def __init__(self, kb, max_nodes=None):
        from .tableau import instance_of, is_consistent

        self._instance_of = instance_of
        self._is_consistent = is_consistent
        self.kb = kb
        self.max_nodes = max_nodes
        self.yes = set()
        self.no = set()
        self.closure = role_closure(kb)
        self.same = _same_classes(kb)

    def update(self, kb):
        self.kb = kb
        self.no.clear()  # entailments only grow as facts are added

    def consistent(self) -> bool:
        v = self._is_consistent(self.kb, max_nodes=self.max_nodes)
        return v.satisfiable or not v.conclusive

    def concept(self, name, individual) -> bool:
        key = (name, individual)
        if key in self.yes:
            return True
        if key in self.no:
            return False
        ok = self._instance_of(self.kb, individual, Atomic(name), max_nodes=self.max_nodes)
        (self.yes if ok else self.no).add(key)
        return ok

    def role_relation(self, role_rows: dict) -> dict:
        """Close role facts under the role hierarchy and SAME statements."""
        out = {}
        for name, rows in role_rows.items():
            for a, b in rows:
                for sup in self.closure.supers(Role(name)):
                    if isinstance(sup, Role):
                        pair, target = (a, b), sup.name
                    elif isinstance(sup, InverseRole):
                        pair, target = (b, a), sup.name
                    else:
                        continue
                    for x in self.same.get(pair[0], (pair[0],)):
                        for y in self.same.get(pair[1], (pair[1],)):
                            out.setdefault(target, set()).add((x, y))
        return out


def _same_classes(kb):
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for ax in kb.abox:
        if isinstance(ax, SameIndividual):
            ra, rb = find(ax.a), find(ax.b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for x in list(parent):
        groups.setdefault(find(x), set()).add(x)
    for root in list(groups):
        groups[root].add(root)
    return {x: tuple(sorted(g)) for g in groups.values() for x in g}


def materialize(
    kb: KnowledgeBase,
    mode: str = ASSERTED,
    safety: str = "auto",
    timeout: float | None = None,
    max_nodes=None,
) -> FactStore:
    """Forward-chain ``kb.rules`` and the compiled role axioms to a fixpoint.

    Evaluation is semi-naive: each round only joins through tuples that are
    new since the previous round. In entailment mode the derived facts are
    added to a working copy of the knowledge base after every round so that
    later tableau checks see them.
    """
    if mode not in (ASSERTED, ENTAILMENT):
        raise ValueError(f"unknown materialization mode {mode!r}")
    check_regularity(kb.rbox)
    rules = [make_safe(r, safety) for r in kb.rules if not r.is_fact]
    labelled = [
        DlSafeRule(r.head, r.body, label=_rule_label(r, i)) for i, r in enumerate(rules)
    ] + compile_chains_to_rules(kb)
    deadline = None if timeout is None else time.monotonic() + timeout
    store = FactStore(mode=mode)
    for atom in asserted_facts(kb):
        store.add(atom, Derivation("asserted"))

    sig = kb.signature
    ent = None
    if mode == ENTAILMENT:
        ent = _Entailments(kb, max_nodes)
        if not ent.consistent():
            raise InconsistentKBError("materialization refused: the knowledge base is inconsistent")
    concept_preds = sorted(
        {a.predicate for r in labelled for a in r.body if isinstance(a, ConceptAtom)}
    )
    individuals = sorted(i for i in sig.individuals if isinstance(i, str))
    working = kb
    previous = {}
    while True:
        relations = _base_relations(kb, store)
        if ent is not None:
            roles = {n: rows for n, rows in relations.items() if n in sig.roles or _is_role(labelled, n)}
            relations.update(ent.role_relation(roles))
            for c in concept_preds:
                rows = relations.setdefault(c, set())
                for ind in individuals:
                    if (ind,) not in rows and ent.concept(c, ind):
                        rows.add((ind,))
        deltas = {p: rows - previous.get(p, set()) for p, rows in relations.items()}
        new = []
        for rule in labelled:
            if deadline is not None and time.monotonic() > deadline:
                store.complete = False
                return store
            for head, binding in _heads(rule, relations, deltas):
                if head in store:
                    continue
                bindings = tuple((v.name, binding[v]) for v in rule.variables)
                if store.add(head, Derivation(rule.label, bindings)):
                    new.append(head)
        store.rounds += 1
        previous = relations
        if not new:
            break
        if ent is not None:
            extra = [
                ConceptAssertion(Atomic(a.concept), a.term.name)
                if isinstance(a, ConceptAtom)
                else RoleAssertion(Role(a.role), a.subject.name, a.object.name)
                for a in new
                if not isinstance(a, NonDlAtom)
            ]
            working = working.extend(extra)
            ent.update(working)
            if extra and not ent.consistent():
                raise InconsistentKBError("materialization refused: derived facts make the knowledge base inconsistent")
    if ent is not None:
        _mark_entailed(store, kb)
    return store


def _is_role(rules, name):
    return any(isinstance(a, RoleAtom) and a.role == name for r in rules for a in (r.head,) + r.body)


def _mark_entailed(store, kb):
    """Give derived facts that the knowledge base alone entails a second source."""
    ent = _Entailments(kb)
    asserted_roles = {}
    for a in store.asserted:
        if isinstance(a, RoleAtom):
            asserted_roles.setdefault(a.role, set()).add(atom_args(a))
    role_closure_rows = ent.role_relation(asserted_roles)
    for atom in store.derived:
        if isinstance(atom, ConceptAtom):
            if atom.concept in kb.signature.concepts and ent.concept(atom.concept, atom.term.name):
                store.add(atom, Derivation("entailed"))
        elif isinstance(atom, RoleAtom):
            if atom_args(atom) in role_closure_rows.get(atom.role, ()):
                store.add(atom, Derivation("entailed"))
