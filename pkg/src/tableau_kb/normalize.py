"""Preprocessing shared by the tableau and the rule engine."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import NonRegularRBoxError, UnsupportedConstructError
from .model import (
    BOTTOM,
    TOP,
    And,
    AtLeast,
    Atomic,
    AtMost,
    Bottom,
    ComplexRoleInclusion,
    ConceptEquivalence,
    ConceptInclusion,
    DlSafeRule,
    Domain,
    Exists,
    ForAll,
    InverseRole,
    KnowledgeBase,
    Nominal,
    Not,
    Or,
    Range,
    Role,
    RoleAtom,
    RoleEquivalence,
    RoleInclusion,
    SelfRestriction,
    Top,
    TransitiveRole,
    UniversalRole,
    Variable,
    conj,
    disj,
    guard,
    inverse,
)


# --------------------------------------------------------------------------
# Negation normal form


def nnf(c):
    """Push negation inwards until it only sits on atoms, nominals and Self."""
    return _nnf(c, False)


def complement(c):
    """``nnf(NOT c)``."""
    return _nnf(c, True)


def _and(ops):
    ops = [o for o in ops if not isinstance(o, Top)]
    if any(isinstance(o, Bottom) for o in ops):
        return BOTTOM
    return conj(*ops)


def _or(ops):
    ops = [o for o in ops if not isinstance(o, Bottom)]
    if any(isinstance(o, Top) for o in ops):
        return TOP
    return disj(*ops)


def _exists(role, filler):
    return BOTTOM if isinstance(filler, Bottom) else Exists(role, filler)


def _forall(role, filler):
    return TOP if isinstance(filler, Top) else ForAll(role, filler)


def _at_least(n, role, filler):
    if n == 0:
        return TOP
    return BOTTOM if isinstance(filler, Bottom) else AtLeast(n, role, filler)


def _at_most(n, role, filler):
    return TOP if isinstance(filler, Bottom) else AtMost(n, role, filler)


def _nnf(c, neg):
    if isinstance(c, (Atomic, Nominal, SelfRestriction)):
        return Not(c) if neg else c
    if isinstance(c, Top):
        return BOTTOM if neg else TOP
    if isinstance(c, Bottom):
        return TOP if neg else BOTTOM
    if isinstance(c, Not):
        return _nnf(c.operand, not neg)
    if isinstance(c, And):
        ops = [_nnf(o, neg) for o in c.operands]
        return _or(ops) if neg else _and(ops)
    if isinstance(c, Or):
        ops = [_nnf(o, neg) for o in c.operands]
        return _and(ops) if neg else _or(ops)
    if isinstance(c, Exists):
        if neg:
            return _forall(c.role, _nnf(c.filler, True))
        return _exists(c.role, _nnf(c.filler, False))
    if isinstance(c, ForAll):
        if neg:
            return _exists(c.role, _nnf(c.filler, True))
        return _forall(c.role, _nnf(c.filler, False))
    if isinstance(c, AtLeast):
        filler = _nnf(c.filler, False)
        if neg:
            return BOTTOM if c.n == 0 else _at_most(c.n - 1, c.role, filler)
        return _at_least(c.n, c.role, filler)
    if isinstance(c, AtMost):
        filler = _nnf(c.filler, False)
        if neg:
            return _at_least(c.n + 1, c.role, filler)
        return _at_most(c.n, c.role, filler)
    raise TypeError(f"not a concept: {c!r}")


def is_nnf(c) -> bool:
    from .model import walk

    return all(
        isinstance(sub.operand, (Atomic, Nominal, SelfRestriction))
        for sub in walk(c)
        if isinstance(sub, Not)
    )


def gci_disjunctions(tbox) -> list:
    """Internalize each inclusion ``C SUBCLASS D`` as ``nnf(NOT C OR D)``."""
    out = []
    for ax in tbox:
        if isinstance(ax, (Domain, Range)):
            ax = ax.desugar()
        if isinstance(ax, ConceptInclusion):
            pairs = [(ax.sub, ax.sup)]
        elif isinstance(ax, ConceptEquivalence):
            pairs = [(ax.a, ax.b), (ax.b, ax.a)]
        else:
            continue
        for sub, sup in pairs:
            out.append(nnf(disj(Not(sub), sup)))
    return out


def absorb(tbox):
    """Split the TBox into lazily unfolded and general inclusions.

    Inclusions whose left side is a concept name ``A`` are returned as a map
    ``A -> [nnf(D), ...]`` and only fire on nodes whose label holds ``A``;
    every other inclusion becomes a disjunction added to every node.
    """
    unfold = {}
    general = []
    for ax in tbox:
        if isinstance(ax, (Domain, Range)):
            ax = ax.desugar()
        if isinstance(ax, ConceptInclusion):
            pairs = [(ax.sub, ax.sup)]
        elif isinstance(ax, ConceptEquivalence):
            pairs = [(ax.a, ax.b), (ax.b, ax.a)]
        else:
            continue
        for sub, sup in pairs:
            if isinstance(sub, Atomic):
                d = nnf(sup)
                if not isinstance(d, Top) and d not in unfold.setdefault(sub, []):
                    unfold[sub].append(d)
            else:
                g = nnf(disj(Not(sub), sup))
                if not isinstance(g, Top) and g not in general:
                    general.append(g)
    return unfold, general


# --------------------------------------------------------------------------
# Role hierarchy


@dataclass(frozen=True)
class RoleClosure:
    """Reflexive-transitive role subsumption plus transitive and simple roles."""

    roles: frozenset
    pairs: frozenset
    transitive: frozenset
    simple: frozenset

    def subsumes(self, sub, sup) -> bool:
        return sub == sup or (sub, sup) in self.pairs

    def supers(self, role) -> frozenset:
        return frozenset(s for (r, s) in self.pairs if r == role) | {role}

    def subs(self, role) -> frozenset:
        return frozenset(r for (r, s) in self.pairs if s == role) | {role}

    def is_simple(self, role) -> bool:
        return role in self.simple or role not in self.roles


def close_relation(pairs, roles=()) -> frozenset:
    """Smallest reflexive, transitive, inverse-symmetric relation containing ``pairs``."""
    rel = set()
    for r in roles:
        rel.add((r, r))
    for r, s in pairs:
        rel.add((r, s))
        rel.add((inverse(r), inverse(s)))
        for x in (r, s, inverse(r), inverse(s)):
            rel.add((x, x))
    succ = {}
    for r, s in rel:
        succ.setdefault(r, set()).add(s)
    changed = True
    while changed:
        changed = False
        for r in list(succ):
            reach = set(succ[r])
            for s in list(reach):
                reach |= succ.get(s, set())
            if reach != succ[r]:
                succ[r] = reach
                changed = True
    return frozenset((r, s) for r, ss in succ.items() for s in ss)


def _named(role):
    return isinstance(role, (Role, InverseRole))


def role_closure(kb: KnowledgeBase) -> RoleClosure:
    roles = set()
    for name in kb.signature.roles:
        roles.add(Role(name))
        roles.add(InverseRole(name))
    declared = []
    for ax in kb.rbox:
        if isinstance(ax, RoleInclusion):
            declared.append((ax.sub, ax.sup))
        elif isinstance(ax, RoleEquivalence):
            declared += [(ax.a, ax.b), (ax.b, ax.a)]
    declared = [(r, s) for r, s in declared if _named(r) and _named(s)]
    pairs = close_relation(declared, roles)

    def subs_of(role):
        return {r for (r, s) in pairs if s == role} | {role}

    def supers_of(role):
        return {s for (r, s) in pairs if r == role} | {role}

    trans_seed = set()
    chain_heads = set()
    for ax in kb.rbox:
        if isinstance(ax, TransitiveRole) and _named(ax.role):
            trans_seed.add(ax.role)
        elif isinstance(ax, ComplexRoleInclusion) and _named(ax.sup):
            chain_heads.add(ax.sup)
            if len(ax.chain) == 2 and ax.chain[0] == ax.chain[1] == ax.sup:
                trans_seed.add(ax.sup)
    transitive = set()
    for t in trans_seed:
        for r in (t, inverse(t)):
            # roles equivalent to a transitive role are transitive too
            transitive |= subs_of(r) & supers_of(r)
    non_simple = set()
    for r in roles:
        if subs_of(r) & (transitive | chain_heads | {inverse(h) for h in chain_heads}):
            non_simple.add(r)
            non_simple.add(inverse(r))
    return RoleClosure(
        roles=frozenset(roles),
        pairs=pairs,
        transitive=frozenset(transitive),
        simple=frozenset(roles - non_simple),
    )


# --------------------------------------------------------------------------
# Regularity


@dataclass(frozen=True)
class RegularOrder:
    """A witnessing strict order: ``(s, r)`` in ``pairs`` means s < r."""

    pairs: frozenset
    ranking: tuple  # role names, lesser roles first

    def less(self, s: str, r: str) -> bool:
        return (s, r) in self.pairs


def _orient(ax):
    """Rewrite ``chain SUBROLE INV(r)`` into the equivalent axiom with head r."""
    chain, sup = ax.chain, ax.sup
    if isinstance(sup, InverseRole):
        chain = tuple(inverse(r) for r in reversed(chain))
        sup = Role(sup.name)
    return chain, sup


def _order_constraints(ax):
    chain, sup = _orient(ax)
    if any(isinstance(r, UniversalRole) for r in chain + (sup,)):
        raise UnsupportedConstructError(f"universal role in role chain: {ax}")
    if len(chain) == 2 and chain[0] == chain[1] == sup:
        return []
    if chain[0] == sup:
        rest = chain[1:]
    elif chain[-1] == sup:
        rest = chain[:-1]
    else:
        rest = chain
    return [(s.name, sup.name) for s in rest]


def check_regularity(rbox) -> RegularOrder:
    """Find a strict order on role names under which every chain axiom is regular.

    The regular shape an axiom must take is fixed by its end points, so each
    axiom contributes a definite set of ``s < r`` constraints and a witness
    exists iff those constraints are acyclic. Raises
    :class:`NonRegularRBoxError` with the axioms along a cycle otherwise.
    """
    edges = {}
    names = set()
    for ax in rbox:
        for r in getattr(ax, "chain", ()) + (getattr(ax, "sup", None),):
            if _named(r):
                names.add(r.name)
        if not isinstance(ax, ComplexRoleInclusion):
            continue
        for s, r in _order_constraints(ax):
            edges.setdefault((s, r), ax)
    succ = {n: sorted({r for (s, r) in edges if s == n}) for n in names}

    cycle = _find_cycle(sorted(names), succ)
    if cycle:
        offending = []
        for s, r in zip(cycle, cycle[1:] + cycle[:1]):
            ax = edges[(s, r)]
            if ax not in offending:
                offending.append(ax)
        text = "; ".join(str(a) for a in offending)
        raise NonRegularRBoxError(
            f"role inclusions are not regular: cycle {' < '.join(cycle + cycle[:1])} "
            f"required by {text}",
            cycle=offending,
        )

    indeg = {n: 0 for n in names}
    for (s, r) in edges:
        indeg[r] += 1
    heap = [n for n in names if indeg[n] == 0]
    heapq.heapify(heap)
    ranking = []
    while heap:
        n = heapq.heappop(heap)
        ranking.append(n)
        for r in succ[n]:
            indeg[r] -= 1
            if indeg[r] == 0:
                heapq.heappush(heap, r)
    closure = set()
    for n in names:
        stack, seen = list(succ[n]), set()
        while stack:
            m = stack.pop()
            if m not in seen:
                seen.add(m)
                stack.extend(succ[m])
        closure |= {(n, m) for m in seen}
    return RegularOrder(frozenset(closure), tuple(ranking))


def _find_cycle(nodes, succ):
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    path = []

    def visit(n):
        color[n] = GREY
        path.append(n)
        for m in succ.get(n, ()):
            if color[m] == GREY:
                return path[path.index(m):]
            if color[m] == WHITE:
                found = visit(m)
                if found:
                    return found
        path.pop()
        color[n] = BLACK
        return None

    for n in nodes:
        if color[n] == WHITE:
            found = visit(n)
            if found:
                return list(found)
    return None


# --------------------------------------------------------------------------
# Role axioms as rules over named individuals


def _var_names(n):
    if n == 2:
        return ["x", "y", "z"]
    if n == 1:
        return ["x", "y"]
    return [f"x{i}" for i in range(n + 1)]


def _role_atom(role, a, b, ax):
    if isinstance(role, Role):
        return RoleAtom(role.name, a, b)
    if isinstance(role, InverseRole):
        return RoleAtom(role.name, b, a)
    raise UnsupportedConstructError(f"universal role cannot be compiled to a rule: {ax}")


def _path_rule(chain, sup, ax, label):
    vs = [Variable(n) for n in _var_names(len(chain))]
    body = [_role_atom(r, vs[i], vs[i + 1], ax) for i, r in enumerate(chain)]
    head = _role_atom(sup, vs[0], vs[-1], ax)
    body += [guard(v) for v in vs]
    return DlSafeRule(head, tuple(body), label=label)


def compile_chains_to_rules(kb: KnowledgeBase) -> list:
    """Turn role inclusions, chains and transitivity into guarded rules.

    ``R1 o ... o Rn SUBROLE S`` becomes ``S(?x0,?xn) <- R1(?x0,?x1), ...``
    with an ``O`` guard per variable, so the consequences are drawn over
    named individuals only.
    """
    rules = []
    for i, ax in enumerate(kb.rbox):
        label = f"rbox#{i + 1}"
        if isinstance(ax, ComplexRoleInclusion):
            rules.append(_path_rule(ax.chain, ax.sup, ax, label))
        elif isinstance(ax, TransitiveRole):
            rules.append(_path_rule((ax.role, ax.role), ax.role, ax, label))
        elif isinstance(ax, RoleInclusion):
            rules.append(_path_rule((ax.sub,), ax.sup, ax, label))
        elif isinstance(ax, RoleEquivalence):
            rules.append(_path_rule((ax.a,), ax.b, ax, label + "a"))
            rules.append(_path_rule((ax.b,), ax.a, ax, label + "b"))
    return rules
