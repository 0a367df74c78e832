"""Hypothesis strategies for concepts, axioms and knowledge bases."""

from __future__ import annotations

from hypothesis import strategies as st

from tableau_kb.model import (
    BOTTOM,
    TOP,
    AsymmetricRole,
    AtLeast,
    AtMost,
    Atomic,
    ComplexRoleInclusion,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptInclusion,
    DifferentIndividuals,
    DisjointRoles,
    Domain,
    Exists,
    ForAll,
    InverseRole,
    IrreflexiveRole,
    KnowledgeBase,
    NegatedRoleAssertion,
    Nominal,
    Not,
    Range,
    ReflexiveRole,
    Role,
    RoleAssertion,
    RoleEquivalence,
    RoleInclusion,
    SameIndividual,
    SelfRestriction,
    TransitiveRole,
    conj,
    disj,
)
from tableau_kb.oracle import Interpretation

CONCEPT_NAMES = ("A", "B", "C", "Movie")
ROLE_NAMES = ("r", "s", "starredIn")
INDIVIDUALS = ("a", "b", "c")

atomic = st.sampled_from(CONCEPT_NAMES).map(Atomic)
named_role = st.sampled_from(ROLE_NAMES).map(Role)
role = st.one_of(named_role, st.sampled_from(ROLE_NAMES).map(InverseRole))
individual = st.sampled_from(INDIVIDUALS)


def concepts(full: bool = True, max_leaves: int = 8):
    leaves = [atomic, st.just(TOP), st.just(BOTTOM)]
    if full:
        leaves.append(st.frozensets(individual, min_size=1, max_size=2).map(Nominal))
        leaves.append(role.map(SelfRestriction))

    def extend(inner):
        parts = [
            inner.map(Not),
            st.lists(inner, min_size=2, max_size=3).map(lambda ops: conj(*ops)),
            st.lists(inner, min_size=2, max_size=3).map(lambda ops: disj(*ops)),
            st.builds(Exists, role if full else named_role, inner),
            st.builds(ForAll, role if full else named_role, inner),
        ]
        if full:
            parts.append(st.builds(AtLeast, st.integers(0, 3), role, inner))
            parts.append(st.builds(AtMost, st.integers(0, 3), role, inner))
        return st.one_of(parts)

    return st.recursive(st.one_of(leaves), extend, max_leaves=max_leaves)


def _valid(builder):
    # constructors reject degenerate shapes such as a two-element disjunction of equal operands
    def build(*args):
        try:
            return builder(*args)
        except ValueError:
            return None

    return build


def axioms(full: bool = True):
    c = concepts(full, max_leaves=5)
    parts = [
        st.builds(_valid(ConceptInclusion), c, c),
        st.builds(_valid(ConceptEquivalence), c, c),
        st.builds(_valid(ConceptAssertion), c, individual),
        st.builds(_valid(RoleAssertion), named_role, individual, individual),
    ]
    if full:
        parts += [
            st.builds(_valid(Domain), named_role, c),
            st.builds(_valid(Range), named_role, c),
            st.builds(_valid(NegatedRoleAssertion), named_role, individual, individual),
            st.builds(_valid(SameIndividual), individual, individual),
            st.builds(_valid(DifferentIndividuals), individual, individual),
            st.builds(_valid(RoleInclusion), role, role),
            st.builds(_valid(RoleEquivalence), role, role),
            st.builds(
                _valid(ComplexRoleInclusion), st.lists(role, min_size=2, max_size=3).map(tuple), named_role
            ),
            st.builds(_valid(TransitiveRole), named_role),
            st.builds(_valid(AsymmetricRole), named_role),
            st.builds(_valid(ReflexiveRole), named_role),
            st.builds(_valid(IrreflexiveRole), named_role),
            st.builds(_valid(DisjointRoles), role, role),
        ]
    return st.one_of(parts).filter(lambda ax: ax is not None)


def knowledge_bases(full: bool = True, max_axioms: int = 6):
    return st.lists(axioms(full), max_size=max_axioms).map(lambda axs: KnowledgeBase(tuple(axs)))


@st.composite
def interpretations(draw, max_size: int = 4):
    size = draw(st.integers(1, max_size))
    elems = st.integers(0, size - 1)
    subsets = st.frozensets(elems)
    pairs = st.frozensets(st.tuples(elems, elems))
    return Interpretation(
        size,
        concepts={n: draw(subsets) for n in CONCEPT_NAMES},
        roles={n: draw(pairs) for n in ROLE_NAMES},
        individuals={i: draw(elems) for i in INDIVIDUALS},
    )
