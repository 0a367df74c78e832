from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import load_fixture
from tableau_kb.dlsyntax import parse_dl
from tableau_kb.errors import InconsistentKBError, NonRegularRBoxError, UnsafeRuleError
from tableau_kb.model import (
    Atomic,
    ConceptAssertion,
    ConceptAtom,
    Constant,
    DlSafeRule,
    KnowledgeBase,
    NegatedRoleAssertion,
    Not,
    Role,
    RoleAssertion,
    RoleAtom,
    guard,
)
from tableau_kb.oracle import find_model
from tableau_kb.rules import apply_rule, make_safe, materialize, unsafe_variables


def test_award_rule_derives_only_a():
    store = materialize(load_fixture("award.dl"))
    assert store.concept_facts() - {(c, i) for c, i in store.concept_facts() if c != "AwardWinnerActor"} == {
        ("AwardWinnerActor", "a")
    }
    assert [str(a) for a in store.derived] == ["AwardWinnerActor(a)"]


def test_award_rule_in_entailment_mode_has_two_sources():
    store = materialize(load_fixture("award.dl"), "entailment")
    atom = ConceptAtom("AwardWinnerActor", Constant("a"))
    assert [d.source for d in store.provenance(atom)] == ["rule#1", "entailed"]


def test_strict_mode_names_the_unguarded_variable():
    kb = load_fixture("award.dl")
    with pytest.raises(UnsafeRuleError) as info:
        materialize(kb, safety="strict")
    assert str(info.value.variable) == "?x"
    assert "?x" in str(info.value)


def test_auto_guard_adds_one_guard_per_variable():
    (rule,) = load_fixture("award.dl").rules
    assert [str(v) for v in unsafe_variables(rule)] == ["?x", "?y"]
    safe = make_safe(rule)
    assert str(safe) == "AwardWinnerActor(?x) <- won(?x, ?y), O(?x), O(?y)."
    assert make_safe(safe) is safe


def test_series_facts_exactly():
    store = materialize(load_fixture("series.dl"))
    assert store.of("co-starredWith") == {("a", "d"), ("b", "d"), ("c", "d")}
    assert store.of("starredIn") - {("a", "m"), ("b", "m"), ("c", "m"), ("d", "s")} == {
        ("a", "s"),
        ("b", "s"),
        ("c", "s"),
    }
    assert len(store.derived) == 6


def test_no_rules_means_just_the_abox():
    kb = parse_dl("a : A. a r b. A SUBCLASS B.")
    store = materialize(kb)
    assert store.derived == ()
    assert {str(a) for a in store} == {"A(a)", "r(a, b)"}


def test_non_dl_facts_feed_rules():
    kb = parse_dl("a won d. b won e.\nfamous(d) <- .\nStar(?x) <- won(?x, ?y), famous(?y).")
    store = materialize(kb)
    assert store.of("Star") == {("a",)}


def test_entailment_mode_sees_tbox_memberships():
    kb = parse_dl("a : Actor. Actor SUBCLASS Person. b : Person.\nPair(?x, ?y) <- Person(?x), Person(?y), O(?x), O(?y).")
    asserted = materialize(kb)
    entailed = materialize(kb, "entailment")
    assert asserted.of("Pair") == {("b", "b")}
    assert entailed.of("Pair") == {("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")}


def test_anonymous_witnesses_never_bind_variables():
    kb = parse_dl("a : r SOME B.\nHasB(?x) <- r(?x, ?y), B(?y).")
    assert materialize(kb, "entailment").of("HasB") == set()


def test_role_axioms_act_as_rules_in_both_modes():
    kb = parse_dl("acts SUBROLE lives. a acts b.\nResident(?y) <- lives(?x, ?y).")
    assert materialize(kb).of("Resident") == {("b",)}
    assert materialize(kb, "entailment").of("Resident") == {("b",)}


def test_domain_needs_entailment_mode():
    kb = parse_dl("lives DOMAIN Person. a lives b.\nHuman(?x) <- Person(?x).")
    assert materialize(kb).of("Human") == set()
    assert materialize(kb, "entailment").of("Human") == {("a",)}


def test_entailment_mode_rejects_inconsistent_kb():
    with pytest.raises(InconsistentKBError):
        materialize(parse_dl("a : A AND NOT A."), "entailment")


def test_derived_facts_can_make_kb_inconsistent():
    kb = parse_dl("a : NOT B. a : A.\nB(?x) <- A(?x).")
    with pytest.raises(InconsistentKBError):
        materialize(kb, "entailment")


def test_non_regular_rbox_is_rejected():
    with pytest.raises(NonRegularRBoxError):
        materialize(parse_dl("r o s SUBROLE r. s o r SUBROLE s."))


def test_zero_timeout_marks_store_incomplete():
    store = materialize(load_fixture("series.dl"), timeout=0)
    assert not store.complete
    assert store.provenance_report().endswith("before the fixpoint\n")


def test_apply_rule_single_step():
    kb = load_fixture("series.dl")
    (rule,) = kb.rules
    heads = apply_rule(make_safe(rule), kb)
    assert {str(h) for h in heads} == {"co-starredWith(a, d)", "co-starredWith(b, d)", "co-starredWith(c, d)"}


def test_exports():
    store = materialize(load_fixture("award.dl"))
    assert store.to_dl() == "a : AwardWinnerActor.\n"
    assert store.to_turtle().endswith(":a a :AwardWinnerActor .\n")


# --------------------------------------------------------------------------
# properties over random rule sets

CONCEPTS = ("A", "B")
ROLES = ("r", "s")
INDS = ("a", "b", "c")
VARS = ("?x", "?y")

term = st.sampled_from(VARS + INDS)
concept_atom = st.builds(ConceptAtom, st.sampled_from(CONCEPTS), term)
role_atom = st.builds(RoleAtom, st.sampled_from(ROLES), term, term)
body_atom = st.one_of(concept_atom, role_atom)


@st.composite
def rules(draw):
    body = tuple(draw(st.lists(body_atom, min_size=1, max_size=3)))
    body_vars = sorted({str(v) for a in body for v in a.variables})
    head_term = st.sampled_from(tuple(body_vars) + INDS)
    head = draw(
        st.one_of(
            st.builds(ConceptAtom, st.sampled_from(CONCEPTS), head_term),
            st.builds(RoleAtom, st.sampled_from(ROLES), head_term, head_term),
        )
    )
    if draw(st.booleans()):
        body += tuple(guard(v) for v in body_vars)
    return DlSafeRule(head, body)


fact = st.one_of(
    st.builds(ConceptAssertion, st.sampled_from(CONCEPTS).map(Atomic), st.sampled_from(INDS)),
    st.builds(RoleAssertion, st.sampled_from(ROLES).map(Role), st.sampled_from(INDS), st.sampled_from(INDS)),
)
tbox = st.sampled_from(["", "A SUBCLASS B.", "r SUBROLE s.", "TRANS r.", "r o s SUBROLE r.", "A SUBCLASS r SOME B."])


@st.composite
def rule_kbs(draw):
    base = parse_dl(draw(tbox))
    return KnowledgeBase(base.axioms + tuple(draw(st.lists(fact, max_size=5))), tuple(draw(st.lists(rules(), max_size=3))))


PROPS = settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@given(rule_kbs())
@PROPS
def test_materialize_is_idempotent(kb):
    store = materialize(kb)
    again = materialize(kb.extend(store.to_kb().axioms, store.to_kb().rules))
    assert again.derived == ()
    assert set(again) == set(store)


@given(rule_kbs(), fact)
@PROPS
def test_materialize_is_monotone(kb, extra):
    assert set(materialize(kb)) <= set(materialize(kb.extend([extra])))


@given(rule_kbs())
@PROPS
def test_only_named_individuals(kb):
    named = {i for i in kb.signature.individuals if isinstance(i, str)}
    for atom in materialize(kb):
        assert {t.name for t in atom.terms} <= named


@given(rule_kbs())
@PROPS
def test_fixpoint_round_bound(kb):
    store = materialize(kb)
    sig = kb.signature
    n = len(sig.individuals)
    possible = (len(sig.concepts) + len(CONCEPTS)) * n + (len(sig.roles) + len(ROLES)) * n * n
    assert store.rounds - 1 <= possible


@given(rule_kbs())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_asserted_mode_is_within_entailment_mode(kb):
    try:
        entailed = materialize(kb, "entailment")
    except InconsistentKBError:
        return
    assert set(materialize(kb)) <= set(entailed)


@given(rule_kbs())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_derived_facts_hold_in_every_small_model(kb):
    if find_model(kb, 4) is None:
        return
    for atom in materialize(kb).derived:
        if isinstance(atom, ConceptAtom):
            denial = ConceptAssertion(Not(Atomic(atom.concept)), atom.term.name)
        else:
            denial = NegatedRoleAssertion(Role(atom.role), atom.subject.name, atom.object.name)
        assert find_model(kb.extend([denial]), 4) is None, atom
