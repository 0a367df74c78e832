from __future__ import annotations

import time

import pytest
from hypothesis import given, settings

from conftest import GOLDEN, load_fixture
from corpus import random_kb
from strategies import concepts
from tableau_kb.dlsyntax import parse_concept, parse_dl
from tableau_kb.errors import ResourceLimitExceeded
from tableau_kb.model import TOP, Atomic, KnowledgeBase
from tableau_kb.oracle import find_model
from tableau_kb.tableau import (
    INCONCLUSIVE,
    SATISFIABLE,
    UNSATISFIABLE,
    instance_of,
    is_consistent,
    is_satisfiable_concept,
    subsumes,
)


def verdict(text, **kw):
    return is_consistent(parse_dl(text), **kw)


def test_walkthrough_needs_one_backtrack():
    v = is_consistent(load_fixture("actors.dl"))
    assert v.status == SATISFIABLE
    assert v.backtracks == 1
    golden = (GOLDEN / "cli" / "actors.trace.out").read_text(encoding="utf-8")
    assert "exit 0\n" + v.trace_text() + "consistent\n" == golden


def test_walkthrough_first_branch_clashes_on_dead_actor():
    lines = is_consistent(load_fixture("actors.dl")).trace_text().splitlines()
    first = lines.index("or[1/2] 1 DeadActor")
    assert lines[first + 2] == "clash:atomic 1 DeadActor"
    assert lines[first + 3] == "backtrack 1 or"


def test_walkthrough_model_puts_living_actor_on_the_successor():
    v = is_consistent(load_fixture("actors.dl"))
    successor = v.model.nodes[1]
    assert {"Actor", "LivingActor", "canAct"} <= set(successor.concepts)


def test_empty_kb_is_consistent():
    assert is_consistent(KnowledgeBase()).status == SATISFIABLE


@pytest.mark.parametrize(
    "text, kind",
    [
        ("a : A AND NOT A.", "atomic"),
        ("a : BOTTOM.", "bottom"),
        ("a : MAX 1 r TOP. a r b. a r c. b DIFF c.", "at-most"),
        ("DIS r s. a r b. a s b.", "disjoint-roles"),
        ("IRR r. a r a.", "irreflexive"),
        ("ASY r. a r b. b r a.", "asymmetric"),
        ("a NOT r b. a r b.", "negated-assertion"),
        ("a SAME b. a DIFF b.", "inequality"),
    ],
)
def test_clash_kinds(text, kind):
    v = verdict(text)
    assert v.status == UNSATISFIABLE
    assert v.clash.kind == kind
    assert v.trace_text().splitlines()[-2].startswith("clash:" + kind)


@pytest.mark.parametrize(
    "text",
    [
        "a : A. A SUBCLASS r SOME A.",
        "a : A. A SUBCLASS INV(r) SOME A AND r SOME A.",
        "a : A. A SUBCLASS MIN 2 r A. TOP SUBCLASS MAX 1 INV(r) TOP.",
    ],
)
def test_cyclic_definitions_terminate_by_blocking(text):
    v = verdict(text)
    assert v.status == SATISFIABLE
    assert any(n.blocked_by is not None for n in v.model.nodes)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a : A AND r SOME (INV(r) ONLY NOT A).", UNSATISFIABLE),
        ("TRANS r. a r b. b r c. a : r ONLY A. c : NOT A.", UNSATISFIABLE),
        ("s SUBROLE r. a s b. a : r ONLY A. b : NOT A.", UNSATISFIABLE),
        ("a : B. b : NOT B. a : ONEOF{b}.", UNSATISFIABLE),
        ("a : r SELF. IRR r.", UNSATISFIABLE),
        ("REF r. a : A AND r ONLY NOT A.", UNSATISFIABLE),
        ("a : MIN 2 r A AND MAX 1 r TOP.", UNSATISFIABLE),
        ("a : MIN 2 r A AND MAX 2 r TOP AND MAX 1 r B AND r ONLY B.", UNSATISFIABLE),
        ("a : MIN 2 r TOP AND MAX 1 r A. a : r ONLY A OR r ONLY B.", SATISFIABLE),
        ("a : MAX 1 r TOP. a r b. a r c. b : A. c : B.", SATISFIABLE),
        ("a : MAX 1 r TOP. a r b. a r c. b : A. c : NOT A.", UNSATISFIABLE),
        ("r DOMAIN A. r RANGE B. a r b. b : NOT B.", UNSATISFIABLE),
        ("r DOMAIN A. a r b. a : NOT A.", UNSATISFIABLE),
        ('a age "1"^^xsd:integer. a age "2"^^xsd:integer. a : MAX 1 age TOP.', UNSATISFIABLE),
    ],
)
def test_verdicts(text, expected):
    assert verdict(text).status == expected


def test_choose_rule_with_empty_filler_terminates():
    # <= n r BOTTOM is trivially true; choosing between BOTTOM and TOP must not loop
    assert verdict("a : NOT MIN 1 s NOT C. a s b.").status == SATISFIABLE


def test_node_cap_gives_inconclusive():
    v = verdict("a : r SOME A.", max_nodes=1)
    assert v.status == INCONCLUSIVE
    assert not v.conclusive


def test_node_cap_from_environment(monkeypatch):
    monkeypatch.setenv("TABLEAUKB_MAX_NODES", "1")
    assert verdict("a : r SOME A.").status == INCONCLUSIVE


def test_inconclusive_instance_check_raises():
    kb = parse_dl("a : r SOME A.")
    with pytest.raises(ResourceLimitExceeded):
        instance_of(kb, "a", Atomic("B"), max_nodes=1)


def test_incompleteness_is_reported_for_chains_and_rules():
    v = is_consistent(load_fixture("series.dl"))
    assert v.status == SATISFIABLE
    assert len(v.incomplete_reasons) == 2


MOVIE_TBOX = parse_dl("liveAction SUBCLASS Movie. remakeOf SUBROLE basedOn. Narrator EQUIV Lector.")


def test_subsumption_examples():
    assert subsumes(MOVIE_TBOX, Atomic("Movie"), Atomic("liveAction"))
    assert not subsumes(MOVIE_TBOX, Atomic("liveAction"), Atomic("Movie"))
    assert subsumes(MOVIE_TBOX, Atomic("Lector"), Atomic("Narrator"))
    assert subsumes(MOVIE_TBOX, Atomic("Narrator"), Atomic("Lector"))


@given(concepts(full=False, max_leaves=5))
@settings(max_examples=60, deadline=None)
def test_top_subsumes_everything(c):
    assert subsumes(MOVIE_TBOX, TOP, c)


def test_concept_satisfiability():
    kb = load_fixture("actors.dl")
    assert is_satisfiable_concept(kb, Atomic("activeActor")).satisfiable
    assert not is_satisfiable_concept(kb, parse_concept("canAct AND DeadActor")).satisfiable


def test_instance_checks():
    kb = load_fixture("award.dl")
    assert instance_of(kb, "a", Atomic("AwardWinnerActor"))
    assert not instance_of(kb, "b", Atomic("AwardWinnerActor"))


def test_traces_are_deterministic():
    for seed in range(20):
        kb = random_kb(seed, full=True)
        first = is_consistent(kb, max_nodes=500)
        second = is_consistent(kb, max_nodes=500)
        assert first.trace_text() == second.trace_text()


def test_walkthrough_is_fast():
    start = time.perf_counter()
    is_consistent(load_fixture("actors.dl"))
    assert time.perf_counter() - start < 1.0


@pytest.mark.parametrize("seed", range(1000, 1060))
def test_alc_sample_agrees_with_oracle(seed):
    kb = random_kb(seed)
    assert is_consistent(kb).satisfiable == (find_model(kb, 8) is not None)
