import random

import pytest
from hypothesis import given, settings, strategies as st

from obr.accessibility import RankedBase, degree
from obr.entailment import relevant_sentences
from obr.errors import InconsistentEvidence
from obr.logic import BeliefBase, entails, is_consistent
from obr.revision import Policy, adjust_ranking, check_agm, contract, expand, remainders, revise, revise_sequence
from obr.syntax import Not, parse
from obr.verifier import brute_degree, check_adjustment, random_evidence, random_ranked_base


def rb_of(*pairs):
    return RankedBase.from_pairs(pairs)


def strs(xs):
    return sorted(map(str, xs))


SIMPLE = rb_of((1, "p"), (2, "p -> q"))
seeds = st.integers(0, 2**32 - 1)


def test_expand():
    assert strs(expand(BeliefBase(["p"]), "q")) == ["p", "q"]
    assert strs(expand(BeliefBase(["p"]), "p")) == ["p"]
    assert strs(expand(BeliefBase(["p"]), "!p")) == ["!p", "p"]


def test_remainders_examples():
    assert [strs(x) for x in remainders(["p", "p -> q"], "q")] == [["p"], ["p -> q"]]
    assert sorted(strs(x) for x in remainders(["p", "q"], "p & q")) == [["p"], ["q"]]
    assert [strs(x) for x in remainders(["p"], "q")] == [["p"]]
    assert remainders(["p"], "p | !p") == []


def test_contract_keeps_the_more_accessible_remainder():
    assert strs(contract(SIMPLE, "q")) == ["p -> q"]


def test_contract_tie_intersects():
    assert list(contract(rb_of((1, "p"), (1, "p -> q")), "q")) == []


def test_contract_by_tautology_is_identity():
    assert contract(SIMPLE, "p | !p") == SIMPLE.base


def test_contract_ignores_unrelated_low_ranks():
    rb = rb_of((1, "p"), (2, "p -> q"), (1, "s"))
    assert strs(contract(rb, "q")) == ["p -> q", "s"]


def test_policies():
    rb = rb_of((1, "p"), (2, "p -> q"))
    assert list(contract(rb, "q", Policy.FULL_MEET)) == []
    assert strs(contract(rb, "q", "maxichoice-first")) == ["p"]


def test_revise_example():
    out = revise(SIMPLE, "!q")
    assert strs(out.new_base) == ["!q", "p -> q"]
    assert strs(out.retracted) == ["p"]
    assert str(out.new_ranking) == "{p -> q: 1, !q: 2}"
    assert degree(out.new_ranking, "p") == 1


def test_revise_consistent_expansion():
    out = revise(rb_of((1, "p")), "q")
    assert strs(out.new_base) == ["p", "q"] and out.retracted == ()
    assert str(out.new_ranking) == "{p: 1, q: 2}"


def test_revise_rejects_contradiction():
    with pytest.raises(InconsistentEvidence):
        revise(rb_of((1, "p")), "q & !q")


def test_adjust_ranking_example():
    new = adjust_ranking(SIMPLE, parse("!q"), BeliefBase(["p -> q", "!q"]))
    assert new.pairs() == [(1, parse("p -> q")), (2, parse("!q"))]


def test_repeated_revision_keeps_evidence_on_top():
    rb = rb_of((1, "p"), (2, "q"))
    once = revise(rb, "r").new_ranking
    twice = revise(once, "r").new_ranking
    assert twice.rank(parse("r")) == twice.n
    assert twice.rank(parse("p")) == once.rank(parse("p"))
    assert twice.rank(parse("q")) == once.rank(parse("q"))


def test_revise_sequence_examples():
    steps = revise_sequence(rb_of((1, "p")), ["q", "!p"])
    assert strs(steps[0].new_base) == ["p", "q"]
    assert strs(steps[1].new_base) == ["!p", "q"]
    assert revise_sequence(rb_of((1, "p")), []) == []
    last = revise_sequence(rb_of((1, "p")), ["!p", "p"])[-1].new_base
    assert parse("p") in last and parse("!p") not in last


def test_revise_sequence_reports_step():
    with pytest.raises(InconsistentEvidence) as info:
        revise_sequence(rb_of((1, "p")), ["q", "r & !r"])
    assert info.value.step == 1
    assert str(info.value).startswith("step 1:")


def test_agm_example_passes():
    rep = check_agm(SIMPLE, "!q", 3)
    assert rep.passed
    for name in ["closure", "success", "inclusion", "vacuity", "consistency", "extensionality"]:
        assert rep[name].passed


def test_agm_vacuity_case():
    rep = check_agm(rb_of((1, "p")), "q", 2)
    assert rep["vacuity"].applicable and rep["vacuity"].passed


def test_agm_vacuity_not_applicable_when_contradicted():
    assert not check_agm(SIMPLE, "!q", 2)["vacuity"].applicable


def test_agm_supplementary_are_informational():
    rep = check_agm(SIMPLE, "!q", 3)
    assert rep["K*7 conjunctive inclusion"].informational
    assert rep["K*8 conjunctive vacuity"].informational


def test_extensionality_example():
    a = revise(SIMPLE, "!q").new_base
    b = revise(SIMPLE, "!q | q & !q").new_base
    assert entails(a, parse("!q")) and entails(b, parse("!q"))
    assert strs(a.without([parse("!q")])) == strs(b.without([parse("!q | q & !q")]))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_success_consistency_and_relevance(seed):
    rng = random.Random(seed)
    rb = random_ranked_base(rng)
    a = random_evidence(rng, rb)
    for policy in Policy:
        out = revise(rb, a, policy)
        assert entails(out.new_base, a)
        assert is_consistent(out.new_base)
        relevant = set(relevant_sentences(rb.base, Not(a)))
        assert set(out.retracted) <= relevant


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_ranking_adjustment(seed):
    rng = random.Random(seed)
    rb = random_ranked_base(rng)
    a = random_evidence(rng, rb)
    assert check_adjustment(rb, a) == []
    out = revise(rb, a)
    for p in out.retracted:
        assert degree(out.new_ranking, p) == brute_degree(out.new_ranking, p)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_single_step_sequence_equals_revise(seed):
    rng = random.Random(seed)
    rb = random_ranked_base(rng)
    a = random_evidence(rng, rb)
    assert revise_sequence(rb, [a])[0] == revise(rb, a)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_agm_on_random_instances(seed):
    rng = random.Random(seed)
    rb = random_ranked_base(rng)
    assert check_agm(rb, random_evidence(rng, rb), 3).passed
