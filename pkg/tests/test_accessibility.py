import random

import pytest
from hypothesis import given, settings, strategies as st

from obr.accessibility import (
    RankedBase,
    check_postulates,
    cut_at,
    cut_at_level,
    degree,
    in_cut,
    is_bad_cut,
    leq_af,
    most_accessible,
    set_accessibility,
)
from obr.entailment import entailment_sets
from obr.errors import EmptySet, InconsistentBase, RankingError, UndeterminedSentence
from obr.logic import class_of, declare_universe, entails, equivalent, is_tautology, semantic_classes, truth_table
from obr.syntax import Atom, Not, parse
from obr.verifier import brute_degree, random_ranked_base


def rb_of(*pairs):
    return RankedBase.from_pairs(pairs)


SIMPLE = rb_of((1, "p"), (2, "p -> q"))
TWO_ROUTES = rb_of((1, "p"), (1, "p -> r"), (2, "q"), (2, "q -> r"))
seeds = st.integers(0, 2**32 - 1)


def test_derived_degree_is_weakest_link():
    assert degree(SIMPLE, "q") == 1


def test_derived_degree_takes_best_route():
    assert degree(TWO_ROUTES, "r") == 2
    assert degree(TWO_ROUTES, "r", method="entailment-sets") == 2


def test_undetermined_and_tautology():
    assert degree(SIMPLE, "r") == 0
    assert degree(SIMPLE, "p | !p") == 2


def test_base_sentence_keeps_its_rank():
    rb = rb_of((2, "p & q"), (1, "p"))
    assert degree(rb, "p") == 1
    assert degree(rb, "q") == 2


def test_disbelieved_sentence_inherits_negation_degree():
    assert degree(SIMPLE, "!q") == 1
    assert degree(SIMPLE, "!(p -> q)") == 2


def test_leq_af_examples():
    assert leq_af(SIMPLE, "q", "p -> q")
    assert leq_af(SIMPLE, "p", "!p") and leq_af(SIMPLE, "!p", "p")
    for x in ["p", "q", "p -> q", "p | !p", "!q"]:
        assert leq_af(SIMPLE, "r", x)


def test_set_accessibility():
    assert set_accessibility(SIMPLE, ["p", "p -> q"]) == 1
    assert set_accessibility(SIMPLE, ["p -> q"]) == 2
    assert set_accessibility(SIMPLE, ["q", "p -> q"]) == 1
    with pytest.raises(EmptySet):
        set_accessibility(SIMPLE, [])


def test_cuts():
    rb = rb_of((2, "p"), (1, "q"))
    c = cut_at(rb, "p")
    assert c.level == 2 and list(map(str, c.base_slice)) == ["p"]
    assert is_bad_cut(rb, c) is None
    assert list(cut_at_level(rb, 1).base_slice) == list(rb.base)
    with pytest.raises(UndeterminedSentence):
        cut_at(rb, "r")


def test_bad_cut_detected_with_witness():
    rb = rb_of((2, "p & q"), (1, "p"))
    c = cut_at(rb, "p & q")
    assert c.level == 2 and list(map(str, c.base_slice)) == ["p & q"]
    w = is_bad_cut(rb, c)
    assert w is not None and w.culprit == parse("p") and w.rank == 1
    # the slice derives p but p's degree is below the level, so the cut is not closed
    assert entails(c.base_slice, parse("p")) and not in_cut(rb, c, "p")


def test_level_one_cut_is_never_bad():
    rb = rb_of((2, "p & q"), (1, "p"))
    assert is_bad_cut(rb, cut_at_level(rb, 1)) is None


def test_ranking_validation():
    with pytest.raises(RankingError):
        rb_of((1, "p"), (3, "q"))
    with pytest.raises(RankingError):
        rb_of((1, "p"), (2, "p"))
    with pytest.raises(InconsistentBase):
        rb_of((1, "p"), (2, "!p"))
    assert RankedBase.normalized([(5, "p"), (9, "q"), (5, "r")]).ranks == (1, 2, 1)


def test_str_and_restrict():
    assert str(SIMPLE) == "{p: 1, p -> q: 2}"
    assert SIMPLE.restrict([parse("p -> q")]).ranks == (1,)


def test_most_accessible_tie_breaks():
    rb = rb_of((1, "p"), (2, "q"), (2, "r"), (2, "q & r"))
    best = most_accessible(rb, [[parse("p")], [parse("q"), parse("r")], [parse("q & r")]])
    assert list(best) == [parse("q & r")]


def test_postulates_pass_on_two_atoms():
    assert check_postulates(SIMPLE, 2).passed


def test_postulates_with_undetermined_atom():
    rep = check_postulates(SIMPLE, 3)
    assert rep.passed
    assert rep["A4 undetermined at bottom"].checked == 256


def test_corrupted_relation_fails_transitivity():
    universe = declare_universe(2, *SIMPLE.base)

    def cyclic(f, g):
        try:
            a, b = truth_table(f, universe), truth_table(g, universe)
        except ValueError:
            return True
        return (b - a) % 3 in (0, 1)

    rep = check_postulates(SIMPLE, 2, relation=cyclic)
    assert not rep["A1 transitivity"].passed
    assert len(rep["A1 transitivity"].counterexamples[0]) == 3


def test_postulate_report_shape():
    rep = check_postulates(TWO_ROUTES, 3)
    assert set(rep.checks) == {"A1 transitivity", "A2 connectedness", "A3 negation",
                               "A4 undetermined at bottom", "A5 derived rank"}
    assert rep.to_dict()["passed"] is True


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_degree_matches_oracle(seed):
    rng = random.Random(seed)
    rb = random_ranked_base(rng)
    probes = list(rb.base) + [parse(s) for s in ["p", "q", "r", "p & q", "p | r", "!q"]]
    for f in probes:
        assert degree(rb, f) == brute_degree(rb, f)
        assert degree(rb, f, method="entailment-sets") == degree(rb, f)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_degree_is_semantic_off_the_base(seed):
    rb = random_ranked_base(random.Random(seed))
    universe = declare_universe(3, *rb.base)
    for c in semantic_classes(3, universe)[::17]:
        f = c.representative
        if f in rb.base:
            continue
        variants = [Not(Not(f)), class_of(Not(Not(f)), universe).representative]
        for g in variants:
            if g not in rb.base:
                assert degree(rb, g) == degree(rb, f)
        if Not(f) not in rb.base:
            assert degree(rb, Not(f)) == degree(rb, f)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_base_sentences_get_their_rank(seed):
    rb = random_ranked_base(random.Random(seed))
    for r, f in rb.pairs():
        # a tautology stored in the base is still maximally accessible
        assert degree(rb, f) == (rb.n if is_tautology(f) else r)


def test_tautology_in_base_is_maximal():
    rb = rb_of((1, "p -> p"), (2, "q"))
    assert degree(rb, "p -> p") == 2


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_postulates_hold_on_random_bases(seed):
    assert check_postulates(random_ranked_base(random.Random(seed)), 3).passed


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_derived_degree_is_best_weakest_link(seed):
    rb = random_ranked_base(random.Random(seed))
    for f in map(parse, ["p", "q", "r", "p | q", "q & r"]):
        if f in rb.base or not entails(rb.base, f) or equivalent([], [f]):
            continue
        sets = entailment_sets(rb.base, f)
        assert degree(rb, f) == max(min(rb.rank(q) for q in x) for x in sets)
