import random

import pytest

from obr.accessibility import RankedBase
from obr.errors import LimitExceeded, UnknownProperty
from obr.limits import using_limits
from obr.logic import entails, is_consistent
from obr.syntax import And, Atom, parse
from obr.verifier import (
    PROPERTIES,
    PropertyCaseResult,
    brute_degree,
    brute_entailment_sets,
    random_goal_instance,
    random_ranked_base,
    run_case,
    summarize,
    sweep,
    tt_entails,
)


def test_tt_entails_examples():
    assert tt_entails([parse("p"), parse("p -> q")], parse("q"))
    assert not tt_entails([], parse("p"))
    assert tt_entails([], parse("true"))
    assert tt_entails([parse("false")], parse("q"))


def test_tt_entails_cap():
    f = parse("a & b & c & d & e & f & g")
    with pytest.raises(LimitExceeded):
        tt_entails([f], parse("a"))
    with using_limits(oracle_atoms=7):
        assert tt_entails([f], parse("a"))


def test_brute_sets_cap():
    with pytest.raises(LimitExceeded):
        brute_entailment_sets([Atom(f"a{i}") for i in range(13)], Atom("a0"))


def test_brute_degree_examples():
    rb = RankedBase.from_pairs([(1, "p"), (1, "p -> r"), (2, "q"), (2, "q -> r")])
    assert brute_degree(rb, parse("r")) == 2
    assert brute_degree(rb, parse("!r")) == 2
    assert brute_degree(rb, parse("s")) == 0
    assert brute_degree(rb, parse("p")) == 1


def test_case_result_invariant():
    with pytest.raises(ValueError):
        PropertyCaseResult("x", 0, {}, False, None)
    with pytest.raises(ValueError):
        PropertyCaseResult("x", 0, {}, True, {"w": 1})


def test_generator_shape():
    rng = random.Random(1)
    bad_cut_bases = 0
    for _ in range(200):
        rb = random_ranked_base(rng)
        assert 2 <= len(rb.base) <= 8
        assert 1 <= rb.n <= 4
        assert rb.base.atoms() <= {"p", "q", "r"}
        assert is_consistent(rb.base)
        if any(isinstance(f, And) and g in (f.left, f.right) and rb.rank(f) > rb.rank(g)
               for f in rb.base for g in rb.base):
            bad_cut_bases += 1
    assert 50 <= bad_cut_bases <= 130


def test_goal_instances_admit_goal():
    rb, a, d, g = random_goal_instance(random.Random(3))
    assert not entails(rb.base, g.formula)
    assert entails(rb.base, d.presupposition)


def test_unknown_property():
    with pytest.raises(UnknownProperty):
        sweep("theorem9", 1, 0)
    with pytest.raises(UnknownProperty):
        run_case("nope", 0, 0)


def test_sweep_is_deterministic():
    a = [r.to_dict() for r in sweep("theorem2", 5, 11)]
    b = [r.to_dict() for r in sweep("theorem2", 5, 11)]
    assert a == b
    assert a != [r.to_dict() for r in sweep("theorem2", 5, 12)]


def test_single_case_replays_sweep_case():
    results = sweep("def9", 6, 5)
    assert run_case("def9", 5, 4).to_dict() == results[4].to_dict()
    assert results[4].instance["replay"] == "obr verify def9 --seed 5 --case 4"


def test_parallel_sweep_matches_serial():
    serial = [r.to_dict() for r in sweep("theorem3", 8, 2)]
    parallel = [r.to_dict() for r in sweep("theorem3", 8, 2, workers=2)]
    assert serial == parallel


@pytest.mark.parametrize("prop", sorted(PROPERTIES))
def test_each_property_passes_small_sweep(prop):
    results = sweep(prop, 5, 99)
    assert [r.passed for r in results] == [True] * 5
    s = summarize(prop, results)
    assert s == {"property": prop, "trials": 5, "passes": 5, "failures": []}
