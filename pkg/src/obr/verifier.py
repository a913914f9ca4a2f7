"""Brute-force oracles and seeded property sweeps.

The oracles here deliberately share nothing with the solver or the
enumerators beyond the formula classes: truth tables are evaluated by a
local interpreter and subsets are enumerated exhaustively.

Every sweep case draws from its own RNG seeded with
``"<seed>:<property>:<case>"``, so a single failing case can be replayed
in isolation and cases may run in any order or in parallel.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .accessibility import RankedBase, check_postulates, cut_at_level, degree, is_bad_cut
from .context import Desideratum, achievable_goals, construct_context, verify_corollary1, verify_theorem1
from .entailment import entailment_sets
from .errors import LimitExceeded, UnknownProperty
from .limits import Limits, current_limits, using_limits
from .logic import declare_universe, entails, is_consistent, semantic_classes
from .revision import Policy, check_agm, revise
from .syntax import BOTTOM, TOP, And, Atom, Bottom, Formula, Iff, Implies, Not, Or, Top, subformulas

# -- oracles --------------------------------------------------------------


def _holds(f: Formula, val: dict[str, bool]) -> bool:
    if isinstance(f, Atom):
        return val[f.name]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not _holds(f.child, val)
    if isinstance(f, And):
        return _holds(f.left, val) and _holds(f.right, val)
    if isinstance(f, Or):
        return _holds(f.left, val) or _holds(f.right, val)
    if isinstance(f, Implies):
        return not _holds(f.left, val) or _holds(f.right, val)
    if isinstance(f, Iff):
        return _holds(f.left, val) == _holds(f.right, val)
    raise TypeError(f"not a formula: {f!r}")


def _names(formulas: Iterable[Formula]) -> list[str]:
    names = set()
    for f in formulas:
        names.update(g.name for g in subformulas(f) if isinstance(g, Atom))
    return sorted(names)


def tt_entails(base: Iterable[Formula], goal: Formula) -> bool:
    """Entailment by enumerating every valuation of the atoms involved."""
    base = list(base)
    names = _names([*base, goal])
    cap = current_limits().oracle_atoms
    if len(names) > cap:
        raise LimitExceeded(f"truth-table oracle limited to {cap} atoms, got {len(names)}")
    for bits in itertools.product((False, True), repeat=len(names)):
        val = dict(zip(names, bits))
        if all(_holds(b, val) for b in base) and not _holds(goal, val):
            return False
    return True


def brute_entailment_sets(base: Sequence[Formula], target: Formula) -> list[frozenset[Formula]]:
    """Minimal entailing subsets, by checking all ``2**len(base)`` subsets."""
    base = list(dict.fromkeys(base))
    if len(base) > current_limits().brute_sets:
        raise LimitExceeded(f"brute-force subsets limited to {current_limits().brute_sets} sentences")
    hits = [
        frozenset(s)
        for r in range(len(base) + 1)
        for s in itertools.combinations(base, r)
        if tt_entails(s, target)
    ]
    return [h for h in hits if not any(o < h for o in hits)]


def brute_remainders(base: Sequence[Formula], target: Formula) -> list[frozenset[Formula]]:
    base = list(dict.fromkeys(base))
    misses = [
        frozenset(s)
        for r in range(len(base) + 1)
        for s in itertools.combinations(base, r)
        if not tt_entails(s, target)
    ]
    return [m for m in misses if not any(m < o for o in misses)]


def brute_degree(rb: RankedBase, p: Formula) -> int:
    """Degree of accessibility straight from its case definition, using only the oracles."""
    af = dict(zip(rb.base, rb.ranks))
    base = list(rb.base)

    def determined(x: Formula) -> int | None:
        if tt_entails([], x):
            return rb.n
        if x in af:
            return af[x]
        if tt_entails(base, x):
            return max(min(af[q] for q in s) for s in brute_entailment_sets(base, x))
        return None

    d = determined(p)
    if d is not None:
        return d
    if tt_entails(base, Not(p)):
        return determined(Not(p))
    return 0


# -- random instances -----------------------------------------------------

ATOMS3 = ("p", "q", "r")


def random_formula(rng: random.Random, names: Sequence[str] = ATOMS3, depth: int = 2) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.02:
            return TOP
        if roll < 0.04:
            return BOTTOM
        a = Atom(rng.choice(names))
        return Not(a) if rng.random() < 0.35 else a
    op = rng.choices([And, Or, Implies, Iff, Not], weights=[4, 3, 4, 1, 1])[0]
    if op is Not:
        return Not(random_formula(rng, names, depth - 1))
    return op(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def random_ranked_base(
    rng: random.Random,
    names: Sequence[str] = ATOMS3,
    sizes: tuple[int, int] = (2, 8),
    max_rank: int = 4,
    bad_cut_bias: float = 0.4,
) -> RankedBase:
    """Consistent base of ``sizes`` sentences with ranks in ``1..max_rank`` (renormalised)."""
    while True:
        size = rng.randint(*sizes)
        pairs: list[tuple[int, Formula]] = []
        if rng.random() < bad_cut_bias and max_rank > 1:
            x, y = random_formula(rng, names, 1), random_formula(rng, names, 1)
            low = rng.randint(1, max_rank - 1)
            pairs += [(rng.randint(low + 1, max_rank), And(x, y)), (low, x)]
        while len(pairs) < size:
            pairs.append((rng.randint(1, max_rank), random_formula(rng, names, 2)))
        rng.shuffle(pairs)
        seen: dict[Formula, int] = {}
        for r, f in pairs:
            seen.setdefault(f, r)
        if len(seen) < sizes[0] or not is_consistent(seen):
            continue
        return RankedBase.normalized((r, f) for f, r in seen.items())


def random_evidence(rng: random.Random, rb: RankedBase, names: Sequence[str] = ATOMS3) -> Formula:
    """Consistent evidence; about half the time it contradicts something believed."""
    while True:
        if rng.random() < 0.5 and len(rb.base):
            pool = list(rb.base) + [Atom(n) for n in names] + [Not(Atom(n)) for n in names]
            believed = [f for f in pool if entails(rb.base, f)]
            if believed:
                a = Not(rng.choice(believed))
                if is_consistent([a]):
                    return a
        a = random_formula(rng, names, 2)
        if is_consistent([a]):
            return a


def random_desideratum(rng: random.Random, rb: RankedBase, names: Sequence[str] = ATOMS3) -> Desideratum:
    goals = [random_formula(rng, names, 1) for _ in range(rng.randint(1, 3))]
    if not entails(rb.base, Or(goals[0], goals[-1]) if len(goals) > 1 else goals[0]):
        believed = [f for f in rb.base] + [Atom(n) for n in names] + [Not(Atom(n)) for n in names]
        believed = [f for f in believed if entails(rb.base, f)]
        goals.append(rng.choice(believed) if believed else TOP)
    d = Desideratum(tuple(dict.fromkeys(goals)))
    if not entails(rb.base, d.presupposition):
        d = Desideratum(d.basic_goals + (TOP,))
    return d


def random_goal_instance(rng: random.Random, policy: Policy = Policy.ACCESSIBILITY):
    """(ranked base, evidence, desideratum, goal) with the goal achievable only through the evidence."""
    while True:
        rb = random_ranked_base(rng)
        a = random_evidence(rng, rb)
        if entails(rb.base, a):
            continue
        d = random_desideratum(rng, rb)
        goals = achievable_goals(rb, a, d, policy)
        if goals:
            return rb, a, d, rng.choice(goals)


# -- sweeps ---------------------------------------------------------------

@dataclass
class PropertyCaseResult:
    property: str
    case: int
    instance: dict[str, Any]
    passed: bool
    counterexample: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.passed != (self.counterexample is None):
            raise ValueError("a counterexample must be present exactly when the case fails")

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.property,
            "case": self.case,
            "instance": self.instance,
            "passed": self.passed,
            "counterexample": self.counterexample,
            "details": self.details,
        }


def serialize_base(rb: RankedBase) -> list[dict[str, Any]]:
    return [{"rank": r, "formula": str(f)} for r, f in rb.pairs()]


def _case(prop: str, i: int, seed: int, instance: dict, ok: bool, witness: Any = None, **details) -> PropertyCaseResult:
    instance = {**instance, "seed": seed, "replay": f"obr verify {prop} --seed {seed} --case {i}"}
    cex = None if ok else {"instance": instance, "witness": witness}
    return PropertyCaseResult(prop, i, instance, ok, cex, details)


def _rng(seed: int, prop: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{prop}:{i}")


def _oracle_agreement(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "oracle-agreement", i)
    names = ("p", "q", "r", "s", "t", "u")[: rng.randint(1, 6)]
    base = [random_formula(rng, names, rng.randint(0, 3)) for _ in range(rng.randint(0, 3))]
    goal = random_formula(rng, names, rng.randint(0, 3))
    fast, slow = entails(base, goal), tt_entails(base, goal)
    inst = {"base": [str(f) for f in base], "goal": str(goal)}
    return _case("oracle-agreement", i, seed, inst, fast == slow,
                 None if fast == slow else {"entails": fast, "tt_entails": slow})


def _entailment_sets_case(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "entailment-sets", i)
    names = ("p", "q", "r", "s")[: rng.randint(1, 4)]
    base = list(dict.fromkeys(random_formula(rng, names, 2) for _ in range(rng.randint(1, 10))))
    target = random_formula(rng, names, 2)
    got = [x.as_set() for x in entailment_sets(base, target)]
    want = brute_entailment_sets(base, target)
    ok = len(got) == len(set(got)) and set(got) == set(want)
    inst = {"base": [str(f) for f in base], "target": str(target)}
    witness = None if ok else {"enumerated": [sorted(map(str, s)) for s in got],
                               "brute_force": [sorted(map(str, s)) for s in want]}
    return _case("entailment-sets", i, seed, inst, ok, witness, sets=len(got))


def _theorem1(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    from .context import Context, Goal
    from .entailment import relevant_sentences

    rng = _rng(seed, "theorem1", i)
    rb = random_ranked_base(rng)
    a = random_evidence(rng, rb)
    if rng.random() < 0.5:
        keep = set(relevant_sentences(rb.base, Not(a))) | {q for q in rb.base if rng.random() < 0.5}
    else:
        keep = {q for q in rb.base if rng.random() < 0.6}
    sl = rb.base.keep(keep)
    ctx = Context(sl, sl.keep(()), sl, a, Goal.single(a), method="random")
    rep = verify_theorem1(rb, a, ctx, policy, k=3)
    ok = (not rep.condition1) or rep.condition2
    inst = {"base": serialize_base(rb), "evidence": str(a), "slice": [str(f) for f in sl]}
    return _case("theorem1", i, seed, inst, ok, None if ok else rep.flags(),
                 condition1=rep.condition1, condition2=rep.condition2)


def _goal_instance_dict(rb, a, d, g) -> dict[str, Any]:
    return {"base": serialize_base(rb), "evidence": str(a),
            "desideratum": [str(x) for x in d.basic_goals], "goal": str(g.formula)}


def _theorem2(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "theorem2", i)
    rb, a, d, g = random_goal_instance(rng, policy)
    ctx = construct_context(rb, a, g, policy)
    rep = verify_theorem1(rb, a, ctx, policy, k=3)
    witness = None if rep.passed else {
        "flags": rep.flags(), "slice": [str(f) for f in ctx.base_slice],
        "classes": [[name, str(c)] for name, c in rep.counterexamples[:5]]}
    return _case("theorem2", i, seed, _goal_instance_dict(rb, a, d, g), rep.passed, witness,
                 slice_size=len(ctx.base_slice), base_size=len(rb.base),
                 completed_neg_goal=len(ctx.neg_goal_part) > 0, **rep.flags())


def _corollary1(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "theorem2", i)  # same instances as the theorem2 sweep
    rb, a, d, g = random_goal_instance(rng, policy)
    ctx = construct_context(rb, a, g, policy)
    rep = verify_corollary1(rb, a, ctx, policy, k=3)
    return _case("corollary1", i, seed, _goal_instance_dict(rb, a, d, g), rep.passed,
                 None if rep.passed else rep.to_dict(),
                 **{c.name: c.passed for c in rep.checks.values()})


def _theorem3(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "theorem3", i)
    rb = random_ranked_base(rng)
    universe = declare_universe(3, *rb.base)
    candidates = [c.representative for c in semantic_classes(3, universe)] + list(rb.base)
    ok, bad, witness = True, 0, None
    for level in range(1, rb.n + 1):
        cut = cut_at_level(rb, level)
        if is_bad_cut(rb, cut) is not None:
            bad += 1
            continue
        for phi in candidates:
            if entails(cut.base_slice, phi) and degree(rb, phi) < level:
                ok = False
                witness = {"level": level, "sentence": str(phi), "degree": degree(rb, phi)}
                break
    return _case("theorem3", i, seed, {"base": serialize_base(rb)}, ok, witness,
                 cuts=rb.n, bad_cuts=bad)


def _theorem4(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "theorem4", i)
    rb = random_ranked_base(rng)
    rep = check_postulates(rb, 3)
    return _case("theorem4", i, seed, {"base": serialize_base(rb)}, rep.passed,
                 None if rep.passed else rep.to_dict(),
                 **{c.name: c.checked for c in rep.checks.values()})


def _agm(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "agm", i)
    rb = random_ranked_base(rng)
    a = random_evidence(rng, rb)
    rep = check_agm(rb, a, 3, policy)
    info = {c.name: c.passed for c in rep.checks.values() if c.informational}
    return _case("agm", i, seed, {"base": serialize_base(rb), "evidence": str(a)}, rep.passed,
                 None if rep.passed else rep.to_dict(), **info)


def check_adjustment(rb: RankedBase, a: Formula, policy: Policy = Policy.ACCESSIBILITY) -> list[str]:
    """Violations of the ranking adjustment after revising ``rb`` by ``a`` (empty when fine)."""
    out = revise(rb, a, policy)
    new = out.new_ranking
    problems = []
    top = new.rank(out.added)
    if any(r >= top for r, f in new.pairs() if f != out.added):
        problems.append(f"evidence {out.added} does not hold the strictly highest rank")
    survivors = [f for f in out.new_base if f != out.added and f in rb.base]
    for x, y in itertools.combinations(survivors, 2):
        before = (rb.rank(x) > rb.rank(y)) - (rb.rank(x) < rb.rank(y))
        after = (new.rank(x) > new.rank(y)) - (new.rank(x) < new.rank(y))
        if before != after:
            problems.append(f"order of {x} and {y} changed")
    for p in out.retracted:
        got, want = degree(new, p), brute_degree(new, p)
        if got != want:
            problems.append(f"retracted {p}: degree {got}, oracle {want}")
    return problems


def _def9(i: int, seed: int, policy: Policy) -> PropertyCaseResult:
    rng = _rng(seed, "def9", i)
    rb = random_ranked_base(rng)
    a = random_evidence(rng, rb)
    problems = check_adjustment(rb, a, policy)
    return _case("def9", i, seed, {"base": serialize_base(rb), "evidence": str(a)}, not problems,
                 problems or None)


PROPERTIES: dict[str, Callable[[int, int, Policy], PropertyCaseResult]] = {
    "theorem1": _theorem1,
    "theorem2": _theorem2,
    "theorem3": _theorem3,
    "theorem4": _theorem4,
    "corollary1": _corollary1,
    "agm": _agm,
    "def9": _def9,
    "oracle-agreement": _oracle_agreement,
    "entailment-sets": _entailment_sets_case,
}


def _run_one(args) -> PropertyCaseResult:
    prop, i, seed, policy, limits = args
    with using_limits(limits):
        return PROPERTIES[prop](i, seed, policy)


def run_case(prop: str, seed: int, case: int, policy: Policy | str = Policy.ACCESSIBILITY) -> PropertyCaseResult:
    if prop not in PROPERTIES:
        raise UnknownProperty(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}")
    return PROPERTIES[prop](case, seed, Policy(policy))


def sweep(
    prop: str,
    trials: int,
    seed: int,
    limits: Limits | None = None,
    policy: Policy | str = Policy.ACCESSIBILITY,
    workers: int = 1,
) -> list[PropertyCaseResult]:
    """Run ``trials`` seeded cases of ``prop``; results come back in case order."""
    if prop not in PROPERTIES:
        raise UnknownProperty(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}")
    limits = limits or current_limits()
    jobs = [(prop, i, seed, Policy(policy), limits) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs, chunksize=max(1, trials // (4 * workers))))
    return [_run_one(j) for j in jobs]


def summarize(prop: str, results: Sequence[PropertyCaseResult]) -> dict[str, Any]:
    failures = [r.counterexample for r in results if not r.passed]
    return {"property": prop, "trials": len(results), "passes": len(results) - len(failures),
            "failures": failures}
