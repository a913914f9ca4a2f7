"""Contexts: the part of a base that actually takes part in a revision.

A context for evidence ``a`` and goal ``g`` is a sub-base holding

* every sentence that helps derive ``!a`` (these decide what is retracted), and
* a most accessible set ``X`` of surviving sentences such that ``X + {a}``
  minimally derives ``g`` after revising.

Revising the context alone and re-attaching the untouched rest of the base
gives the same result as revising everything.  The verifiers here check
that claim at the level of bases, where "the rest" is the set of base
sentences outside the context slice.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

from .accessibility import RankedBase, cut_at_level, is_bad_cut, most_accessible
from .entailment import entailment_sets, relevant_sentences
from .errors import AlreadyBelieved, EmptyCandidates, InconsistentEvidence, NoGoalDerivation, PresuppositionFailure
from .logic import BeliefBase, SemanticClass, class_of, declare_universe, entails, equivalent, is_consistent, semantic_classes
from .report import Report
from .revision import Policy, contract, expand, revise
from .syntax import Formula, Not, as_formula, disjoin


@dataclass(frozen=True)
class Desideratum:
    basic_goals: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if not self.basic_goals:
            raise ValueError("a desideratum needs at least one basic goal")
        object.__setattr__(self, "basic_goals", tuple(as_formula(g) for g in self.basic_goals))

    @classmethod
    def of(cls, *goals: Formula | str) -> Desideratum:
        return cls(tuple(as_formula(g) for g in goals))

    @property
    def presupposition(self) -> Formula:
        return disjoin(self.basic_goals)

    def goals(self) -> list[Goal]:
        """Basic goals, then disjunctions of up to ``n - 1`` of them, fewest disjuncts first."""
        n = len(self.basic_goals)
        out = []
        for size in range(1, max(1, n - 1) + 1):
            for idx in itertools.combinations(range(n), size):
                out.append(Goal(tuple(self.basic_goals[i] for i in idx), idx))
        return out


@dataclass(frozen=True)
class Goal:
    disjuncts: tuple[Formula, ...]
    positions: tuple[int, ...] = (0,)

    @classmethod
    def single(cls, f: Formula | str) -> Goal:
        return cls((as_formula(f),), (0,))

    @property
    def formula(self) -> Formula:
        return disjoin(self.disjuncts)

    @property
    def is_basic(self) -> bool:
        return len(self.disjuncts) == 1

    def sort_key(self) -> tuple:
        return (len(self.disjuncts), self.positions)

    def __str__(self) -> str:
        return str(self.formula)


@dataclass(frozen=True)
class EffortMeasure:
    accessibility: int
    size: int

    def key(self) -> tuple[int, int]:
        """Smaller key = less effort: higher accessibility first, then fewer sentences."""
        return (-self.accessibility, self.size)


@dataclass(frozen=True)
class Context:
    neg_a_part: BeliefBase
    goal_part: BeliefBase
    base_slice: BeliefBase
    evidence: Formula
    goal: Goal
    neg_goal_part: BeliefBase = field(default_factory=BeliefBase)
    method: str = "entailment-sets"

    def effort(self, rb: RankedBase) -> EffortMeasure:
        acc = min((rb.rank(q) for q in self.base_slice), default=rb.n)
        return EffortMeasure(acc, len(self.base_slice))


@dataclass
class Theorem1Report:
    condition1: bool
    condition2: bool
    nonempty_contracted_context: bool
    goal_derived: bool
    neg_goal_contained: bool
    goal_conditions_apply: bool = True
    counterexamples: list[tuple[str, SemanticClass | Formula]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all((self.condition1, self.condition2, self.nonempty_contracted_context,
                    self.goal_derived, self.neg_goal_contained))

    def flags(self) -> dict[str, bool]:
        return {
            "condition1": self.condition1,
            "condition2": self.condition2,
            "nonempty_contracted_context": self.nonempty_contracted_context,
            "goal_derived": self.goal_derived,
            "neg_goal_contained": self.neg_goal_contained,
        }


# -- goals ----------------------------------------------------------------

def _require_consistent(a: Formula) -> None:
    if not is_consistent([a]):
        raise InconsistentEvidence(f"evidence {a} is contradictory")


def achievable_goals(
    rb: RankedBase,
    a: Formula | str,
    d: Desideratum,
    policy: Policy | str = Policy.ACCESSIBILITY,
) -> list[Goal]:
    """Goals not yet believed that revising by ``a`` would make believed, most preferred first."""
    a = as_formula(a)
    _require_consistent(a)
    if not entails(rb.base, d.presupposition):
        raise PresuppositionFailure(f"presupposition {d.presupposition} is not believed")
    if entails(rb.base, a):
        return []
    revised = revise(rb, a, policy).new_base
    goals = [g for g in d.goals() if not entails(rb.base, g.formula) and entails(revised, g.formula)]
    return sorted(goals, key=Goal.sort_key)


# -- construction ---------------------------------------------------------

def _check_preconditions(rb: RankedBase, a: Formula, g: Goal) -> None:
    _require_consistent(a)
    if entails(rb.base, a):
        raise AlreadyBelieved(f"{a} already follows from the base")
    if entails(rb.base, g.formula):
        raise NoGoalDerivation(f"goal {g} already follows from the base")


def goal_support(rb: RankedBase, a: Formula, g: Goal, policy: Policy | str) -> BeliefBase:
    """Most accessible ``X`` among survivors with ``X + {a}`` a minimal derivation of the goal."""
    revised = revise(rb, a, policy).new_base
    options = [tuple(q for q in x if q != a) for x in entailment_sets(revised, g.formula) if a in x]
    if not options:
        raise NoGoalDerivation(f"revising by {a} does not yield goal {g}")
    return BeliefBase(most_accessible(rb, options))


def construct_context(
    rb: RankedBase,
    a: Formula | str,
    g: Goal | Formula | str,
    policy: Policy | str = Policy.ACCESSIBILITY,
    complete_negated_goal: bool = True,
) -> Context:
    """Context from entailment sets of ``!a`` and of the goal.

    With ``complete_negated_goal`` (the default), if the base believes the
    negated goal but the slice does not derive it, the most accessible
    entailment set of the negated goal is added as well.
    """
    a = as_formula(a)
    g = g if isinstance(g, Goal) else Goal.single(g)
    _check_preconditions(rb, a, g)
    neg_part = relevant_sentences(rb.base, Not(a))
    goal_part = goal_support(rb, a, g, policy)
    members = set(neg_part) | set(goal_part)
    neg_goal_part = BeliefBase()
    neg_g = Not(g.formula)
    if complete_negated_goal and entails(rb.base, neg_g) and not entails(rb.base.keep(members), neg_g):
        neg_goal_part = BeliefBase(most_accessible(rb, entailment_sets(rb.base, neg_g)))
        members |= set(neg_goal_part)
    return Context(neg_part, goal_part, rb.base.keep(members), a, g, neg_goal_part)


# -- verification ---------------------------------------------------------

def _classes_for(rb: RankedBase, k: int, *extra: Formula) -> list[SemanticClass]:
    return semantic_classes(k, declare_universe(k, *rb.base, *extra))


def _same_closure(x: Sequence[Formula], y: Sequence[Formula], classes, label, sink) -> bool:
    """Cn(x) == Cn(y); over the classes when given (recording mismatches), else directly."""
    if classes is None:
        return equivalent(x, y)
    ok = True
    for c in classes:
        if entails(x, c.representative) != entails(y, c.representative):
            ok = False
            sink.append((label, c))
    return ok


def verify_theorem1(
    rb: RankedBase,
    a: Formula | str,
    ctx: Context,
    policy: Policy | str = Policy.ACCESSIBILITY,
    k: int | None = None,
) -> Theorem1Report:
    """Check a context against the retraction and reattachment conditions and the goal conditions.

    Retraction: the context loses exactly the base sentences the whole base
    loses.  Reattachment: revising the context and adding back the base
    sentences outside it is equivalent to revising the whole base.  With
    ``k`` both are additionally swept over every semantic class of a
    ``k``-atom universe and mismatching classes are reported.
    """
    a = as_formula(a)
    policy = Policy(policy)
    g = ctx.goal.formula
    base = rb.base
    sub = ctx.base_slice
    rb_sub = rb.restrict(sub)
    classes = _classes_for(rb, k, a, g) if k is not None else None
    cex: list = []

    contracted = contract(rb, Not(a), policy)
    contracted_sub = contract(rb_sub, Not(a), policy)
    lost = base.without(contracted)
    lost_sub = sub.without(contracted_sub)
    cond1 = lost.as_set() == lost_sub.as_set()
    if classes is not None:
        swept = _same_closure(list(lost), list(lost_sub), classes, "condition1", cex)
        if not swept or not cond1:
            cond1 = False
            if swept:
                universe = classes[0].universe
                for f in lost.as_set() ^ lost_sub.as_set():
                    cex.append(("condition1", class_of(f, universe)))

    revised = expand(contracted, a)
    revised_sub = expand(contracted_sub, a)
    reattached = list(revised_sub) + [q for q in base if q not in sub]
    cond2 = _same_closure(list(revised), reattached, classes, "condition2", cex)
    if classes is not None:
        cond2 = cond2 and equivalent(revised, reattached)

    applies = not entails(base, g) and entails(revised, g)
    nonempty = goal_derived = neg_goal = True
    if applies:
        if not entails([a], g):
            nonempty = len(contracted_sub) > 0
        goal_derived = entails(revised_sub, g)
        if entails(base, Not(g)):
            neg_goal = entails(sub, Not(g))
        for name, ok in (("nonempty_contracted_context", nonempty), ("goal_derived", goal_derived),
                         ("neg_goal_contained", neg_goal)):
            if not ok:
                cex.append((name, g))
    return Theorem1Report(cond1, cond2, nonempty, goal_derived, neg_goal, applies, cex)


def _subset_closure(x: Sequence[Formula], y: Sequence[Formula], classes, check) -> None:
    """Record Cn(x) <= Cn(y) into ``check``."""
    if classes is None:
        missing = [f for f in x if not entails(y, f)]
        check.record(not missing, missing[:1])
        return
    for c in classes:
        check.record(not entails(x, c.representative) or entails(y, c.representative), c)


def verify_corollary1(
    rb: RankedBase,
    a: Formula | str,
    ctx: Context,
    policy: Policy | str = Policy.ACCESSIBILITY,
    k: int | None = None,
) -> Report:
    """Monotony of contraction and revision between a context and its base, and non-derivability of ``!a``."""
    a = as_formula(a)
    policy = Policy(policy)
    base, sub = rb.base, ctx.base_slice
    rb_sub = rb.restrict(sub)
    classes = _classes_for(rb, k, a, ctx.goal.formula) if k is not None else None
    report = Report("context monotony")

    pre = report.check("precondition (retraction condition)")
    pre.record(verify_theorem1(rb, a, ctx, policy).condition1)

    contracted = contract(rb, Not(a), policy)
    contracted_sub = contract(rb_sub, Not(a), policy)
    _subset_closure(list(contracted_sub), list(contracted), classes, report.check("a1 contraction monotony"))
    _subset_closure(list(expand(contracted_sub, a)), list(expand(contracted, a)), classes,
                    report.check("a2 revision monotony"))
    neg_a = Not(a)
    literal = report.check("a2 revision by !A", informational=True)
    if is_consistent([neg_a]):
        _subset_closure(list(revise(rb_sub, neg_a, policy).new_base),
                        list(revise(rb, neg_a, policy).new_base), classes, literal)
    else:
        literal.applicable = False

    b = report.check("b !A not derivable")
    if entails([], neg_a):
        b.applicable = False
    else:
        rest = [q for q in base if q not in sub]
        b.record(not entails(list(contracted_sub) + rest, neg_a), neg_a)
    return report


def select_optimal(rb: RankedBase, candidates: Sequence[Context]) -> Context:
    """Least-effort candidate: most accessible, then smallest, then earliest base positions."""
    if not candidates:
        raise EmptyCandidates("no candidate contexts")

    def key(ctx: Context):
        e = ctx.effort(rb)
        return (e.key(), tuple(rb.base.index(q) for q in ctx.base_slice))
    return min(candidates, key=key)


def context_from_cut(
    rb: RankedBase,
    a: Formula | str,
    g: Goal | Formula | str,
    policy: Policy | str = Policy.ACCESSIBILITY,
    k: int | None = None,
) -> Context:
    """Highest stratum of the base that already works as a context.

    Levels are scanned from the top down.  A bad cut is first closed by
    adding the excluded base sentences it derives.  Falls back to
    :func:`construct_context` when no stratum passes.
    """
    a = as_formula(a)
    g = g if isinstance(g, Goal) else Goal.single(g)
    _check_preconditions(rb, a, g)
    relevant = set(relevant_sentences(rb.base, Not(a)))
    for level in range(rb.n, 0, -1):
        cut = cut_at_level(rb, level)
        members = set(cut.base_slice)
        if is_bad_cut(rb, cut) is not None:
            members |= {q for q in rb.base if entails(cut.base_slice, q)}
        sl = rb.base.keep(members)
        ctx = Context(sl.keep(relevant), sl.without(relevant), sl, a, g, method=f"cut@{level}")
        if verify_theorem1(rb, a, ctx, policy, k).passed:
            return ctx
    return construct_context(rb, a, g, policy)
