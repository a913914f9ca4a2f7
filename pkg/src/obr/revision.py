"""Base revision: expansion, remainders, partial meet contraction and the Levi identity.

Revision by ``a`` contracts the base by ``!a`` and then adds ``a``.
Contraction intersects a selection of remainders (maximal subsets that no
longer derive the target).  The default selection keeps the remainders
whose *retractable* part is most accessible: sentences outside every
entailment set of the target sit in every remainder and are ignored when
comparing, so unrelated beliefs never influence what gets retracted.

After revising, the evidence moves to a fresh top rank, survivors keep
their ranks, retracted sentences drop out of the ranking, and ranks are
squeezed back to ``1..n'``.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .accessibility import RankedBase
from .entailment import maximal_nonentailing_masks
from .errors import InconsistentEvidence, ObrError
from .logic import BeliefBase, as_base, class_of, declare_universe, entails, equivalent, is_consistent, is_tautology, semantic_classes
from .report import Report
from .syntax import And, Atom, Formula, Not, Or, as_formula, conjoin


class Policy(str, enum.Enum):
    ACCESSIBILITY = "accessibility-partial-meet"
    FULL_MEET = "full-meet"
    MAXICHOICE_FIRST = "maxichoice-first"

    def __str__(self) -> str:
        return self.value


SelectionPolicy = Policy


@dataclass(frozen=True)
class Remainder:
    subset: tuple[Formula, ...]
    target: Formula

    def __iter__(self):
        return iter(self.subset)

    def __len__(self) -> int:
        return len(self.subset)

    def as_set(self) -> frozenset[Formula]:
        return frozenset(self.subset)

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.subset)) + "}"


@dataclass(frozen=True)
class RevisionOutcome:
    new_base: BeliefBase
    retracted: tuple[Formula, ...]
    added: Formula
    selected: tuple[Remainder, ...]
    new_ranking: RankedBase

    @property
    def retained(self) -> tuple[Formula, ...]:
        return tuple(f for f in self.new_base if f != self.added)


def expand(base: BeliefBase | Iterable[Formula], a: Formula | str) -> BeliefBase:
    return as_base(base).add(a)


def _remainder_masks(base: BeliefBase, target: Formula) -> list[int]:
    return maximal_nonentailing_masks(base, target)


def remainders(base: BeliefBase | Iterable[Formula], target: Formula | str) -> list[Remainder]:
    """Maximal subsets of ``base`` not entailing ``target``; ``[]`` for a tautology."""
    base = as_base(base)
    target = as_formula(target)
    return [Remainder(tuple(base.from_mask(m)), target) for m in _remainder_masks(base, target)]


def _select(rb: RankedBase, masks: list[int], policy: Policy) -> list[int]:
    if policy is Policy.FULL_MEET or len(masks) <= 1:
        return list(masks)
    if policy is Policy.MAXICHOICE_FIRST:
        return masks[:1]
    common = (1 << len(rb.base)) - 1
    for m in masks:
        common &= m
    relevant = ~common

    def accessibility(mask: int) -> int:
        part = mask & relevant
        return min((r for i, r in enumerate(rb.ranks) if part >> i & 1), default=rb.n + 1)

    scores = [accessibility(m) for m in masks]
    best = max(scores)
    return [m for m, s in zip(masks, scores) if s == best]


def _contract(rb: RankedBase, target: Formula, policy: Policy) -> tuple[BeliefBase, tuple[Remainder, ...]]:
    policy = Policy(policy)
    if is_tautology(target):
        return rb.base, ()
    masks = _remainder_masks(rb.base, target)
    chosen = _select(rb, masks, policy)
    kept = (1 << len(rb.base)) - 1
    for m in chosen:
        kept &= m
    selected = tuple(Remainder(tuple(rb.base.from_mask(m)), target) for m in chosen)
    return rb.base.from_mask(kept), selected


def contract(rb: RankedBase, target: Formula | str, policy: Policy | str = Policy.ACCESSIBILITY) -> BeliefBase:
    """Partial meet contraction of ``rb.base`` by ``target``.

    A tautological target leaves the base unchanged.
    """
    return _contract(rb, as_formula(target), Policy(policy))[0]


def adjust_ranking(rb: RankedBase, a: Formula | str, new_base: BeliefBase) -> RankedBase:
    """Rank the revised base: evidence on top, survivors unchanged, then renormalise."""
    a = as_formula(a)
    top = rb.n + 1
    pairs = []
    for q in new_base:
        if q == a:
            pairs.append((top, q))
        elif q in rb.base:
            pairs.append((rb.rank(q), q))
        else:
            raise ValueError(f"{q} is neither the evidence nor an old base sentence")
    return RankedBase.normalized(pairs)


def revise(rb: RankedBase, a: Formula | str, policy: Policy | str = Policy.ACCESSIBILITY) -> RevisionOutcome:
    a = as_formula(a)
    if not is_consistent([a]):
        raise InconsistentEvidence(f"evidence {a} is contradictory")
    contracted, selected = _contract(rb, Not(a), Policy(policy))
    new_base = expand(contracted, a)
    retracted = tuple(f for f in rb.base if f not in new_base)
    return RevisionOutcome(new_base, retracted, a, selected, adjust_ranking(rb, a, new_base))


def revise_sequence(
    rb: RankedBase,
    evidence: Sequence[Formula | str],
    policy: Policy | str = Policy.ACCESSIBILITY,
) -> list[RevisionOutcome]:
    outcomes = []
    for step, a in enumerate(evidence):
        try:
            out = revise(rb, a, policy)
        except ObrError as exc:
            exc.step = step
            exc.args = (f"step {step}: {exc}",)
            raise
        outcomes.append(out)
        rb = out.new_ranking
    return outcomes


# -- AGM postulate check --------------------------------------------------

def _members(base: Iterable[Formula], reps: Sequence[Formula]) -> int:
    base = list(base)
    return sum(1 << i for i, f in enumerate(reps) if entails(base, f))


def _first_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def check_agm(
    rb: RankedBase,
    a: Formula | str,
    k: int,
    policy: Policy | str = Policy.ACCESSIBILITY,
) -> Report:
    """Basic AGM postulates for one revision, over every class of a ``k``-atom universe.

    The supplementary postulates (conjunctive inclusion and vacuity) are
    evaluated against each literal of the universe and reported as
    informational entries.
    """
    a = as_formula(a)
    policy = Policy(policy)
    universe = declare_universe(k, *rb.base, a)
    classes = semantic_classes(k, universe)
    reps = [c.representative for c in classes]
    report = Report(f"AGM basic postulates for revision by {a}")

    star = revise(rb, a, policy).new_base
    plus = expand(rb.base, a)
    m_star = _members(star, reps)
    m_plus = _members(plus, reps)

    closure = report.check("closure")
    strongest = conjoin(reps[i] for i in range(len(reps)) if m_star >> i & 1)
    closure.record(entails(star, strongest), strongest)
    upward = _members([strongest], reps)
    closure.record(upward == m_star, classes[_first_bit(upward ^ m_star)] if upward != m_star else None)

    report.check("success").record(entails(star, a), a)

    inclusion = report.check("inclusion")
    extra = m_star & ~m_plus
    inclusion.record(not extra, classes[_first_bit(extra)] if extra else None)

    vacuity = report.check("vacuity")
    if entails(rb.base, Not(a)):
        vacuity.applicable = False
    else:
        diff = m_star ^ m_plus
        vacuity.record(not diff and equivalent(star, plus), classes[_first_bit(diff)] if diff else None)

    consistency = report.check("consistency")
    consistency.record(is_consistent(star), star)

    ext = report.check("extensionality")
    x = Atom(universe[0])
    variants = [Or(a, And(x, Not(x)))]
    dnf = class_of(a, universe).representative
    if dnf != a:
        variants.append(dnf)
    for b in variants:
        other = revise(rb, b, policy).new_base
        ext.record(equivalent(star, other) and _members(other, reps) == m_star, b)

    k7 = report.check("K*7 conjunctive inclusion", informational=True)
    k8 = report.check("K*8 conjunctive vacuity", informational=True)
    for name in universe:
        for b in (Atom(name), Not(Atom(name))):
            ab = And(a, b)
            if not is_consistent([ab]):
                continue
            m_ab = _members(revise(rb, ab, policy).new_base, reps)
            m_star_b = _members(expand(star, b), reps)
            k7.record(not (m_ab & ~m_star_b), b)
            if not entails(star, Not(b)):
                k8.record(not (m_star_b & ~m_ab), b)
    return report

