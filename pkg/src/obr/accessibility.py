"""Finite accessibility rankings and the ordering they generate.

A :class:`RankedBase` pairs a consistent base with integer ranks forming a
contiguous range ``1..n``.  Larger means more accessible.  ``degree``
extends the ranking to every formula:

* tautologies get ``n``;
* base sentences keep their own rank;
* other believed sentences get the best "weakest link" over the minimal
  subsets of the base that derive them;
* disbelieved sentences inherit the degree of their negation;
* undetermined sentences get ``0``.

The best weakest link equals the highest level whose upper stratum
(sentences ranked at or above it) already derives the sentence, which is
how it is computed by default.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType

from .entailment import entailment_sets
from .errors import EmptySet, InconsistentBase, RankingError, UndeterminedSentence
from .logic import BeliefBase, declare_universe, entails, is_consistent, is_tautology, semantic_classes
from .report import Report
from .syntax import Atom, Formula, Not, as_formula


@dataclass(frozen=True)
class RankedBase:
    base: BeliefBase
    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.ranks) != len(self.base):
            raise RankingError("every base sentence needs exactly one rank")
        present = set(self.ranks)
        if present != set(range(1, len(present) + 1)):
            raise RankingError(f"ranks {sorted(present)} do not form a contiguous range starting at 1")
        if not is_consistent(self.base):
            raise InconsistentBase(f"base {self.base} is inconsistent")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, Formula | str]]) -> RankedBase:
        """Build from ``(rank, formula)`` pairs, keeping their order."""
        seen: dict[Formula, int] = {}
        for rank, f in pairs:
            f = as_formula(f)
            if not isinstance(rank, int) or isinstance(rank, bool):
                raise RankingError(f"rank {rank!r} is not an integer")
            if f in seen and seen[f] != rank:
                raise RankingError(f"{f} is ranked twice ({seen[f]} and {rank})")
            seen.setdefault(f, rank)
        return cls(BeliefBase(seen), tuple(seen.values()))

    @classmethod
    def normalized(cls, pairs: Iterable[tuple[int, Formula | str]]) -> RankedBase:
        """Like :meth:`from_pairs` but squeezes arbitrary integer ranks to ``1..n'``, preserving order."""
        pairs = [(r, as_formula(f)) for r, f in pairs]
        dense = {r: i for i, r in enumerate(sorted({r for r, _ in pairs}), start=1)}
        return cls.from_pairs((dense[r], f) for r, f in pairs)

    @property
    def n(self) -> int:
        return max(self.ranks, default=0)

    @property
    def af(self) -> Mapping[Formula, int]:
        return MappingProxyType(dict(zip(self.base, self.ranks)))

    def rank(self, q: Formula) -> int:
        return self.ranks[self.base.index(q)]

    def pairs(self) -> list[tuple[int, Formula]]:
        return list(zip(self.ranks, self.base))

    def stratum(self, level: int) -> BeliefBase:
        """Base sentences ranked ``>= level``."""
        return BeliefBase(f for f, r in zip(self.base, self.ranks) if r >= level)

    def restrict(self, members: Iterable[Formula]) -> RankedBase:
        keep = set(members)
        return RankedBase.normalized((r, f) for r, f in self.pairs() if f in keep)

    def __len__(self) -> int:
        return len(self.base)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{f}: {r}" for r, f in self.pairs()) + "}"


# -- degrees --------------------------------------------------------------

def _derived_by_strata(rb: RankedBase, p: Formula) -> int:
    for level in range(rb.n, 0, -1):
        if entails(rb.stratum(level), p):
            return level
    raise AssertionError("sentence is not derivable from the base")


def _derived_by_sets(rb: RankedBase, p: Formula) -> int:
    return max(min(rb.rank(q) for q in x) for x in entailment_sets(rb.base, p))


def _determined(rb: RankedBase, p: Formula, derived) -> int | None:
    if is_tautology(p):
        return rb.n
    if p in rb.base:
        return rb.rank(p)
    if entails(rb.base, p):
        return derived(rb, p)
    return None


@lru_cache(maxsize=1 << 16)
def _degree(rb: RankedBase, p: Formula, method: str) -> int:
    derived = _derived_by_strata if method == "strata" else _derived_by_sets
    d = _determined(rb, p, derived)
    if d is not None:
        return d
    neg = Not(p)
    if entails(rb.base, neg):
        return _determined(rb, neg, derived)
    return 0


def degree(rb: RankedBase, p: Formula | str, method: str = "strata") -> int:
    """Degree of accessibility of ``p`` under ``rb``, in ``0..n``.

    ``method="entailment-sets"`` evaluates the max-min over explicitly
    enumerated entailment sets instead of scanning strata; both agree.
    """
    if method not in ("strata", "entailment-sets"):
        raise ValueError(f"unknown method {method!r}")
    return _degree(rb, as_formula(p), method)


def leq_af(rb: RankedBase, p: Formula | str, q: Formula | str) -> bool:
    return degree(rb, p) <= degree(rb, q)


def set_accessibility(rb: RankedBase, s: Iterable[Formula | str]) -> int:
    """A set is as accessible as its least accessible member."""
    values = [degree(rb, f) for f in s]
    if not values:
        raise EmptySet("accessibility of an empty set is undefined")
    return min(values)


def most_accessible(rb: RankedBase, sets):
    """Pick the most accessible set; ties go to fewer members, then earlier base positions."""
    def key(x):
        members = list(x)
        acc = min((rb.rank(q) for q in members), default=rb.n)
        return (-acc, len(members), sorted(rb.base.index(q) for q in members))
    return min(sets, key=key)


# -- cuts -----------------------------------------------------------------

@dataclass(frozen=True)
class Cut:
    level: int
    base_slice: BeliefBase


@dataclass(frozen=True)
class BadCutWitness:
    culprit: Formula
    rank: int


def cut_at_level(rb: RankedBase, level: int) -> Cut:
    if not 1 <= level <= rb.n + 1:
        raise ValueError(f"cut level {level} outside 1..{rb.n + 1}")
    return Cut(level, rb.stratum(level))


def cut_at(rb: RankedBase, a: Formula | str) -> Cut:
    d = degree(rb, a)
    if d == 0:
        raise UndeterminedSentence(f"{a} is undetermined; its cut is not defined")
    return cut_at_level(rb, d)


def in_cut(rb: RankedBase, cut: Cut, phi: Formula | str) -> bool:
    """Membership in the full (closed-set) cut, not just its base slice."""
    phi = as_formula(phi)
    return entails(rb.base, phi) and degree(rb, phi) >= cut.level


def bad_cut_witnesses(rb: RankedBase, cut: Cut) -> list[BadCutWitness]:
    return [
        BadCutWitness(q, r)
        for r, q in rb.pairs()
        if r < cut.level and entails(cut.base_slice, q)
    ]


def is_bad_cut(rb: RankedBase, cut: Cut) -> BadCutWitness | None:
    """First excluded base sentence that the slice nevertheless derives, if any."""
    for r, q in rb.pairs():
        if r < cut.level and entails(cut.base_slice, q):
            return BadCutWitness(q, r)
    return None


# -- postulates -----------------------------------------------------------

def _fresh_atom(universe: Iterable[str]) -> Atom:
    used = set(universe)
    i = 0
    while f"z{i}" in used:
        i += 1
    return Atom(f"z{i}")


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def check_postulates(
    rb: RankedBase,
    k: int,
    relation: Callable[[Formula, Formula], bool] | None = None,
) -> Report:
    """Check A1-A5 for ``<=_af`` (or a supplied relation) over every semantic class.

    Quantification over the language is approximated by one representative
    per class of the ``k``-atom universe, plus a fresh atom standing for
    the sentences the base says nothing about.
    """
    universe = declare_universe(k, *rb.base)
    reps = [c.representative for c in semantic_classes(k, universe)]
    probe = _fresh_atom(universe)
    size = len(reps)
    full = (1 << size) - 1
    report = Report(f"accessibility postulates over {k} atoms")

    if relation is None:
        degs = [degree(rb, f) for f in reps]
        geq = {d: sum(1 << j for j, e in enumerate(degs) if e >= d) for d in set(degs)}
        leq = {d: sum(1 << j for j, e in enumerate(degs) if e <= d) for d in set(degs)}
        rows = [geq[d] for d in degs]
        cols = [leq[d] for d in degs]

        def rel(f: Formula, g: Formula) -> bool:
            return degree(rb, f) <= degree(rb, g)
    else:
        rel = relation
        rows = [sum(1 << j for j, g in enumerate(reps) if rel(f, g)) for f in reps]
        cols = [sum(1 << i for i in range(size) if rows[i] >> j & 1) for j in range(size)]

    # A1: every successor's successors are successors
    a1 = report.check("A1 transitivity")
    closure: dict[int, int] = {}
    for i, row in enumerate(rows):
        if row not in closure:
            reach = 0
            for j in _bits(row):
                reach |= rows[j]
            closure[row] = reach
        extra = closure[row] & ~row
        if extra:
            kk = next(_bits(extra))
            j = next(j for j in _bits(row) if rows[j] >> kk & 1)
            a1.record(False, (reps[i], reps[j], reps[kk]))
        else:
            a1.checked += size * size

    a2 = report.check("A2 connectedness")
    for i in range(size):
        missing = full & ~(rows[i] | cols[i])
        a2.record(not missing, None if not missing else (reps[i], reps[next(_bits(missing))]))

    a3 = report.check("A3 negation")
    for f in reps:
        g = Not(f)
        a3.record(rel(f, g) and rel(g, f), (f, g))

    a4 = report.check("A4 undetermined at bottom")
    for i, f in enumerate(reps):
        undetermined = not entails(rb.base, f) and not entails(rb.base, Not(f))
        bottom = rows[i] == full and rel(f, probe)
        a4.record(undetermined == bottom, f)

    a5 = report.check("A5 derived rank")
    for f in reps:
        if f in rb.base or is_tautology(f) or not entails(rb.base, f):
            continue
        best = most_accessible(rb, entailment_sets(rb.base, f))
        weakest = min(best, key=lambda q: (rb.rank(q), rb.base.index(q)))
        a5.record(rel(f, weakest) and rel(weakest, f), (f, tuple(best)))
    return report
