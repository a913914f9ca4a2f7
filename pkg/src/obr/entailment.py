"""Minimal entailing subsets of a base, and their dual, maximal non-entailing subsets.

Subsets are bit masks over base positions.  Both scans walk the subset
lattice level by level in a fixed order (cardinality, then lexicographic
positions), so the output order is deterministic.  Whenever a probe lands
on the "wrong" side, it is pushed to the opposite extreme (grown to a
maximal non-entailing set, or shrunk to a minimal entailing one) and the
whole region it dominates is skipped.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import lru_cache

from .errors import LimitExceeded
from .limits import current_limits
from .logic import BeliefBase, as_base, entails
from .syntax import Formula


@dataclass(frozen=True)
class EntailmentSet:
    members: tuple[Formula, ...]
    target: Formula

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, f: object) -> bool:
        return f in self.members

    def as_set(self) -> frozenset[Formula]:
        return frozenset(self.members)

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.members)) + "}"


@lru_cache(maxsize=32)
def _masks_by_size(m: int, descending: bool) -> tuple[int, ...]:
    sizes = range(m, -1, -1) if descending else range(m + 1)
    out = []
    for r in sizes:
        for combo in itertools.combinations(range(m), r):
            mask = 0
            for i in combo:
                mask |= 1 << i
            out.append(mask)
    return tuple(out)


def _check_cap(base: BeliefBase) -> None:
    cap = current_limits().enumeration
    if len(base) > cap:
        raise LimitExceeded(f"base of {len(base)} sentences exceeds the enumeration cap {cap}")


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _entails_mask(base: BeliefBase, mask: int, target: Formula) -> bool:
    return entails([base[i] for i in _bits(mask)], target)


def minimal_entailing_masks(base: BeliefBase, target: Formula) -> list[int]:
    """Masks of all minimal subsets of ``base`` entailing ``target``, in scan order."""
    _check_cap(base)
    m = len(base)
    full = (1 << m) - 1
    if not _entails_mask(base, full, target):
        return []
    hits: list[int] = []
    misses: list[int] = []
    for mask in _masks_by_size(m, False):
        if any(mask & h == h for h in hits) or any(mask & r == mask for r in misses):
            continue
        if _entails_mask(base, mask, target):
            hits.append(mask)
            continue
        grown = mask
        for i in range(m):
            bit = 1 << i
            if not grown & bit and not _entails_mask(base, grown | bit, target):
                grown |= bit
        misses.append(grown)
    return hits


def maximal_nonentailing_masks(base: BeliefBase, target: Formula) -> list[int]:
    """Masks of all maximal subsets of ``base`` not entailing ``target``.

    Ordered by decreasing cardinality, then lexicographic positions.  Empty
    when ``target`` is a tautology.
    """
    _check_cap(base)
    m = len(base)
    if _entails_mask(base, 0, target):
        return []
    full = (1 << m) - 1
    if not _entails_mask(base, full, target):
        return [full]
    found: list[int] = []
    hits: list[int] = []
    for mask in _masks_by_size(m, True):
        if any(mask & r == mask for r in found) or any(mask & h == h for h in hits):
            continue
        if not _entails_mask(base, mask, target):
            found.append(mask)
            continue
        shrunk = mask
        for i in _bits(mask):
            if _entails_mask(base, shrunk & ~(1 << i), target):
                shrunk &= ~(1 << i)
        hits.append(shrunk)
    return found


def entailment_sets(base: BeliefBase | Iterable[Formula], target: Formula) -> list[EntailmentSet]:
    """All minimal subsets of ``base`` that entail ``target``.

    Sorted by cardinality, then base position.  A tautological target yields
    exactly the empty set; an underivable one yields ``[]``.
    """
    base = as_base(base)
    return [
        EntailmentSet(tuple(base[i] for i in _bits(mask)), target)
        for mask in minimal_entailing_masks(base, target)
    ]


def is_entailment_set(x: Iterable[Formula], target: Formula, base: BeliefBase | Iterable[Formula]) -> bool:
    base = as_base(base)
    members = list(dict.fromkeys(x))
    if any(f not in base for f in members):
        return False
    if not entails(members, target):
        return False
    # monotone consequence: checking the maximal proper subsets suffices
    return not any(entails(members[:i] + members[i + 1:], target) for i in range(len(members)))


def relevant_sentences(base: BeliefBase | Iterable[Formula], target: Formula) -> BeliefBase:
    """Union of all ``target``-entailment sets, in base order."""
    base = as_base(base)
    mask = 0
    for h in minimal_entailing_masks(base, target):
        mask |= h
    return base.from_mask(mask)
