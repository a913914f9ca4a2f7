"""Consequence operation over finite propositional bases.

``entails`` converts premises and the negated goal to clauses and runs a
small DPLL procedure (unit propagation, pure literals, splitting).  Results
are memoised on the premise set, which is invisible to callers since every
input is immutable.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .errors import LimitExceeded
from .limits import current_limits
from .syntax import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Binary,
    Bottom,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    as_formula,
    atoms,
    atoms_in_order,
    conjoin,
    disjoin,
)

DEFAULT_ATOM_NAMES = ("p", "q", "r", "s", "t", "u", "v", "w")


class BeliefBase(Sequence[Formula]):
    """Ordered, duplicate-free, immutable collection of canonical formulas."""

    __slots__ = ("_items", "_index", "_hash")

    def __init__(self, sentences: Iterable[Formula | str] = ()):
        index: dict[Formula, int] = {}
        for s in sentences:
            f = as_formula(s)
            if f not in index:
                index[f] = len(index)
        self._index = index
        self._items = tuple(index)
        self._hash = hash(self._items)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BeliefBase(self._items[i])
        return self._items[i]

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self._items)

    def __contains__(self, f: object) -> bool:
        return f in self._index

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BeliefBase):
            return self._items == other._items
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "BeliefBase([" + ", ".join(repr(str(f)) for f in self._items) + "])"

    def __str__(self) -> str:
        return "{" + ", ".join(str(f) for f in self._items) + "}"

    def index(self, f: Formula, *args) -> int:
        try:
            return self._index[f]
        except KeyError:
            raise ValueError(f"{f} is not in the base") from None

    def as_set(self) -> frozenset[Formula]:
        return frozenset(self._items)

    def add(self, f: Formula | str) -> BeliefBase:
        return BeliefBase((*self._items, as_formula(f)))

    def keep(self, keep: Iterable[Formula]) -> BeliefBase:
        """Sub-base with the given members, in this base's order."""
        wanted = set(keep)
        return BeliefBase(f for f in self._items if f in wanted)

    def without(self, drop: Iterable[Formula]) -> BeliefBase:
        dropped = set(drop)
        return BeliefBase(f for f in self._items if f not in dropped)

    def from_mask(self, mask: int) -> BeliefBase:
        return BeliefBase(f for i, f in enumerate(self._items) if mask >> i & 1)

    def mask_of(self, members: Iterable[Formula]) -> int:
        m = 0
        for f in members:
            m |= 1 << self._index[f]
        return m

    def atoms(self) -> frozenset[str]:
        return atoms(*self._items)


def as_base(x: BeliefBase | Iterable[Formula | str]) -> BeliefBase:
    return x if isinstance(x, BeliefBase) else BeliefBase(x)


# -- clause conversion ----------------------------------------------------

_vars: dict[object, int] = {}


def _var(key: object) -> int:
    v = _vars.get(key)
    if v is None:
        v = _vars.setdefault(key, len(_vars) + 1)
    return v


class _TooBig(Exception):
    pass


_PRODUCT_CAP = 256


def _product(a: list[frozenset[int]], b: list[frozenset[int]]) -> list[frozenset[int]]:
    if len(a) * len(b) > _PRODUCT_CAP:
        raise _TooBig
    out = []
    for x in a:
        for y in b:
            c = x | y
            if not any(-lit in c for lit in c):
                out.append(c)
    return out


def _cnf(f: Formula, positive: bool) -> list[frozenset[int]]:
    if isinstance(f, Atom):
        v = _var(f.name)
        return [frozenset((v if positive else -v,))]
    if isinstance(f, Top):
        return [] if positive else [frozenset()]
    if isinstance(f, Bottom):
        return [frozenset()] if positive else []
    if isinstance(f, Not):
        return _cnf(f.child, not positive)
    l, r = f.left, f.right
    if isinstance(f, And):
        if positive:
            return _cnf(l, True) + _cnf(r, True)
        return _product(_cnf(l, False), _cnf(r, False))
    if isinstance(f, Or):
        if positive:
            return _product(_cnf(l, True), _cnf(r, True))
        return _cnf(l, False) + _cnf(r, False)
    if isinstance(f, Implies):
        if positive:
            return _product(_cnf(l, False), _cnf(r, True))
        return _cnf(l, True) + _cnf(r, False)
    if isinstance(f, Iff):
        if positive:
            return _product(_cnf(l, False), _cnf(r, True)) + _product(_cnf(l, True), _cnf(r, False))
        return _product(_cnf(l, True), _cnf(r, True)) + _product(_cnf(l, False), _cnf(r, False))
    raise TypeError(f"not a formula: {f!r}")


def _tseitin(f: Formula, out: list[frozenset[int]]) -> int:
    """Literal equivalent to ``f``; definitional clauses are appended to ``out``."""
    if isinstance(f, Atom):
        return _var(f.name)
    if isinstance(f, Not):
        return -_tseitin(f.child, out)
    x = _var(("aux", f))
    if isinstance(f, Top):
        out.append(frozenset((x,)))
        return x
    if isinstance(f, Bottom):
        out.append(frozenset((-x,)))
        return x
    a, b = _tseitin(f.left, out), _tseitin(f.right, out)
    if isinstance(f, And):
        out += [frozenset((-x, a)), frozenset((-x, b)), frozenset((x, -a, -b))]
    elif isinstance(f, Or):
        out += [frozenset((-x, a, b)), frozenset((x, -a)), frozenset((x, -b))]
    elif isinstance(f, Implies):
        out += [frozenset((-x, -a, b)), frozenset((x, a)), frozenset((x, -b))]
    else:
        out += [frozenset((-x, -a, b)), frozenset((-x, a, -b)),
                frozenset((x, a, b)), frozenset((x, -a, -b))]
    return x


@lru_cache(maxsize=1 << 16)
def clauses(f: Formula, positive: bool = True) -> tuple[frozenset[int], ...]:
    """Clause set satisfiable exactly by valuations making ``f`` (or ``!f``) true."""
    try:
        cs = _cnf(f, positive)
    except _TooBig:
        cs = []
        lit = _tseitin(f, cs)
        cs.append(frozenset((lit if positive else -lit,)))
    return tuple(set(cs))


# -- DPLL -----------------------------------------------------------------

def _assign(cs: list[frozenset[int]], lit: int) -> list[frozenset[int]]:
    neg = -lit
    return [c - {neg} if neg in c else c for c in cs if lit not in c]


def _dpll(cs: list[frozenset[int]]) -> bool:
    while True:
        if not cs:
            return True
        unit = None
        for c in cs:
            n = len(c)
            if n == 0:
                return False
            if n == 1 and unit is None:
                unit = next(iter(c))
        if unit is not None:
            cs = _assign(cs, unit)
            continue
        counts: dict[int, int] = {}
        for c in cs:
            for lit in c:
                counts[lit] = counts.get(lit, 0) + 1
        pure = next((lit for lit in counts if -lit not in counts), None)
        if pure is not None:
            cs = _assign(cs, pure)
            continue
        lit = max(counts, key=lambda l: (counts[l] + counts.get(-l, 0), l))
        return _dpll(_assign(cs, lit)) or _dpll(_assign(cs, -lit))


def satisfiable(formulas: Iterable[Formula]) -> bool:
    cs: set[frozenset[int]] = set()
    for f in formulas:
        cs.update(clauses(f))
    return _dpll(list(cs))


@lru_cache(maxsize=1 << 16)
def _formula_atoms(f: Formula) -> frozenset[str]:
    return atoms(f)


@lru_cache(maxsize=1 << 16)
def _atom_count(premises: frozenset[Formula], goal: Formula) -> int:
    return len(_formula_atoms(goal).union(*map(_formula_atoms, premises)))


@lru_cache(maxsize=1 << 18)
def _entails(premises: frozenset[Formula], goal: Formula) -> bool:
    cs: set[frozenset[int]] = set(clauses(goal, False))
    for f in premises:
        cs.update(clauses(f))
    return not _dpll(list(cs))


def entails(base: Iterable[Formula], goal: Formula) -> bool:
    """True iff every model of ``base`` satisfies ``goal``."""
    premises = base.as_set() if isinstance(base, BeliefBase) else frozenset(base)
    cap = current_limits().solver_atoms
    if _atom_count(premises, goal) > cap:
        raise LimitExceeded(f"entailment query exceeds {cap} atoms")
    return _entails(premises, goal)


def is_tautology(f: Formula) -> bool:
    return entails((), f)


def is_consistent(base: Iterable[Formula]) -> bool:
    return not entails(base, BOTTOM)


def equivalent(base1: Iterable[Formula], base2: Iterable[Formula]) -> bool:
    """Same model set over the union of both bases' atoms."""
    b1, b2 = list(base1), list(base2)
    return all(entails(b1, f) for f in b2) and all(entails(b2, f) for f in b1)


# -- valuations and semantic classes --------------------------------------

@dataclass(frozen=True)
class Valuation:
    universe: tuple[str, ...]
    assignment: Mapping[str, bool]

    def __post_init__(self) -> None:
        if set(self.assignment) != set(self.universe):
            raise ValueError("valuation must be total on its universe")

    def __call__(self, f: Formula) -> bool:
        return evaluate(f, self.assignment)


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    if isinstance(f, Atom):
        return assignment[f.name]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    a = evaluate(f.left, assignment)
    if isinstance(f, And):
        return a and evaluate(f.right, assignment)
    if isinstance(f, Or):
        return a or evaluate(f.right, assignment)
    if isinstance(f, Implies):
        return (not a) or evaluate(f.right, assignment)
    return a == evaluate(f.right, assignment)


def valuations(universe: Sequence[str]) -> Iterator[Valuation]:
    """All valuations; index ``i`` makes the first atom the most significant bit of ``i``."""
    universe = tuple(universe)
    for bits in itertools.product((False, True), repeat=len(universe)):
        yield Valuation(universe, dict(zip(universe, bits)))


def truth_table(f: Formula, universe: Sequence[str]) -> int:
    """Bit ``i`` is set iff valuation ``i`` satisfies ``f``."""
    missing = atoms(f) - set(universe)
    if missing:
        raise ValueError(f"atoms {sorted(missing)} are outside the universe")
    table = 0
    for i, v in enumerate(valuations(universe)):
        if v(f):
            table |= 1 << i
    return table


@dataclass(frozen=True)
class SemanticClass:
    truth_table: int
    representative: Formula
    universe: tuple[str, ...]

    def __str__(self) -> str:
        return str(self.representative)


def declare_universe(k: int, *formulas: Formula) -> tuple[str, ...]:
    """A ``k``-atom universe covering the atoms of ``formulas``.

    Used atoms come first (sorted); the rest is padded from ``p, q, r, ...``.
    """
    used = sorted(atoms(*formulas))
    if len(used) > k:
        raise LimitExceeded(f"{len(used)} atoms do not fit a universe of {k}")
    pad = [a for a in DEFAULT_ATOM_NAMES if a not in used]
    extra = itertools.chain(pad, (f"x{i}" for i in itertools.count()))
    out = list(used)
    while len(out) < k:
        name = next(extra)
        if name not in out:
            out.append(name)
    return tuple(out)


def _minterm(universe: tuple[str, ...], index: int) -> Formula:
    k = len(universe)
    lits = []
    for j, name in enumerate(universe):
        a = Atom(name)
        lits.append(a if index >> (k - 1 - j) & 1 else Not(a))
    return conjoin(lits)


def dnf_representative(table: int, universe: Sequence[str]) -> Formula:
    universe = tuple(universe)
    terms = [_minterm(universe, i) for i in range(1 << len(universe)) if table >> i & 1]
    return disjoin(terms)


@lru_cache(maxsize=16)
def _classes(universe: tuple[str, ...]) -> tuple[SemanticClass, ...]:
    n = 1 << (1 << len(universe))
    return tuple(SemanticClass(t, dnf_representative(t, universe), universe) for t in range(n))


def semantic_classes(k: int, universe: Sequence[str] | None = None) -> list[SemanticClass]:
    """All ``2**(2**k)`` equivalence classes of formulas over ``k`` atoms.

    Classes are ordered by truth table; representatives are full DNFs,
    ``false`` for the empty class.
    """
    cap = current_limits().exhaustive_atoms
    if k > cap:
        raise LimitExceeded(f"k={k} exceeds the exhaustive cap {cap}")
    if universe is None:
        universe = declare_universe(k)
    universe = tuple(universe)
    if len(universe) != k:
        raise ValueError("universe size must equal k")
    return list(_classes(universe))


def class_of(f: Formula, universe: Sequence[str]) -> SemanticClass:
    t = truth_table(f, universe)
    return SemanticClass(t, dnf_representative(t, tuple(universe)), tuple(universe))


__all__ = [
    "BeliefBase", "as_base", "entails", "is_tautology", "is_consistent", "equivalent",
    "satisfiable", "clauses", "Valuation", "evaluate", "valuations", "truth_table",
    "SemanticClass", "semantic_classes", "declare_universe", "dnf_representative",
    "class_of", "atoms_in_order", "TOP", "BOTTOM", "Binary",
]
