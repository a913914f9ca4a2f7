"""Propositional formulas: immutable trees, canonical form, printer and parser.

Grammar (loosest to tightest)::

    iff     := implies ('<->' implies)*        left-associative
    implies := or ('->' implies)?              right-associative
    or      := and ('|' and)*                  left-associative
    and     := unary ('&' unary)*              left-associative
    unary   := '!' unary | 'true' | 'false' | ATOM | '(' iff ')'

Atoms match ``[a-z][a-z0-9_]*``; ``true`` and ``false`` are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .errors import ParseError

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
KEYWORDS = frozenset({"true", "false"})


class Formula:
    __slots__ = ()

    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __str__(self) -> str:
        return to_text(self)

    def children(self) -> tuple[Formula, ...]:
        return ()


def _hashed(obj, *parts) -> None:
    object.__setattr__(obj, "_hash", hash((type(obj).__name__,) + parts))


@dataclass(frozen=True, slots=True, repr=False)
class Atom(Formula):
    name: str
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not ATOM_RE.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")
        _hashed(self, self.name)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Top(Formula):
    def __hash__(self) -> int:
        return 0x7F0

    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True, slots=True, repr=False)
class Bottom(Formula):
    def __hash__(self) -> int:
        return 0xB07

    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True, slots=True, repr=False)
class Not(Formula):
    child: Formula
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        _hashed(self, self.child)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Not({self.child!r})"

    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True, slots=True, repr=False)
class Binary(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        _hashed(self, self.left, self.right)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


class And(Binary):
    __slots__ = ()


class Or(Binary):
    __slots__ = ()


class Implies(Binary):
    __slots__ = ()


class Iff(Binary):
    __slots__ = ()


TOP = Top()
BOTTOM = Bottom()


def atom(name: str) -> Atom:
    return Atom(name)


def conjoin(formulas) -> Formula:
    """Left-nested conjunction; ``TOP`` for no operands."""
    result: Formula | None = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TOP if result is None else result


def disjoin(formulas) -> Formula:
    """Left-nested disjunction; ``BOTTOM`` for no operands."""
    result: Formula | None = None
    for f in formulas:
        result = f if result is None else Or(result, f)
    return BOTTOM if result is None else result


def canonicalize(f: Formula) -> Formula:
    """Collapse ``!!true``/``!!false``; every other shape is kept as written."""
    if isinstance(f, Not):
        c = canonicalize(f.child)
        if isinstance(c, Not) and isinstance(c.child, (Top, Bottom)):
            return c.child
        return f if c is f.child else Not(c)
    if isinstance(f, Binary):
        left, right = canonicalize(f.left), canonicalize(f.right)
        if left is f.left and right is f.right:
            return f
        return type(f)(left, right)
    return f


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def atoms_in_order(*formulas: Formula) -> tuple[str, ...]:
    """Atom names in order of first occurrence (left to right)."""
    seen: dict[str, None] = {}
    for f in formulas:
        for g in subformulas(f):
            if isinstance(g, Atom):
                seen.setdefault(g.name, None)
    return tuple(seen)


def atoms(*formulas: Formula) -> frozenset[str]:
    return frozenset(atoms_in_order(*formulas))


# -- printing -------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_RIGHT_ASSOC = {Implies}


def _prec(f: Formula) -> int:
    if isinstance(f, Not):
        return 5
    if isinstance(f, Binary):
        return _PREC[type(f)]
    return 6


def to_text(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        inner = to_text(f.child)
        return "!" + (f"({inner})" if _prec(f.child) < 5 else inner)
    op = type(f)
    p = _PREC[op]
    left, right = to_text(f.left), to_text(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < p or (lp == p and op in _RIGHT_ASSOC):
        left = f"({left})"
    if rp < p or (rp == p and op not in _RIGHT_ASSOC):
        right = f"({right})"
    return f"{left} {_SYMBOL[op]} {right}"


# -- parsing --------------------------------------------------------------

_TOKEN_RE = re.compile(r"<->|->|[!&|()]|[a-z][a-z0-9_]*")
_START = frozenset({"atom", "'true'", "'false'", "'!'", "'('"})
_BINOPS = frozenset({"'&'", "'|'", "'->'", "'<->'"})
_END = "end of input"


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i, _START | _BINOPS | {"')'"})
        tokens.append((m.group(), i))
        i = m.end()
    tokens.append(("", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def fail(self, expected) -> ParseError:
        tok, pos = self.tokens[self.i]
        what = f"unexpected {tok!r}" if tok else "unexpected end of input"
        return ParseError(what, pos, frozenset(expected))

    def iff(self) -> Formula:
        left = self.implies()
        while self.peek() == "<->":
            self.advance()
            left = Iff(left, self.implies())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek() == "|":
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek() == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.advance()
            return Not(self.unary())
        if tok == "(":
            self.advance()
            inner = self.iff()
            if self.peek() != ")":
                raise self.fail(_BINOPS | {"')'"})
            self.advance()
            return inner
        if tok == "true":
            self.advance()
            return TOP
        if tok == "false":
            self.advance()
            return BOTTOM
        if tok and tok[0].isalpha():
            self.advance()
            return Atom(tok)
        raise self.fail(_START)


def parse(text: str) -> Formula:
    """Parse ``text`` and return the canonical formula.

    Raises :class:`ParseError` carrying the offset of the offending token and
    the set of tokens that would have been accepted there.
    """
    p = _Parser(text)
    f = p.iff()
    if p.peek() != "":
        raise p.fail(_BINOPS | {_END})
    return canonicalize(f)


def as_formula(x: Formula | str) -> Formula:
    return parse(x) if isinstance(x, str) else canonicalize(x)
