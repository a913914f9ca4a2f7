"""Reading and writing ranked bases.

Text format, one fact per line::

    # comment
    1 : p
    2 : p -> q

JSON form is a list of ``{"rank": int, "formula": str}`` objects.
"""

from __future__ import annotations

import os
from collections.abc import Iterable
from typing import Any

from .accessibility import RankedBase
from .errors import ParseError, RankingError
from .syntax import Formula, parse


def loads(text: str) -> RankedBase:
    pairs: list[tuple[int, Formula]] = []
    offset = 0
    for lineno, raw in enumerate(text.splitlines(keepends=True), start=1):
        line = raw.split("#", 1)[0]
        start = offset
        offset += len(raw)
        if not line.strip():
            continue
        rank_text, sep, formula_text = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected '<rank> : <formula>'", start, frozenset({"':'"}))
        try:
            rank = int(rank_text.strip())
        except ValueError:
            raise ParseError(f"line {lineno}: rank {rank_text.strip()!r} is not an integer", start) from None
        try:
            f = parse(formula_text)
        except ParseError as exc:
            pos = start + len(rank_text) + 1 + exc.position
            raise ParseError(f"line {lineno}: {exc.message}", pos, exc.expected) from None
        pairs.append((rank, f))
    return RankedBase.from_pairs(pairs)


def load(path: str | os.PathLike[str]) -> RankedBase:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(rb: RankedBase) -> str:
    return "".join(f"{r} : {f}\n" for r, f in rb.pairs())


def dump(rb: RankedBase, path: str | os.PathLike[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(rb))


def to_json(rb: RankedBase) -> list[dict[str, Any]]:
    return [{"rank": r, "formula": str(f)} for r, f in rb.pairs()]


def from_json(items: Iterable[dict[str, Any]]) -> RankedBase:
    try:
        return RankedBase.from_pairs((item["rank"], parse(item["formula"])) for item in items)
    except (KeyError, TypeError) as exc:
        raise RankingError(f"malformed base entry: {exc}") from None
