"""Configurable caps on the exponential parts of the library.

Limits live in a context variable so that threads and tasks can override
them independently::

    with using_limits(exhaustive_atoms=2):
        semantic_classes(2)
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from typing import Iterator


@dataclasses.dataclass(frozen=True)
class Limits:
    solver_atoms: int = 64       # atoms allowed in a single entailment query
    exhaustive_atoms: int = 3    # k for semantic-class sweeps
    enumeration: int = 16        # base size for entailment-set / remainder enumeration
    oracle_atoms: int = 6        # truth-table oracle
    brute_sets: int = 12         # brute-force subset oracle


_current: contextvars.ContextVar[Limits] = contextvars.ContextVar("obr_limits", default=Limits())


def current_limits() -> Limits:
    return _current.get()


@contextlib.contextmanager
def using_limits(limits: Limits | None = None, **overrides: int) -> Iterator[Limits]:
    base = limits if limits is not None else _current.get()
    new = dataclasses.replace(base, **overrides)
    token = _current.set(new)
    try:
        yield new
    finally:
        _current.reset(token)
