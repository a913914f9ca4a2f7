"""Exception hierarchy shared by every obr module."""

from __future__ import annotations


class ObrError(Exception):
    """Base class. ``step`` is set when the error surfaced inside an iterated revision."""

    step: int | None = None


class ParseError(ObrError, ValueError):
    def __init__(self, message: str, position: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.position = position
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {position}{detail}")


class LimitExceeded(ObrError):
    pass


class RankingError(ObrError, ValueError):
    """A ranking violates the contiguous ``[1, n]`` range condition."""


class InconsistentBase(ObrError, ValueError):
    pass


class InconsistentEvidence(ObrError, ValueError):
    pass


class EmptySet(ObrError, ValueError):
    pass


class UndeterminedSentence(ObrError, ValueError):
    pass


class AlreadyBelieved(ObrError, ValueError):
    pass


class NoGoalDerivation(ObrError, ValueError):
    pass


class EmptyCandidates(ObrError, ValueError):
    pass


class PresuppositionFailure(ObrError, ValueError):
    pass


class UnknownProperty(ObrError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown property"
