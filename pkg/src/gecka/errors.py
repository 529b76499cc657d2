"""Exception hierarchy shared across the engine.

Everything raised on purpose derives from :class:`GeckaError`, so callers
(CLI, HTTP layer) can map domain failures without catching ``Exception``.
"""

from __future__ import annotations


class GeckaError(Exception):
    """Base class for all engine errors."""


class ValidationError(GeckaError):
    """A value violates a documented invariant (empty name, bad range, ...)."""


class UnknownReferenceError(GeckaError):
    """An id or name does not resolve against the knowledge base or scene."""


class DuplicateError(GeckaError):
    """An id, (name, parent) pair, or singleton entity already exists."""


class OutOfBoundsError(ValidationError):
    """A coordinate falls outside the scene grid."""


class PlacementError(ValidationError):
    """An entity was placed on a tile that cannot host it."""


class SessionFormatError(GeckaError):
    """A session document failed to parse or validate.

    ``line`` carries the 1-based source line when known, so tooling can
    point at the offending spot.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidSceneError(GeckaError):
    """A scene failed hard validation and cannot be played."""


class GameOverError(GeckaError):
    """A command was issued to a game that already finished."""


class CommandError(GeckaError):
    """A player command referenced something out of reach or unknown."""
