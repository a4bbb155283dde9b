"""Exception types shared across the toolkit."""

from __future__ import annotations


class TrajectoryError(ValueError):
    """Base class for trajectory-input problems."""


class InvalidTrajectoryError(TrajectoryError):
    """Input trajectory violates a precondition (non-finite coords, too few points)."""


class DegenerateTrajectoryError(TrajectoryError):
    """Trajectory has no usable XY extent (all waypoints coincide in the plane)."""


class TrajectoryParseError(ValueError):
    """Generated text violates the trajectory token grammar.

    ``position`` is the character offset at which parsing failed.
    """

    def __init__(self, position: int, message: str):
        super().__init__(f"offset {position}: {message}")
        self.position = position
        self.reason = message


class ArchiveFormatError(ValueError):
    """Scene archive file violates its schema; message carries file and line."""

    def __init__(self, source: str, line: int | None, message: str):
        location = source if line is None else f"{source}:{line}"
        super().__init__(f"{location}: {message}")
        self.source = source
        self.line = line
