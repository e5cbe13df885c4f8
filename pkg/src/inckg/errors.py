"""Exception taxonomy shared across the engine, service, and CLI."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""


class InvalidInput(EngineError):
    """Malformed or contradictory caller input (empty ids, bad seeds, ...)."""


class NotFound(EngineError):
    """A referenced node, edge, increment, or policy does not exist."""


class ReferentialError(EngineError):
    """An edge names an endpoint that is not present in the graph."""

    def __init__(self, missing_id: str):
        super().__init__(f"unknown node: {missing_id}")
        self.missing_id = missing_id


class SnapshotFormatError(EngineError):
    """Snapshot file is unreadable or corrupt.

    ``byte_offset`` points at the offending byte when the underlying
    parser can report one, else None.
    """

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


class OntologySchemaError(EngineError):
    """An ontology document violates its own schema.

    Collects every problem found so a bad document is reported once,
    completely.
    """

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class PolicyError(EngineError):
    """A traversal policy is invalid or inconsistent with the ontology."""

    def __init__(self, problems: list[str] | str):
        if isinstance(problems, str):
            problems = [problems]
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class VersionConflict(EngineError):
    """A mutating request carried a stale graph version."""

    def __init__(self, expected: int, actual: int):
        super().__init__(
            f"stale graph version: request expected {expected}, workspace is at {actual}"
        )
        self.expected = expected
        self.actual = actual
