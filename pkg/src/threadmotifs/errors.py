"""Exception types shared across the package."""

from __future__ import annotations


class ThreadMotifsError(Exception):
    """Base class for all errors raised by this package."""


class CorpusParseError(ThreadMotifsError):
    """A corpus line could not be parsed into a thread."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ThreadValidationError(ThreadMotifsError):
    """A parsed thread violates the thread-tree invariants."""

    def __init__(self, thread_id: str, message: str):
        super().__init__(f"thread {thread_id!r}: {message}")
        self.thread_id = thread_id


class UndefinedMetricError(ThreadMotifsError):
    """The requested metric has no defined value for the given input."""


class InvalidLifetimeError(ThreadMotifsError):
    """Lifetime bounds are inverted (end before start)."""


class InvalidPairError(ThreadMotifsError):
    """A dyad was requested for an invalid node pair (e.g. a node with itself)."""
