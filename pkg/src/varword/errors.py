"""Exception types shared across the package."""

from __future__ import annotations


class VarwordError(Exception):
    """Base class for all package errors."""


class CapExceeded(VarwordError):
    """An enumeration would produce more items than the caller allowed.

    ``required`` is the exact closed-form count that would have been produced.
    """

    def __init__(self, required: int, cap: int, what: str = "items"):
        self.required = required
        self.cap = cap
        super().__init__(f"{what}: {required} required, cap is {cap}")


class InsufficientPrefix(VarwordError):
    """A sequence operation needed more materialized items than available."""


class BudgetExhausted(VarwordError):
    """A search ran out of budget before reaching a verdict.

    Never a claim of nonexistence.
    """


class Inconclusive(BudgetExhausted):
    """A refinement loop exhausted its budget before any part certified."""


class WitnessInconsistent(VarwordError):
    """A fusion step witness violates one of the reindexing hypotheses."""


class IncompleteTable(VarwordError):
    """A transition table does not cover a required (state, letter) pair."""


class UnknownName(VarwordError):
    """An unrecognized builtin coloring name."""


class ParseError(VarwordError):
    """A document failed to parse; carries the offending line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
