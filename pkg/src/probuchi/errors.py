"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI:
  ParseError / ValidationError -> 2
  PreconditionError (and subclasses) -> 3
"""

from __future__ import annotations


class AutomatonError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AutomatonError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(AutomatonError):
    """Structurally invalid automaton (undeclared names, bad distributions, ...)."""


class PreconditionError(AutomatonError):
    """An operation was applied to an automaton outside its domain."""


class EmptyAutomaton(PreconditionError):
    """Trimming a classical automaton left no useful state."""


class InvalidThreshold(PreconditionError):
    """Threshold outside the open unit interval."""


class KindMismatch(PreconditionError):
    """Operation applied to the wrong acceptance kind."""


class AmbiguityTooHigh(PreconditionError):
    """Input violates an ambiguity-class precondition; carries the offending pattern."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        if witness is not None:
            message = f"{message} (witness: {witness})"
        super().__init__(message)


class NotCountablyAmbiguous(AmbiguityTooHigh):
    """An EDA_F pattern is present."""


class NotFinitelyAmbiguous(AmbiguityTooHigh):
    """An IDA pattern is present."""


class NotExpAmbiguous(AmbiguityTooHigh):
    """An IDA_F pattern is present."""


class NotFlat(AmbiguityTooHigh):
    """An EDA pattern is present."""


class NotLimitDeterministic(PreconditionError):
    """A fork is reachable from an accepting component."""
