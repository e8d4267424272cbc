"""Exception types shared across the package."""


class DpxError(Exception):
    """Base class for all errors raised by dpx."""


class PoleError(DpxError, ZeroDivisionError):
    """A rational function was evaluated at a zero of its denominator."""


class NotDivisibleError(DpxError, ValueError):
    """A division that must be exact left a remainder."""


class RingMismatchError(DpxError, ValueError):
    """Operands live in different polynomial rings."""


class CongruenceError(DpxError, ValueError):
    """A parametrized family violates a (t-1)-divisibility requirement."""


class ParseError(DpxError, ValueError):
    """Malformed input text.  Carries 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ReductionError(DpxError, RuntimeError):
    """Normal-form rewriting failed to terminate within its step budget."""
