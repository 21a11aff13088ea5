"""Exception hierarchy shared by every frobkit module."""


class FrobkitError(Exception):
    """Base class for all errors raised by frobkit."""


class ContextMismatch(FrobkitError, ValueError):
    """Two operands live in different polynomial rings."""


class ExponentOverflow(FrobkitError, OverflowError):
    """An exponent or Frobenius level exceeds the configured cap."""


class ParseError(FrobkitError, ValueError):
    """Malformed polynomial text or session file.

    ``position`` is a 0-based character offset into ``text`` (polynomial
    parsing) and ``line`` a 1-based line number (session files).
    """

    def __init__(self, message, text=None, position=None, line=None):
        self.message = message
        self.text = text
        self.position = position
        self.line = line
        super().__init__(str(self))

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.position is not None:
            where.append(f"column {self.position + 1}")
        prefix = f"{', '.join(where)}: " if where else ""
        s = prefix + self.message
        if self.text is not None and self.position is not None:
            s += f"\n  {self.text}\n  {' ' * self.position}^"
        return s


class PreconditionError(FrobkitError, ValueError):
    """An operation was called on inputs violating its stated precondition."""


class IterationCapExceeded(FrobkitError, RuntimeError):
    """A fixed-point or chain computation did not stabilize within the cap."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
