"""Exception hierarchy shared by every entmeter module."""


class EntmeterError(Exception):
    """Base class for all library errors."""


class ArgumentError(EntmeterError, ValueError):
    """An argument violates an operation precondition."""


class CapacityError(EntmeterError):
    """A dense object would exceed the configured dimension cap."""


class NumericError(EntmeterError, ArithmeticError):
    """A numerical routine failed or produced an inconsistent result."""


class ValidationError(EntmeterError, ValueError):
    """A value object failed one of its invariants.

    ``invariant`` names the violated condition so callers (the CLI in
    particular) can report it verbatim.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


class ParseError(EntmeterError, ValueError):
    """Malformed state or density file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
