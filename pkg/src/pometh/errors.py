class PomethError(Exception):
    """Base class for every error raised by this package."""


class ModelError(PomethError, ValueError):
    """A model or PFA failed to parse or validate."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}" + (f", column {column}" if column is not None else "") + f": {message}"
        super().__init__(message)


class InvalidPathError(PomethError, ValueError):
    pass


class ImpossibleObservationError(PomethError, ValueError):
    """The observation history has probability zero, so no belief exists."""


class EnumerationLimitError(PomethError, RuntimeError):
    pass


class FormulaSyntaxError(PomethError, ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        if position is not None:
            message = f"column {position + 1}: {message}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class NotCTLPKError(PomethError, ValueError):
    pass


class UnboundedFormulaError(PomethError, ValueError):
    """Raised when a formula needs an unbounded temporal operator evaluated numerically."""
