"""Exception types shared across the package."""


class InvalidVertexError(ValueError):
    """Coordinates with odd x + t are not sites of the even lattice."""


class OutOfWindowError(ValueError):
    pass


class InsufficientWindowError(ValueError):
    """The window cannot hold the light cone a query needs."""


class NoPathError(ValueError):
    """The origin does not percolate to the requested horizon."""


class NotOnPathError(ValueError):
    pass


class ConfigParseError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class NotInForestError(ValueError):
    pass


class UndecidableError(RuntimeError):
    """The answer depends on edges beyond the certified part of the window.

    Kept distinct from a negative answer: truncated evidence never counts
    as a certified outcome.
    """


class HorizonExhaustedError(UndecidableError):
    pass


class InsufficientDataError(RuntimeError):
    pass


class SpecError(ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
