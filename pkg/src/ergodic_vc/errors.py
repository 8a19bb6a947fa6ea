"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """An operation would exceed a configured size or cost cap."""


class InsufficientDataError(ValueError):
    """A path does not contain enough observations for the request."""

    def __init__(self, message, available):
        super().__init__(f"{message} (available: {available})")
        self.available = available


class ParseError(ValueError):
    """Syntax error in the interval-union DSL."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
