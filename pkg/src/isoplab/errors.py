"""Exception types shared across the library."""


class IsoplabError(Exception):
    """Base class for all library errors."""


class ParseError(IsoplabError, ValueError):
    """Malformed group spec, element text, set descriptor, or generator word."""


class BudgetExceeded(IsoplabError):
    """A ball or subset enumeration outgrew its configured cap."""

    def __init__(self, message, *, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class Unattainable(IsoplabError):
    """No radius has ball size strictly above the requested volume (finite group)."""

    def __init__(self, v, *, available=None):
        super().__init__(
            f"no radius r has ball size > {v}; the group has only {available} elements"
        )
        self.v = v
        self.available = available


class PreconditionViolated(IsoplabError):
    """An operation's stated precondition does not hold for the given inputs."""


class InternalContradiction(IsoplabError):
    """A structural guarantee failed.  Raising this means a verified construction
    has been falsified on a concrete input; it must never fire."""
