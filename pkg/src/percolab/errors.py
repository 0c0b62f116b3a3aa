"""Exception types shared across the package.

Everything a caller can fix by changing arguments derives from ValueError;
budget overruns derive from RuntimeError. The CLI maps the first family to
exit code 2 and the second to exit code 3.
"""


class ParameterError(ValueError):
    """An argument is missing, out of range, or inconsistent with another."""


class BoundaryError(ParameterError):
    """Parameters sit exactly on a regime boundary where the requested formula is undefined."""


class DomainError(ValueError):
    """A formula is evaluated outside its domain (e.g. an iterated log that is not positive)."""


class UnsupportedError(ParameterError):
    """The inputs fall outside the sizes or regimes an operation supports."""


class BudgetError(RuntimeError):
    """The requested computation would exceed its resource budget."""
