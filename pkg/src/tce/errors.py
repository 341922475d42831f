"""Exception types shared across the library."""


class DepthExhausted(Exception):
    """A continued fraction ran out of partial quotients."""


class InvalidIndex(ValueError):
    """A semiconvergent index (m, n) lies outside the admissible index set."""


class BelowThreshold(Exception):
    """A closed-form return time was requested below the admissible index threshold."""


class AmbiguousBoundary(Exception):
    """A point sits within guard tolerance of a cone or atom boundary."""


class NotInDomain(Exception):
    """The requested map or region query is undefined at this point."""


class BudgetExceeded(Exception):
    """An iteration cap was reached before the sought event occurred."""


class NoPeriodicPoint(Exception):
    """Periodicity detection failed within its iteration cap."""
