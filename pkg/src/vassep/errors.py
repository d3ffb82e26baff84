"""Exception types shared across the package."""


class VassepError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(VassepError, ValueError):
    """An operation received a word or object of the wrong ambient dimension."""


class BudgetExceeded(VassepError, RuntimeError):
    """A configured resource budget (states, steps, cycles, nodes) ran out.

    This is distinct from a negative answer: the caller learns nothing about
    the language, only that the computation was cut short.
    """

    def __init__(self, what: str, limit: int):
        super().__init__(f"{what} budget of {limit} exhausted")
        self.what = what
        self.limit = limit


class InputError(VassepError, ValueError):
    """Malformed input document or inconsistent arguments."""
