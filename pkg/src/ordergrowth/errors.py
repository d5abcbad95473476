"""Exception types shared across the package."""


class OrderGrowthError(Exception):
    pass


class BudgetExceeded(OrderGrowthError):
    """A search or power computation ran past its configured cap."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class DomainError(OrderGrowthError, ValueError):
    """Argument outside the domain where a formula is defined."""


class DimensionMismatch(OrderGrowthError, ValueError):
    pass


class UnsupportedFamily(OrderGrowthError, ValueError):
    pass


class OracleError(OrderGrowthError):
    """Raised by an order oracle that cannot answer."""


class Uncertain(OracleError):
    """Positivity test landed inside the tolerance band; the sign is not certified."""
