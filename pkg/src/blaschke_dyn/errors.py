class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class NumericalError(ArithmeticError):
    """A numerical method failed; ``diagnostics`` carries whatever helps debugging."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConstructionError(NumericalError):
    """A constructed object failed its own cross-validation."""


class GrowthCapError(ArithmeticError):
    """Exact arithmetic exceeded the configured bit-size cap."""

    def __init__(self, message, index, bits):
        super().__init__(message)
        self.index = index
        self.bits = bits
