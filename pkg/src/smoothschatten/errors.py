"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class ParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


class NumericError(ArithmeticError):
    """A numerical routine failed (non-convergence, non-PSD input, ...)."""
