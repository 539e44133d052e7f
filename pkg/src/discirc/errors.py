"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter or input lies outside the domain of the operation."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge or exceeded its work cap."""


class NoSolutionError(NumericError):
    """An equation system has no solution for the requested targets."""
