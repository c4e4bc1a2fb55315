"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised for malformed parameters, bounds or geometries."""


class DomainError(InvalidInputError):
    """Raised when a model formula is evaluated outside its domain."""


class ValidityError(InvalidInputError):
    """Raised when an input lies outside a model's range of validity."""
