"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class PoleError(ZeroDivisionError):
    """A response function or distribution was evaluated on its pole."""


class InconsistentComponentsError(ValueError):
    """Four contour components do not satisfy g11 + g22 = g12 + g21."""
