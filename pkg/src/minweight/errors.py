"""Exception types shared across modules."""


class ConfigurationError(ValueError):
    """An experiment or CLI configuration violates a precondition."""


class CapacityError(RuntimeError):
    """A computation exceeded its enumeration or truncation budget."""


class InfeasibleError(ValueError):
    """No path satisfies the requested hop budget."""
