"""Exception types raised across the package."""


class ArgumentError(ValueError):
    """An argument violates a documented precondition."""


class DomainError(ValueError):
    """A time lies outside ``[0, T]``."""


class ConfigError(ValueError):
    """An experiment config is invalid; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class CheckFailure(AssertionError):
    """A built-in numerical guard did not hold."""
