"""Exception types raised across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid economy description. ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        self.detail = message
        super().__init__(f"{path}: {message}" if path else message)

    def at(self, prefix: str) -> "ConfigError":
        if not self.path:
            path = prefix
        elif self.path.startswith("["):
            path = prefix + self.path
        else:
            path = f"{prefix}.{self.path}"
        return type(self)(self.detail, path)


class NonPositiveEndowment(ConfigError):
    pass


class InvalidUtilityParam(ConfigError):
    pass


class UnknownUtilityTag(ConfigError):
    pass


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class MultiValuedAgentA(ValueError):
    """Agent A's demand is not a singleton at the requested price."""


class InconsistentCase(ArithmeticError):
    """No unique branch of a piecewise demand formula applies."""


class UnsupportedEconomy(ValueError):
    """The economy is outside the family a closed-form routine handles."""
