"""Shared exception types."""


class DomainError(ValueError):
    """Input outside an operation's stated domain."""


class CapacityError(RuntimeError):
    """Request exceeds a configured size or exactness guard."""
