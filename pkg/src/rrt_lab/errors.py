"""Error taxonomy shared across the package.

All three derive from ValueError so callers that do not care about the
distinction can catch one base class.
"""


class ConfigurationError(ValueError):
    """A spec/model/config object was constructed with invalid parameters."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class ResourceLimitError(ValueError):
    """A request exceeds a configured resource cap (e.g. the exact-PMF size cap)."""
