"""Exception types shared across the package."""


class KaonBellError(ValueError):
    """Base class for all errors raised by this package."""


class ConfigurationError(KaonBellError):
    """Invalid preset name, config key or physical-constant combination."""


class DomainError(KaonBellError):
    """Input outside the operation's domain (negative time, non-projector, ...)."""
