class ConfigurationError(ValueError):
    """A scenario or parameter choice was rejected before any round executed."""
