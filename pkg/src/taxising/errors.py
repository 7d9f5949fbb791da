class ConfigurationError(ValueError):
    """Raised when simulation parameters or CLI inputs are invalid."""
