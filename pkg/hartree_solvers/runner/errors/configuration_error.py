"""
Exception ConfigurationError.
"""


class ConfigurationError(ValueError):
    """
    Exception raises when a run configuration is malformed, has an unknown key or a value of the wrong type.
    """
