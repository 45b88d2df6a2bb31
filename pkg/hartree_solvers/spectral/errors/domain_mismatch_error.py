"""
Exception DomainMismatchError.
"""


class DomainMismatchError(ValueError):
    """
    Exception raises when fields that must share a domain were built on different grids.
    """
