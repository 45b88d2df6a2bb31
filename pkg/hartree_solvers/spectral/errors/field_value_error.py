"""
Exception FieldValueError.
"""


class FieldValueError(ValueError):
    """
    Exception raises when field data has the wrong size for its domain or holds non-finite values.
    """
