"""
Exception ParameterError.
"""


class ParameterError(ValueError):
    """
    Exception raises when a scalar parameter is outside its admissible range (mass, height, exponent, margin).
    """
