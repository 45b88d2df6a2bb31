"""
Exception ConvergenceError.
"""


class ConvergenceError(RuntimeError):
    """
    Exception raises when a required solve stops before reaching its gradient tolerance.
    """
