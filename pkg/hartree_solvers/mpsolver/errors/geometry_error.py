"""
Exception GeometryError.
"""


class GeometryError(RuntimeError):
    """
    Exception raises when the mountain-pass geometry cannot be established: no local-minimum certificate at 0,
    or no ray crossing into negative energy within t_max.
    """
