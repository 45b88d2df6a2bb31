from .geometry_error import GeometryError
from .convergence_error import ConvergenceError
