"""
Enumerator with the sign variants of the energy functional.
"""

from enum import Enum

import numpy as np


class Sign(Enum):
    PLAIN = 'plain'
    PLUS = 'plus'
    MINUS = 'minus'

    def truncate(self, values: np.ndarray) -> np.ndarray:
        """
        Nodal argument of the nonlinear terms: u, max(u, 0) or min(u, 0).
        """

        if self is Sign.PLUS:
            return np.maximum(values, 0.0)
        if self is Sign.MINUS:
            return np.minimum(values, 0.0)
        return np.asarray(values, dtype=float)

    def mask(self, values: np.ndarray) -> np.ndarray:
        if self is Sign.PLUS:
            return (values > 0).astype(float)
        if self is Sign.MINUS:
            return (values < 0).astype(float)
        return np.ones_like(values, dtype=float)

    @property
    def mirror(self) -> 'Sign':
        return {Sign.PLUS: Sign.MINUS, Sign.MINUS: Sign.PLUS}.get(self, self)
