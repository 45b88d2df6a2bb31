"""
Enumerator with the dispatch modes of a run configuration.
"""

from enum import Enum


class Mode(Enum):
    SOLVE = 'solve'
    VERIFY = 'verify'
    SWEEP = 'sweep'
    HYPOTHESES = 'hypotheses'
    EXPORT = 'export'
