"""
Enumerator with the possible outcomes of a sampled hypothesis check.
"""

from enum import Enum


class Verdict(Enum):
    PASS = 'pass'
    FAIL = 'fail'
    INCONCLUSIVE = 'inconclusive'
