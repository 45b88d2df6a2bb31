"""
Enumerator with the process exit codes of the command line.
"""

from enum import IntEnum


class ExitCode(IntEnum):
    SUCCESS = 0
    PROPERTY_FAILURE = 1
    VALIDATION = 2
    GEOMETRY = 3
    NON_CONVERGENCE = 4
    IO = 5

    @property
    def status(self) -> str:
        return self.name.lower()
