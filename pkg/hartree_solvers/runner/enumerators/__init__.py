from .mode import Mode
from .exit_code import ExitCode
