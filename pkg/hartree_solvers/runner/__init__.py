from .errors import ConfigurationError, ArtifactError
from .enumerators import Mode, ExitCode
from .run_config import RunConfig
from .field_file import MAGIC, header, save_field, load_field
from .artifact_store import ArtifactStore
from .verification import FAULTS, FULL, QUICK, PropertyResult, VerificationReport, run_verify
from .runner import (
    FIELD_NAMES,
    REPORT_NAMES,
    DIAGNOSTICS_NAMES,
    SOLVE_ARTIFACTS,
    SolveOutcome,
    exit_code_for,
    run_solve,
    run_hypotheses,
    export_plot_data,
    run_sweep,
)
