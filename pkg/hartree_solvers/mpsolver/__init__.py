from .errors import GeometryError, ConvergenceError
from .solve_config import SolveConfig
from .path_state import PathState
from .fibre import FibreDescent, descend_fibres, fibre_maximum
from .cerami_monitor import CSV_COLUMNS, CeramiDiagnostics, CeramiMonitor, cerami_monitor
from .polish import PolishResult, newton_polish
from .solve_report import RefinementReport, SolveReport, BothSignsReport
from .mountain_pass_solver import default_seed_field, find_endpoint, mountain_pass, solve_both_signs
from .nehari import NehariResult, nehari_level
from .refinement import refine_and_compare
