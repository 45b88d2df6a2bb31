from .enumerators import Verdict
from .nonlinearity_spec import NonlinearitySpec
from .builtins import builtin, from_config
from .hypotheses import (
    HypothesisReport,
    check_growth,
    check_superquadratic,
    check_quasimonotone,
    check_small_s,
    check_joined_bound,
    check_ar,
    hypothesis_table,
)
