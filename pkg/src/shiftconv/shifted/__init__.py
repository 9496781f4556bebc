from .pipeline import (
    BudgetExceeded,
    PipelineConfig,
    PipelineTrace,
    StageResult,
    delta_expanded_sum,
    dual_cutoff,
    post_poisson_sum,
    run_pipeline,
)
from .sums import (
    PrecisionError,
    ShiftedSumSpec,
    averaged_sum,
    character_sum,
    character_sum_bruteforce,
    single_shift_sum,
)
from .decay import DecayReport, decay_scan, required_prec
from .divisor import INGHAM_CONSTANT, InghamReport, divisor_correlation, ingham_fit, triple_correlation
from .jintegral import REFERENCE_POINT, EnvelopeReport, JDecayReport, JParams, j_decay, j_envelope, j_integral
from .transform import DerivativeCheck, TransformSetup, transform_derivative_check, transform_value
