"""Twin-basic (P,Q) numbers, shifted factorials and basic hypergeometric series."""

from ._accel import backend
from .core import (
    EvalConfig,
    PQBase,
    PQPair,
    flv_adapter,
    kk_adapter,
    multi_shifted_factorial,
    pq_binomial_coeff,
    pq_factorial,
    pq_number,
    pq_number_factored,
    pq_power,
    pq_rising,
    pq_shifted_factorial,
    pq_shifted_factorial_ratio_inf,
    q_number,
    q_shifted_factorial,
)
from .errors import (
    ArityError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    NumericalError,
    PoleError,
    PQError,
    ShapeError,
)
from .series import (
    SeriesResult,
    SeriesSpec,
    Termination,
    detect_termination,
    eval_pq_hypergeometric,
    eval_pq_hypergeometric_exponents,
    eval_q_hypergeometric,
    eval_via_burban_klimyk,
    limit_parameter_series,
    recurrence_terms,
    rho_omega_transform,
)

__version__ = "0.1.0"
