"""Terminated transfinite transmission lines: exact bounce-diagram responses
on finite truncations, hyperreal-sequence assembly over the truncation
index, and nonstandard classification of the resulting values."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    NotMaterializedError,
    OmegalineError,
    ParameterError,
    RegimeError,
)
from .geometry import (
    OrderingReport,
    OrdinalIndex,
    TerminatedLineSpec,
    distance_to_receiving_end,
    min_truncation_index,
    ordering_anomaly_window,
    sample_distance,
    transfinite_precedes,
    truncation_length,
    validate_sample,
)
from .hyper import (
    DEFAULT_EPS,
    DEFAULT_WINDOW,
    ClassificationVerdict,
    HyperrealSequence,
    VerdictKind,
    classify,
    tail_equal,
)
from .params import (
    DerivedQuantities,
    LineParams,
    ReflectionPair,
    Regime,
    derived_quantities,
    laplace_gamma_z0,
    reflection_coefficients,
)
from .solver import (
    Direction,
    ReflectionTerm,
    convergence_ratio,
    enumerate_terms,
    laplace_closed_form,
    laplace_partial_sum,
    voltage_response,
)
from .source import SourceSpec
from .transfinite import (
    RegimeReport,
    ResponseAssembly,
    TimeProfile,
    assemble_response,
    beyond_initial_line,
    distortionless_bound,
    open_line_steady_state,
    regime_report,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationVerdict",
    "ConfigError",
    "ConvergenceError",
    "DEFAULT_EPS",
    "DEFAULT_WINDOW",
    "DerivedQuantities",
    "DimensionError",
    "Direction",
    "DomainError",
    "HyperrealSequence",
    "LineParams",
    "NotMaterializedError",
    "OmegalineError",
    "OrderingReport",
    "OrdinalIndex",
    "ParameterError",
    "ReflectionPair",
    "ReflectionTerm",
    "Regime",
    "RegimeError",
    "RegimeReport",
    "ResponseAssembly",
    "SourceSpec",
    "TerminatedLineSpec",
    "TimeProfile",
    "VerdictKind",
    "assemble_response",
    "beyond_initial_line",
    "classify",
    "convergence_ratio",
    "derived_quantities",
    "distance_to_receiving_end",
    "distortionless_bound",
    "enumerate_terms",
    "laplace_closed_form",
    "laplace_gamma_z0",
    "laplace_partial_sum",
    "min_truncation_index",
    "open_line_steady_state",
    "ordering_anomaly_window",
    "reflection_coefficients",
    "regime_report",
    "sample_distance",
    "tail_equal",
    "transfinite_precedes",
    "truncation_length",
    "validate_sample",
    "voltage_response",
]
