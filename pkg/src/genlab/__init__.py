"""Cesaro and harmonic (logarithmic) empirical measures of symbolic
sequences: block sequences and arithmetic functions as points of the
full shift, cylinder measures with a truncated weak-star metric,
limit-set estimation, hull-inclusion checks, and correlation scans for
the Mobius and Liouville functions under both averaging schemes.
"""

__version__ = "0.1.0"

from .arith import (
    CapacityError,
    KINDS,
    SieveSegment,
    arithmetic_sequence,
    primes_up_to,
    sieve_capacity,
    sieve_range,
    summatory,
)
from .averaging import (
    DensityEstimate,
    FrequencyAccumulator,
    counting_measure,
    density_estimate,
    empirical,
    harmonic_float,
    harmonic_fraction,
    log_empirical,
    sbp_residual,
    sbp_residual_sweep,
)
from .chowla import (
    CorrelationReport,
    CorrelationSpec,
    Prediction,
    chowla_scan,
    correlation,
    correlation_numerator,
    enumerate_specs,
    mirsky_prediction,
)
from .grids import (
    default_density_grid,
    default_limitset_grid,
    geometric_grid,
    merge_grids,
    parse_grid,
    power_grid,
)
from .limitsets import (
    FrequencyTrace,
    HullInclusionReport,
    LimitSetEstimate,
    Representative,
    estimate_limit_set,
    frequency_trace,
    hull_inclusion_report,
    shift_invariance_defect,
)
from .measures import (
    CylinderMeasure,
    HullDistance,
    MetricBasis,
    basis_vector,
    basis_words,
    combine,
    dirac,
    hull_distance,
    marginal_drop_first,
    max_basis_index,
    measure_from_json,
    measure_to_json,
    metric,
    restrict,
    tv_distance,
)
from .symbolic import (
    Alphabet,
    ArraySequence,
    BINARY,
    ConstantSequence,
    EXAMPLE_NAMES,
    FunctionSequence,
    PeriodicSequence,
    PowerBlockSequence,
    SIGNS,
    SymbolicSequence,
    TERNARY,
    example_sequence,
    parse_word,
    window,
    word_to_str,
)
from .verify import CheckResult, verify_example

__all__ = [name for name in dir() if not name.startswith("_")]
