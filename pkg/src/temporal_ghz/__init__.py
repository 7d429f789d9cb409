"""Classical bounds and quantum witnesses for temporal GHZ tests on
entangled histories."""

from .classical import (
    BoundsConfig,
    ObjectiveValue,
    OptResult,
    Verdict,
    classify,
    closed_form_continuous_min,
    closed_form_qubit_min,
    evaluate,
    gradient,
    minimize,
    sweep,
)
from .oracle import brute_force_min
from .phases import PhaseExponent, phase_mul, phase_to_complex, weighted_phase_sum
from .quantum import (
    generalized_pauli,
    ghz_history_state,
    history_amplitude,
    odd_dimension_nogo_check,
    temporal_witness_family,
    verify_ghz_paradox,
    witness_expectation,
)
from .timelines import (
    Distribution,
    Timeline,
    appendix_b_distribution,
    appendix_c_distribution,
    enumerate_timelines,
    validate_timeline,
)

__version__ = "0.1.0"
