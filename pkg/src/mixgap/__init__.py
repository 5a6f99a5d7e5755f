"""Spectral mixing parameters of finite ergodic Markov chains.

Exact oracles for the pseudo-spectral and dilated pseudo-spectral gaps of a
known transition matrix, and single-trajectory estimators of those gaps with
fully empirical confidence intervals.
"""

from .chain import (
    DilatedMatrix,
    StochasticMatrix,
    Trajectory,
    additive_reversiblization,
    build_L,
    generic_dilation,
    is_ergodic,
    is_irreducible,
    is_reversible,
    matrix_power,
    mixing_time,
    reversible_dilation,
    simulate,
    stationary_distribution,
    time_reversal,
)
from .confidence import ConfidenceReport, confidence_interval, gamma_diagnostic
from .eigensolve import (
    LanczosConfig,
    deflated_spectral_radius,
    dense_symmetric_spectrum,
    lanczos_second_eigenvalue,
)
from .errors import (
    DegenerateEmpiricalGapError,
    MixgapError,
    NoConvergenceError,
    NonconvergentGapError,
    NotMixedByCapError,
    NotSymmetricError,
    NoTriggerError,
    NoUsableKError,
    ReducibleChainError,
    TrajectoryTooShortError,
    UnvisitedStateError,
)
from .estimators import (
    EstimateReport,
    gamma_dps_hat,
    gamma_ps_additive,
    gamma_ps_adaptive_multiplicative,
    gamma_ps_amplified,
    gamma_ps_prefix_hat,
    pi_star_hat,
)
from .oracle import (
    SpectralReport,
    absolute_spectral_gap,
    dilated_pseudo_spectral_gap,
    full_spectral_report,
    gamma_dagger,
    gamma_ddagger,
    mixing_time_sandwich,
    pseudo_spectral_gap,
    spectral_gaps,
    verify_lemma_properties,
)
from .tallies import SkippedTallies, SmoothedEstimates, smoothed_estimates, tally, unsmoothed_L_hat

__version__ = "0.1.0"

__all__ = [
    "ConfidenceReport",
    "DegenerateEmpiricalGapError",
    "DilatedMatrix",
    "EstimateReport",
    "LanczosConfig",
    "MixgapError",
    "NoConvergenceError",
    "NonconvergentGapError",
    "NotMixedByCapError",
    "NotSymmetricError",
    "NoTriggerError",
    "NoUsableKError",
    "ReducibleChainError",
    "SkippedTallies",
    "SmoothedEstimates",
    "SpectralReport",
    "StochasticMatrix",
    "Trajectory",
    "TrajectoryTooShortError",
    "UnvisitedStateError",
    "absolute_spectral_gap",
    "additive_reversiblization",
    "build_L",
    "confidence_interval",
    "deflated_spectral_radius",
    "dense_symmetric_spectrum",
    "dilated_pseudo_spectral_gap",
    "full_spectral_report",
    "gamma_dagger",
    "gamma_ddagger",
    "gamma_diagnostic",
    "gamma_dps_hat",
    "gamma_ps_additive",
    "gamma_ps_adaptive_multiplicative",
    "gamma_ps_amplified",
    "gamma_ps_prefix_hat",
    "generic_dilation",
    "is_ergodic",
    "is_irreducible",
    "is_reversible",
    "lanczos_second_eigenvalue",
    "matrix_power",
    "mixing_time",
    "mixing_time_sandwich",
    "pi_star_hat",
    "pseudo_spectral_gap",
    "reversible_dilation",
    "simulate",
    "smoothed_estimates",
    "spectral_gaps",
    "stationary_distribution",
    "tally",
    "time_reversal",
    "unsmoothed_L_hat",
    "verify_lemma_properties",
]
