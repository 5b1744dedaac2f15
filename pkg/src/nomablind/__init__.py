"""Two-user downlink superposition with blind SIC classification:
closed-form error analysis, constrained power allocation, and user
scheduling, with Monte Carlo cross-checks."""

__version__ = "0.1.0"

from .analysis import (ErrorProbabilities, analytical_error_pair,
                       combine_majority, p_err_nonsic_user, p_err_sic_user,
                       q_function)
from .channel import LinkState, UserDrop, drop_users, sample_noise
from .classifier import (Hypothesis, Observation, classify_m_user,
                         classify_multi, classify_single, likelihood_nonsic,
                         likelihood_sic)
from .constellation import (CompositeConstellation, Constellation,
                            DecisionRegion, DegenerateConstellationError,
                            NonRectangularRegionsError, decision_regions,
                            first_quadrant_indices, make_qam, superpose)
from .harness import (ExperimentConfig, default_config, load_config,
                      run_fig7, run_gain_experiment, run_validate)
from .montecarlo import (EstimateWithCI, TrialConfig, estimate_error_pair,
                         estimate_error_pair_joint, exhaustive_schedule,
                         grid_optimal_gamma)
from .optimizer import (AllocationResult, Binding, allocate,
                        gamma_classifier_boundary, gamma_rate_boundary)
from .rates import (GainReport, PowerSplit, RatePair, gain_lower_bound,
                    gain_report, rate_nonsic, rate_oma, rate_sic)
from .scheduler import (SchedulingOutcome, classify_case, schedule_proposed,
                        schedule_strongest_strongest,
                        schedule_strongest_weakest)

__all__ = [
    "AllocationResult", "Binding", "CompositeConstellation", "Constellation",
    "DecisionRegion", "DegenerateConstellationError", "ErrorProbabilities",
    "EstimateWithCI", "ExperimentConfig", "GainReport", "Hypothesis",
    "LinkState",
    "NonRectangularRegionsError", "Observation", "PowerSplit", "RatePair",
    "SchedulingOutcome", "TrialConfig", "UserDrop", "allocate",
    "analytical_error_pair", "classify_case", "classify_m_user",
    "classify_multi", "classify_single", "combine_majority",
    "decision_regions", "default_config", "drop_users",
    "estimate_error_pair", "estimate_error_pair_joint",
    "exhaustive_schedule", "first_quadrant_indices", "gain_lower_bound",
    "gain_report", "gamma_classifier_boundary", "gamma_rate_boundary",
    "grid_optimal_gamma", "likelihood_nonsic", "likelihood_sic",
    "load_config", "make_qam", "p_err_nonsic_user", "p_err_sic_user",
    "q_function", "rate_nonsic", "rate_oma", "rate_sic", "run_fig7",
    "run_gain_experiment", "run_validate", "sample_noise",
    "schedule_proposed", "schedule_strongest_strongest",
    "schedule_strongest_weakest", "superpose",
]
