"""Favorable-propagation analysis for massive MIMO channels."""

__version__ = "0.1.0"

from .channels import ChannelModelSpec, Kind, critical_pair, generate, steering_matrix, steering_vector
from .metrics import (
    FavorabilityReport,
    UndefinedMetricError,
    condition_number,
    distance_from_fp,
    favorability_report,
    gramian,
    gramian_spectrum,
    hadamard_bound,
    is_favorable,
    jensen_bound,
    pairwise_inner_products,
    predicted_ip_sq_variance,
    predicted_ip_variance,
    sum_capacity,
)
from .montecarlo import EnsembleConfig, EnsembleResult, empirical_cdf, run_ensemble, variance_study
from .occupancy import assign_and_drop, beam_grid, drop_pmf, mean_drop, simulate_drop
