"""Security analysis of unidimensional continuous-variable QKD.

One quadrature is Gaussian-modulated; the channel acts asymmetrically on
the modulated (x) and unmodulated (p) quadratures. The package covers the
asymptotic reverse-reconciliation rate against collective attacks, the
physicality and security regions in the unmodulated-quadrature plane, and
the finite-size composable rate with discretized parameter estimation.
"""

__version__ = "0.1.0"

from .asymptotic import (
    AsymptoticRateResult,
    build_gg02_covariance,
    holevo_rr,
    key_rate_gg02,
    key_rate_ucvqkd,
    key_rate_ucvqkd_symmetric,
    key_rate_ucvqkd_unchecked,
    max_tolerable_excess_noise,
    mutual_information_x,
)
from .composable import (
    ComposableParams,
    ComposableRateResult,
    EpsilonBudget,
    PeSimulationReport,
    PeThresholds,
    composable_rate,
    epsilon_budget,
    finite_size_corrections,
    holevo_f,
    key_length,
    leakage_ec,
    mutual_information_ec,
    pe_estimates,
    pe_thresholds,
    simulate_pe_statistics,
)
from .gaussian import (
    ChannelParams,
    DomainError,
    TwoModeCovariance,
    build_symmetric_covariance,
    build_ucvqkd_covariance,
    condition_on_homodyne_x,
    entropy_g,
    is_physical_matrix,
    is_physical_ucvqkd,
    symplectic_eigenvalues,
)
from .optimize import (
    OptimumResult,
    SweepResult,
    distance_to_eta,
    max_distance,
    optimal_modulation_variance,
    rate_vs_block_size,
    sweep_distance,
)
from .region import (
    RegionCell,
    RegionClass,
    RegionContext,
    RegionGrid,
    classify_point,
    find_extremal_rates,
    scan_region,
)

__all__ = [name for name in dir() if not name.startswith("_")]
