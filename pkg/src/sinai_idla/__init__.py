"""IDLA clusters grown by recurrent walks in random environment, with the
Arcsine-law analysis toolkit."""

from .env import Environment, EnvironmentLaw, make_environment
from .idla import (
    Cluster,
    ClusterTrajectory,
    exit_left_probability,
    grow_cluster,
    grow_cluster_oracle,
    hitting_probability_oracle,
    step_walk_exit,
)
from .functionals import (
    ArrayPath,
    FunctionalReport,
    PotentialProfile,
    ascending_records,
    critical_level,
    excursion_lengths,
    good_event_flags,
    theoretical_position,
)
from .brownian import (
    BrownianPath,
    composite_sample,
    dstar_of_brownian,
    keyidentity_check,
    last_zero,
    occupation_time_positive,
    sample_brownian,
)
from .stats import (
    SamplePool,
    arcsine_cdf,
    half_normal_cdf,
    ks_statistic,
    tv_distance_discrete,
    two_sample_ks,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
