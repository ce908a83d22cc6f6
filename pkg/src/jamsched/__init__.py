"""Friendly-jammer activation scheduling for physical-layer secure storage areas."""

from jamsched.errors import (
    ConfigError,
    DeploymentError,
    JamschedError,
    ModelError,
    NoReliableSetError,
    ParameterError,
    ResourceError,
    SelectionError,
    UnsupportedModeError,
)
from jamsched.geometry import Point, Rect
from jamsched.greedy import greedy_schedule
from jamsched.lifetime import (
    baseline_lifetime,
    find_disjoint_reliable_subsets,
    infinite_lifetime_certificate,
    min_active_jammers,
)
from jamsched.mrs import enumerate_minimum_reliable_sets, mrs_schedule
from jamsched.schedule import Schedule, Termination, replay
from jamsched.sinr import NetworkConfig, active_count_bounds, constraint_field
from jamsched.world import WorldModel, deploy_jammers, desk_world, large_world

__version__ = "0.1.0"
