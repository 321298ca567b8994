"""Extinction certificates for generalized Lotka-Volterra systems.

x_i' = x_i (c_i + sum_j s_ij z_j(t)): exact left-kernel analysis of S,
die-out certificates from minimal-support null vectors, a trapping region
for trophic systems and a log-space RK4 simulator to check them against.
"""
from .certificates import (
    DieOutCertificate,
    DieOutReport,
    MustDie,
    TeamCertificate,
    certificate,
    lambda_rate,
    lambda_value,
    must_die_report,
    team_certificate,
    verify_dieout,
)
from .config import RunConfig, load
from .errors import *  # noqa: F401,F403
from .integrator import SimConfig, make_oscillator, percapita_rates, simulate, trajectory_bound
from .model import (
    Constant,
    Coupled,
    Oscillator,
    Piecewise,
    State,
    SystemSpec,
    Trajectory,
    validate,
)
from .nullspace import NullTeam, NullVector, cover_vector, is_minimal_support, orient, restrict_system, team
from .trophic import TrappingRegion, check_trophic, quadratic_cap, trapping_region

__version__ = "0.1.0"
