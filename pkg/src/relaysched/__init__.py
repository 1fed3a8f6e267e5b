"""Opportunistic scheduling over fading multiuser relay channels.

Monte Carlo simulation of max-route, orthogonal and spectrum-reuse
scheduling, together with extreme-value (Gumbel) predictions for large
numbers of users.
"""
from .analytic import (
    DirectLinkBreakdown,
    direct_link_probability,
    exp_integral,
    orthogonal_average_rate,
    q_function,
    simultaneous_average_rate,
)
from .channel import RAYLEIGH, BroadcastScenario, FadingLaw, RelayScenario
from .evt import (
    GumbelAffine,
    NormalizingConstants,
    ParentDistribution,
    check_type1,
    gumbel_cdf,
    normalizing_constants,
    reciprocal_hazard,
    spectral_efficiency_constants,
)
from .montecarlo import Estimate, estimate_avg_rate, estimate_pk, oracle_expected_max_se, oracle_pk_exact

__version__ = "0.1.0"
