"""Angles of hyperbolic lattice points for principal congruence groups.

Exact enumeration of ``Gamma(N)`` orbits in hyperbolic balls, the angle
observable, and the closed-form limiting distribution and counting main
terms it converges to.
"""

from .geometry import (
    ConjugatedEntries,
    NormalizedTarget,
    Point,
    angle,
    angle_oracle,
    conjugate_entries,
    hyperbolic_distance,
    orbit_distance,
)
from .group import (
    AngleSample,
    AngleSamples,
    BallSpec,
    GroupElement,
    SectorSpec,
    collect_angles,
    count_ball,
    count_sector,
    enumerate_ball,
    iter_ball,
)
from .theory import (
    IntervalUnion,
    TheoryContext,
    angle_count_main_term,
    ball_main_term,
    build_S,
    c_N,
    density_rho,
    index_gamma_N,
    sector_main_term,
    xi,
)

__version__ = "0.1.0"
