"""SINR distribution of a mmWave personal network with two interferers under correlated blocking."""

from .analysis import AnalyticCurves, RadioConfig, analytic_curves, pair_sinr_cdf
from .antenna import (
    OMNI,
    Omni,
    OrientedTransmitter,
    Sectorized,
    TabulatedPattern,
    UniformArray,
    draw_orientation,
    gain,
    received_power,
)
from .blocking import (
    BlockageField,
    JointPmf,
    PairBlockingStats,
    blocking_model,
    both_los_prob,
    correlation,
    joint_pmf,
    marginal_block_prob,
    pair_stats,
    rho_bounds,
)
from .cdf import StepCdf, ks_distance
from .errors import ConfigError, DegenerateMarginalError, GeometryError, InfeasibleScenarioError
from .geometry import (
    BlockageSegment,
    BlockingRegion,
    CircleRegion,
    ConvexPolygon,
    Point2,
    PolygonRegion,
    TransmitterSite,
    blocks,
    overlap_area,
    polygon_clip,
    region_area,
)
from .montecarlo import (
    EmpiricalCdf,
    McControls,
    estimate_pair_blocking,
    sample_blockages,
    simulate_random_network,
    simulate_sinr,
)
from .sinr import (
    ReceivedPowers,
    SinrCdf,
    ZDistribution,
    coverage,
    outage,
    sinr_cdf,
    z_cdf,
    z_distribution,
)

__version__ = "0.1.0"
