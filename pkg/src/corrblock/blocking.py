"""Marginal and joint blocking statistics for a pair of interferers.

Blockage centres form a binomial point process: ``K`` points placed
independently and uniformly over a deployment region of area ``A``. An
interferer is blocked (``B_i = 1``) when at least one centre falls in its
blocking region of area ``a_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateMarginalError, GeometryError, InfeasibleScenarioError
from .geometry import (
    BlockingRegion,
    DeploymentRegion,
    RegionModel,
    TransmitterSite,
    overlap_area,
    region_area,
)

# slack for round-off in probability and area comparisons
_TOL = 1e-12


@dataclass(frozen=True)
class BlockageField:
    """``count`` blockages of width ``width`` dropped uniformly on ``region``.

    ``area_override`` replaces the region's geometric area in the analytic
    formulas only; sampling still uses the region itself.
    """

    count: int
    width: float
    region: DeploymentRegion
    area_override: float | None = None

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 0:
            raise InfeasibleScenarioError(f"blockage count must be a nonnegative integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        if not self.width > 0:
            raise GeometryError(f"blockage width must be > 0, got {self.width}")
        if self.area_override is not None and not self.area_override > 0:
            raise GeometryError(f"area override must be > 0, got {self.area_override}")

    @property
    def area(self) -> float:
        return self.region.area if self.area_override is None else float(self.area_override)


def marginal_block_prob(a: float, field: BlockageField) -> float:
    """Probability that at least one of the ``K`` blockages lands in an area ``a``."""
    return 1.0 - _marginal_los_prob(a, field)


def _marginal_los_prob(a: float, field: BlockageField) -> float:
    A = field.area
    if a < 0:
        raise InfeasibleScenarioError(f"blocking region area must be >= 0, got {a}")
    if a > A * (1 + _TOL):
        raise InfeasibleScenarioError(
            f"blocking region exceeds deployment region (a={a:.6g} > A={A:.6g})"
        )
    return max(0.0, 1.0 - a / A) ** field.count


def both_los_prob(a1: float, a2: float, v: float, field: BlockageField) -> float:
    """Probability that neither interferer is blocked.

    Every blockage must avoid the union of the two regions, whose area is
    ``a1 + a2 - v``.
    """
    A = field.area
    if v < 0:
        raise InfeasibleScenarioError(f"overlap area must be >= 0, got {v}")
    if v > min(a1, a2) * (1 + _TOL) + _TOL:
        raise InfeasibleScenarioError(
            f"overlap area v={v:.6g} exceeds the smaller blocking region ({min(a1, a2):.6g})"
        )
    union = a1 + a2 - v
    if union > A * (1 + _TOL):
        raise InfeasibleScenarioError(
            f"union of blocking regions ({union:.6g}) exceeds deployment region (A={A:.6g})"
        )
    return max(0.0, 1.0 - union / A) ** field.count


def _h(p1: float, p2: float) -> float:
    q1, q2 = 1.0 - p1, 1.0 - p2
    if p1 == p2:
        # keeps rho = 1 exactly degenerate for equal marginals
        return p1 * q1
    return math.sqrt(p1 * p2 * q1 * q2)


def _check_marginals(p1: float, p2: float) -> None:
    for name, p in (("p1", p1), ("p2", p2)):
        if not 0.0 <= p <= 1.0:
            raise InfeasibleScenarioError(f"{name}={p} is not a probability")
        if p in (0.0, 1.0):
            raise DegenerateMarginalError(f"degenerate marginal; correlation undefined ({name}={p})")


def correlation(p00: float, p1: float, p2: float) -> float:
    """Correlation coefficient of the blocking indicators from ``P(B1=0, B2=0)``."""
    _check_marginals(p1, p2)
    return _rho(p00, 1.0 - p1, 1.0 - p2)


def _rho(p00: float, q1: float, q2: float) -> float:
    # p00 - q1*q2 written as (p00 - q1) + q1*p2 so that p00 == q1 == q2
    # (identical regions) gives exactly 1
    p1, p2 = 1.0 - q1, 1.0 - q2
    h = p1 * q1 if q1 == q2 else math.sqrt(p1 * p2 * q1 * q2)
    return ((p00 - q1) + q1 * p2) / h


def rho_bounds(p1: float, p2: float) -> tuple[float, float]:
    """Range of correlation coefficients giving a valid joint pmf."""
    _check_marginals(p1, p2)
    q1, q2 = 1.0 - p1, 1.0 - p2
    h = _h(p1, p2)
    return max(-q1 * q2, -p1 * p2) / h, min(q1 * p2, p1 * q2) / h


@dataclass(frozen=True)
class JointPmf:
    """Joint pmf of ``(B1, B2)``; ``pXY`` is ``P(B1=X, B2=Y)``."""

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self):
        for name in ("p00", "p01", "p10", "p11"):
            val = getattr(self, name)
            if not (-_TOL <= val <= 1.0 + _TOL):
                raise InfeasibleScenarioError(f"joint pmf entry {name}={val:.6g} outside [0, 1]")
            # clamp round-off so downstream code sees genuine probabilities
            object.__setattr__(self, name, min(1.0, max(0.0, float(val))))
        total = self.p00 + self.p01 + self.p10 + self.p11
        if abs(total - 1.0) > 1e-9:
            raise InfeasibleScenarioError(f"joint pmf sums to {total}, not 1")

    @classmethod
    def independent(cls, p1: float, p2: float) -> "JointPmf":
        q1, q2 = 1.0 - p1, 1.0 - p2
        return cls(q1 * q2, q1 * p2, p1 * q2, p1 * p2)

    @classmethod
    def from_both_los(cls, p1: float, p2: float, p00: float) -> "JointPmf":
        """Joint pmf fixed by the marginals and ``P(B1=0, B2=0)``.

        Works for degenerate marginals, where the correlation is undefined.
        """
        q1, q2 = 1.0 - p1, 1.0 - p2
        return cls(p00, q1 - p00, q2 - p00, 1.0 - q1 - q2 + p00)

    @property
    def p1(self) -> float:
        return self.p10 + self.p11

    @property
    def p2(self) -> float:
        return self.p01 + self.p11

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p00, self.p01, self.p10, self.p11)


@dataclass(frozen=True)
class PairBlockingStats:
    """Blocking statistics of an interferer pair.

    The geometric inputs ``a1``, ``a2``, ``v`` and ``p00`` are filled in when
    the stats come from :func:`pair_stats` and left as ``None`` otherwise.
    """

    p1: float
    p2: float
    q1: float
    q2: float
    h: float
    rho: float
    a1: float | None = None
    a2: float | None = None
    v: float | None = None
    p00: float | None = None

    def __post_init__(self):
        lo, hi = rho_bounds(self.p1, self.p2)
        slack = 1e-12 / self.h
        if not (lo - slack <= self.rho <= hi + slack):
            raise InfeasibleScenarioError(
                f"rho={self.rho:.6g} infeasible for p1={self.p1:.6g}, p2={self.p2:.6g}; "
                f"allowed [{lo:.6g}, {hi:.6g}]"
            )

    @classmethod
    def from_marginals(cls, p1: float, p2: float, rho: float, **geometry) -> "PairBlockingStats":
        _check_marginals(p1, p2)
        return cls(p1, p2, 1.0 - p1, 1.0 - p2, _h(p1, p2), rho, **geometry)

    @property
    def bounds(self) -> tuple[float, float]:
        return rho_bounds(self.p1, self.p2)

    def with_rho(self, rho: float) -> "PairBlockingStats":
        return PairBlockingStats(self.p1, self.p2, self.q1, self.q2, self.h, rho, self.a1, self.a2, self.v)


def joint_pmf(stats: PairBlockingStats) -> JointPmf:
    s = stats
    rh = s.rho * s.h
    entries = {
        "p00": s.q1 * s.q2 + rh,
        "p01": s.q1 * s.p2 - rh,
        "p10": s.p1 * s.q2 - rh,
        "p11": s.p1 * s.p2 + rh,
    }
    for name, val in entries.items():
        if not (-_TOL <= val <= 1.0 + _TOL):
            raise InfeasibleScenarioError(
                f"rho={s.rho:.6g} gives joint pmf entry {name}={val:.6g} outside [0, 1]"
            )
    return JointPmf(**entries)


@dataclass(frozen=True)
class PairGeometry:
    a1: float
    a2: float
    v: float


def pair_geometry(site1: TransmitterSite, site2: TransmitterSite, width: float,
                  model: RegionModel = "rectangle") -> PairGeometry:
    r1 = BlockingRegion(site1, width, model)
    r2 = BlockingRegion(site2, width, model)
    return PairGeometry(region_area(r1), region_area(r2), overlap_area(r1, r2))


def pair_stats(site1: TransmitterSite, site2: TransmitterSite, field: BlockageField,
               model: RegionModel = "rectangle") -> PairBlockingStats:
    g = pair_geometry(site1, site2, field.width, model)
    q1, q2 = _marginal_los_prob(g.a1, field), _marginal_los_prob(g.a2, field)
    p1, p2 = 1.0 - q1, 1.0 - q2
    p00 = both_los_prob(g.a1, g.a2, g.v, field)
    _check_marginals(p1, p2)
    rho = _rho(p00, q1, q2)
    return PairBlockingStats.from_marginals(p1, p2, rho, a1=g.a1, a2=g.a2, v=g.v, p00=p00)


@dataclass(frozen=True)
class BlockingModel:
    """Correlated and independent joint pmfs for one interferer pair.

    ``stats`` is ``None`` when a marginal is degenerate (for instance when
    there are no blockages), in which case both pmfs coincide.
    """

    geometry: PairGeometry
    p1: float
    p2: float
    p00: float
    stats: PairBlockingStats | None
    correlated: JointPmf
    independent: JointPmf


def blocking_model(site1: TransmitterSite, site2: TransmitterSite, field: BlockageField,
                   model: RegionModel = "rectangle", rho: float | None = None) -> BlockingModel:
    """Build the pmf pair used by the SINR pipelines.

    ``rho`` overrides the geometric correlation coefficient.
    """
    try:
        stats = pair_stats(site1, site2, field, model)
        g, p1, p2, p00 = PairGeometry(stats.a1, stats.a2, stats.v), stats.p1, stats.p2, stats.p00
    except DegenerateMarginalError:
        if rho is not None:
            raise
        g = pair_geometry(site1, site2, field.width, model)
        p1 = marginal_block_prob(g.a1, field)
        p2 = marginal_block_prob(g.a2, field)
        p00 = both_los_prob(g.a1, g.a2, g.v, field)
        pmf = JointPmf.from_both_los(p1, p2, p00)
        return BlockingModel(g, p1, p2, p00, None, pmf, pmf)
    if rho is not None:
        stats = stats.with_rho(rho)
    return BlockingModel(g, p1, p2, p00, stats, joint_pmf(stats), JointPmf.independent(p1, p2))
