"""Deterministic Monte-Carlo oracle for blocking statistics and SINR distributions.

Random numbers come from counter-keyed substreams: every block of
``block_size`` consecutive trials draws from its own Philox generator keyed
on ``(master_seed, purpose, realization, block)``. Blocks are reduced in
index order, so results do not depend on how many worker threads run them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from .analysis import AnalyticCurves, RadioConfig, analytic_curves
from .antenna import draw_orientation
from .blocking import BlockageField
from .cdf import StepCdf, ks_distance
from .geometry import CircleRegion, DeploymentRegion, RegionModel, TransmitterSite, blocked_mask
from .sinr import sinr_from_interference

T = TypeVar("T")

BLOCK_SIZE = 1 << 14
EXACT_SAMPLE_LIMIT = 10**6
SKETCH_POINTS = 10**4


class Purpose(IntEnum):
    BLOCKAGE = 0
    ORIENTATION = 1
    PLACEMENT = 2


def substream(master_seed: int, purpose: Purpose, realization: int = 0, block: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(purpose), int(realization), int(block)))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class McControls:
    trials: int
    realizations: int = 1
    master_seed: int = 0
    threads: int = 1
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def blocks(self) -> list[tuple[int, int]]:
        """``(block index, trial count)`` pairs covering all trials."""
        n_full, rem = divmod(self.trials, self.block_size)
        out = [(b, self.block_size) for b in range(n_full)]
        if rem:
            out.append((n_full, rem))
        return out


def _ordered_map(fn: Callable[..., T], items: Iterable, threads: int) -> list[T]:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# sampling


def sample_points(region: DeploymentRegion, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` i.i.d. uniform points in ``region`` as an ``(n, 2)`` array."""
    if n == 0:
        return np.empty((0, 2))
    if isinstance(region, CircleRegion):
        u = rng.random((n, 2))
        r = region.radius * np.sqrt(u[:, 0])
        phi = 2.0 * math.pi * u[:, 1]
        return np.column_stack((r * np.cos(phi), r * np.sin(phi)))
    x0, y0, x1, y1 = region.bounding_box
    accept = region.area / ((x1 - x0) * (y1 - y0))
    out, have = [], 0
    while have < n:
        m = int((n - have) / accept * 1.1) + 16
        pts = rng.random((m, 2)) * [x1 - x0, y1 - y0] + [x0, y0]
        pts = pts[region.contains(pts)]
        out.append(pts)
        have += len(pts)
    return np.concatenate(out)[:n]


def sample_blockages(region: DeploymentRegion, count: int, rng: np.random.Generator) -> np.ndarray:
    """Centres of ``count`` blockages of one field realization."""
    if count < 0:
        raise ValueError("blockage count must be >= 0")
    return sample_points(region, count, rng)


def _blocking_indicators(sites: Sequence[TransmitterSite], fld: BlockageField, n: int,
                         rng: np.random.Generator, predicate: RegionModel) -> list[np.ndarray]:
    centers = sample_points(fld.region, n * fld.count, rng).reshape(n, fld.count, 2)
    return [blocked_mask(centers, s, fld.width, predicate).any(axis=1) for s in sites]


# --------------------------------------------------------------------------
# blocking statistics


@dataclass(frozen=True)
class PairBlockingEstimate:
    trials: int
    n00: int
    n01: int
    n10: int
    n11: int
    p1_hat: float
    p2_hat: float
    p00_hat: float
    rho_hat: float
    se_p1: float
    se_p2: float
    se_p00: float
    se_rho: float

    @classmethod
    def from_counts(cls, n00: int, n01: int, n10: int, n11: int) -> "PairBlockingEstimate":
        n = n00 + n01 + n10 + n11
        n1, n2 = n10 + n11, n01 + n11
        p1, p2, p00 = n1 / n, n2 / n, n00 / n
        d1, d2 = n1 * (n - n1), n2 * (n - n2)
        if d1 == 0 or d2 == 0:
            rho = se_rho = math.nan
        else:
            # sample covariance over sample standard deviations, in integer counts
            den = float(d1) if d1 == d2 else math.sqrt(d1 * d2)
            rho = (n11 * n00 - n10 * n01) / den
            se_rho = _rho_standard_error(np.array([n00, n01, n10, n11]) / n, n)

        def se(p):
            return math.sqrt(p * (1.0 - p) / n)

        return cls(n, n00, n01, n10, n11, p1, p2, p00, rho, se(p1), se(p2), se(p00), se_rho)


def _rho_standard_error(pi: np.ndarray, n: int) -> float:
    # delta method on the multinomial cell frequencies (p00, p01, p10, p11)
    p00, p01, p10, p11 = pi
    p1, p2 = p10 + p11, p01 + p11
    v1, v2 = p1 * (1 - p1), p2 * (1 - p2)
    d = math.sqrt(v1 * v2)
    num = p11 - p1 * p2
    dp1 = np.array([0.0, 0.0, 1.0, 1.0])
    dp2 = np.array([0.0, 1.0, 0.0, 1.0])
    dnum = np.array([0.0, 0.0, 0.0, 1.0]) - p2 * dp1 - p1 * dp2
    dd = 0.5 * d * ((1 - 2 * p1) / v1 * dp1 + (1 - 2 * p2) / v2 * dp2)
    grad = dnum / d - num * dd / d**2
    cov = (np.diag(pi) - np.outer(pi, pi)) / n
    return math.sqrt(max(0.0, float(grad @ cov @ grad)))


def estimate_pair_blocking(site1: TransmitterSite, site2: TransmitterSite, fld: BlockageField,
                           controls: McControls, predicate: RegionModel = "exact") -> PairBlockingEstimate:
    """Empirical blocking statistics from ``controls.trials`` blockage fields."""

    def run(block):
        b, n = block
        rng = substream(controls.master_seed, Purpose.BLOCKAGE, 0, b)
        b1, b2 = _blocking_indicators((site1, site2), fld, n, rng, predicate)
        return (int(np.sum(~b1 & ~b2)), int(np.sum(~b1 & b2)), int(np.sum(b1 & ~b2)), int(np.sum(b1 & b2)))

    counts = np.sum(_ordered_map(run, controls.blocks(), controls.threads), axis=0)
    return PairBlockingEstimate.from_counts(*(int(c) for c in counts))


# --------------------------------------------------------------------------
# SINR


@dataclass(frozen=True, eq=False)
class EmpiricalCdf(StepCdf):
    """Empirical CDF; exact up to ``EXACT_SAMPLE_LIMIT`` samples, else a quantile sketch."""

    n_samples: int = 0

    @classmethod
    def from_samples(cls, samples, exact_limit: int = EXACT_SAMPLE_LIMIT,
                     sketch_points: int = SKETCH_POINTS) -> "EmpiricalCdf":
        x = np.sort(np.asarray(samples, dtype=float).ravel())
        n = x.size
        if n == 0:
            raise ValueError("no samples")
        if n <= exact_limit:
            vals, counts = np.unique(x, return_counts=True)
            cum = np.cumsum(counts) / n
        else:
            k = np.arange(1, sketch_points + 1)
            q = x[np.ceil(k * n / sketch_points).astype(np.int64) - 1]
            # keep the highest level for duplicated quantiles
            vals, last = np.unique(q[::-1], return_index=True)
            cum = k[::-1][last] / sketch_points
        cum[-1] = 1.0
        return cls(vals, cum, n)


def _sinr_block(site1, site2, fld, radio: RadioConfig, controls: McControls, predicate,
                realization: int, block: tuple[int, int]) -> np.ndarray:
    b, n = block
    rng_b = substream(controls.master_seed, Purpose.BLOCKAGE, realization, b)
    b1, b2 = _blocking_indicators((site1, site2), fld, n, rng_b, predicate)
    if radio.random_orientation:
        rng_o = substream(controls.master_seed, Purpose.ORIENTATION, realization, b)
        psi = draw_orientation(rng_o, (n, 2))
        o1 = radio.interferer_power(site1, psi[:, 0])
        o2 = radio.interferer_power(site2, psi[:, 1])
    else:
        o1 = radio.interferer_power(site1)
        o2 = radio.interferer_power(site2)
    z = np.where(b1, 0.0, o1) + np.where(b2, 0.0, o2)
    return sinr_from_interference(radio.omega0, radio.c, z)


def sinr_samples(site1: TransmitterSite, site2: TransmitterSite, fld: BlockageField, radio: RadioConfig,
                 controls: McControls, predicate: RegionModel = "exact", realization: int = 0) -> np.ndarray:
    def run(block):
        return _sinr_block(site1, site2, fld, radio, controls, predicate, realization, block)

    return np.concatenate(_ordered_map(run, controls.blocks(), controls.threads))


def simulate_sinr(site1: TransmitterSite, site2: TransmitterSite, fld: BlockageField, radio: RadioConfig,
                  controls: McControls, predicate: RegionModel = "exact") -> EmpiricalCdf:
    """Empirical SINR CDF for interferers at fixed sites."""
    return EmpiricalCdf.from_samples(sinr_samples(site1, site2, fld, radio, controls, predicate))


# --------------------------------------------------------------------------
# random networks


def place_interferers(region: DeploymentRegion, master_seed: int, realization: int) -> tuple[TransmitterSite, TransmitterSite]:
    """Two interferers uniform in ``region``, ordered so the first is nearer."""
    rng = substream(master_seed, Purpose.PLACEMENT, realization, 0)
    while True:
        pts = sample_points(region, 2, rng)
        r = np.hypot(pts[:, 0], pts[:, 1])
        if np.all(r > 0):
            break
    s = sorted((TransmitterSite(float(ri), math.atan2(y, x)) for ri, (x, y) in zip(r, pts)), key=lambda t: t.r)
    return s[0], s[1]


@dataclass(frozen=True)
class RandomNetworkResult:
    empirical: EmpiricalCdf
    correlated: StepCdf
    independent: StepCdf
    realizations: list[AnalyticCurves] = field(repr=False)

    @property
    def gap(self) -> float:
        return ks_distance(self.correlated, self.independent)


def simulate_random_network(region: DeploymentRegion, fld: BlockageField, radio: RadioConfig, controls: McControls,
                            model: RegionModel = "exact", predicate: RegionModel = "exact", n_orient: int = 32,
                            placements: Sequence[tuple[TransmitterSite, TransmitterSite]] | None = None,
                            ) -> RandomNetworkResult:
    """Pool ``controls.realizations`` network placements, each with ``controls.trials`` trials.

    Besides the pooled empirical CDF, every realization contributes its
    correlated and independent analytic CDFs to equal-weight averages.
    ``placements`` fixes the interferer positions instead of drawing them.
    """
    n_real = controls.realizations if placements is None else len(placements)
    inner = McControls(controls.trials, 1, controls.master_seed, 1, controls.block_size)

    def run(r):
        s1, s2 = placements[r] if placements is not None else place_interferers(region, controls.master_seed, r)
        curves = analytic_curves(s1, s2, fld, radio, model, n_orient=n_orient)
        return curves, sinr_samples(s1, s2, fld, radio, inner, predicate, realization=r)

    results = _ordered_map(run, range(n_real), controls.threads)
    curves = [c for c, _ in results]
    samples = np.concatenate([s for _, s in results])
    w = 1.0 / n_real

    def pooled(attr):
        cdfs = [getattr(c, attr) for c in curves]
        pts = np.concatenate([c.breakpoints for c in cdfs])
        mass = np.concatenate([c.masses for c in cdfs]) * w
        return StepCdf.from_atoms(pts, mass)

    return RandomNetworkResult(EmpiricalCdf.from_samples(samples), pooled("correlated"), pooled("independent"), curves)
