"""Analytic SINR curves for an interferer pair, with optional antenna directivity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna import OMNI, AntennaPattern, tx_gain_toward_receiver
from .blocking import BlockageField, BlockingModel, JointPmf, blocking_model
from .cdf import ks_distance
from .geometry import TWO_PI, RegionModel, TransmitterSite
from .sinr import ReceivedPowers, SinrCdf, db_to_linear, mixture_sinr_cdf, sinr_cdf


@dataclass(frozen=True)
class RadioConfig:
    """Link budget shared by the analytic and simulated pipelines."""

    omega0: float = 1.0
    snr_db: float = 15.0
    alpha: float = 2.0
    rx_pattern: AntennaPattern = OMNI
    tx_pattern: AntennaPattern = OMNI
    rx_boresight: float = 0.0

    @property
    def snr(self) -> float:
        return db_to_linear(self.snr_db)

    @property
    def c(self) -> float:
        return self.omega0 / self.snr

    @property
    def random_orientation(self) -> bool:
        return self.tx_pattern.directional

    def interferer_power(self, site: TransmitterSite, boresight=0.0):
        """Received power from ``site`` for one or many transmit boresights."""
        g_r = self.rx_pattern.gain(site.phi - self.rx_boresight)
        g_t = tx_gain_toward_receiver(site, boresight, self.tx_pattern)
        return g_r * g_t * site.r ** (-self.alpha)

    def fixed_powers(self, site1: TransmitterSite, site2: TransmitterSite) -> ReceivedPowers:
        if self.random_orientation:
            raise ValueError("interferer powers are random for a directional transmit pattern")
        return ReceivedPowers(self.omega0, self.interferer_power(site1), self.interferer_power(site2),
                              self.snr, self.alpha)


def orientation_grid(n: int) -> np.ndarray:
    """Midpoint grid of ``n`` boresight angles on ``[0, 2*pi)``."""
    return (np.arange(n) + 0.5) * (TWO_PI / n)


def pair_sinr_cdf(site1: TransmitterSite, site2: TransmitterSite, radio: RadioConfig,
                  pmf: JointPmf, n_orient: int = 32) -> SinrCdf:
    """SINR CDF for given blocking pmf.

    With a directional transmit pattern each boresight is uniform and
    independent. Each interferer's power is tabulated on an ``n_orient``
    midpoint grid of boresights, repeated levels are merged, and the CDF is
    averaged over the product of the two level sets. Piecewise-constant
    patterns therefore cost only a handful of mixture components.
    """
    if not radio.random_orientation:
        return sinr_cdf(radio.fixed_powers(site1, site2), pmf)
    psi = orientation_grid(n_orient)
    l1, c1 = np.unique(radio.interferer_power(site1, psi), return_counts=True)
    l2, c2 = np.unique(radio.interferer_power(site2, psi), return_counts=True)
    o1, o2 = np.meshgrid(l1, l2, indexing="ij")
    w = np.outer(c1, c2) / float(n_orient) ** 2
    return mixture_sinr_cdf(radio.omega0, radio.snr, o1, o2, pmf, w)


@dataclass(frozen=True)
class AnalyticCurves:
    site1: TransmitterSite
    site2: TransmitterSite
    blocking: BlockingModel
    correlated: SinrCdf
    independent: SinrCdf

    @property
    def gap(self) -> float:
        """Largest vertical distance between the correlated and independent CDFs."""
        return ks_distance(self.correlated, self.independent)


def analytic_curves(site1: TransmitterSite, site2: TransmitterSite, field: BlockageField,
                    radio: RadioConfig, model: RegionModel = "rectangle", rho: float | None = None,
                    n_orient: int = 32) -> AnalyticCurves:
    bm = blocking_model(site1, site2, field, model, rho)
    return AnalyticCurves(
        site1,
        site2,
        bm,
        pair_sinr_cdf(site1, site2, radio, bm.correlated, n_orient),
        pair_sinr_cdf(site1, site2, radio, bm.independent, n_orient),
    )


def symmetric_gap(p: float, rho: float) -> float:
    """Plateau offset between correlated and independent CDFs for equal marginals."""
    return abs(rho) * p * (1.0 - p)


def angular_separation(site1: TransmitterSite, site2: TransmitterSite) -> float:
    return abs(math.remainder(site2.phi - site1.phi, TWO_PI))
