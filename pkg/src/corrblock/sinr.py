"""Distribution of the unblocked interference and the resulting SINR CDF.

With received powers ``omega1``, ``omega2`` from the interferers and
blocking indicators ``B1``, ``B2``::

    Z    = (1 - B1) * omega1 + (1 - B2) * omega2
    SINR = omega0 / (c + Z),    c = omega0 / SNR

``Z`` takes at most four values, so the SINR CDF is a step function with at
most four breakpoints. All ratios are linear; dB only appears in helpers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocking import JointPmf
from .cdf import StepCdf


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0) if np.ndim(x_db) else 10.0 ** (x_db / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class ReceivedPowers:
    omega0: float
    omega1: float
    omega2: float
    snr: float
    alpha: float = 2.0

    def __post_init__(self):
        if min(self.omega0, self.omega1, self.omega2) < 0:
            raise ValueError("received powers must be >= 0")
        if not self.snr > 0:
            raise ValueError(f"snr must be > 0, got {self.snr}")

    @classmethod
    def from_distances(cls, r1: float, r2: float, *, alpha: float = 2.0,
                       snr_db: float = 15.0, omega0: float = 1.0) -> "ReceivedPowers":
        """Omnidirectional powers ``R_i ** -alpha``."""
        return cls(omega0, r1 ** (-alpha), r2 ** (-alpha), db_to_linear(snr_db), alpha)

    @property
    def c(self) -> float:
        return self.omega0 / self.snr


@dataclass(frozen=True)
class ZDistribution:
    """Atoms of ``Z`` sorted by value, coincident values merged."""

    values: tuple[float, ...]
    probs: tuple[float, ...]

    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.probs))


def z_distribution(powers: ReceivedPowers, pmf: JointPmf) -> ZDistribution:
    o1, o2 = powers.omega1, powers.omega2
    raw = [(0.0, pmf.p11), (o2, pmf.p10), (o1, pmf.p01), (o1 + o2, pmf.p00)]
    merged: dict[float, float] = {}
    for z, p in raw:
        if p > 0.0:
            merged[z] = merged.get(z, 0.0) + p
    zs = sorted(merged)
    return ZDistribution(tuple(zs), tuple(merged[z] for z in zs))


def z_cdf(dist: ZDistribution, z: float) -> float:
    """``P(Z <= z)``."""
    return float(sum(p for v, p in zip(dist.values, dist.probs) if v <= z))


class SinrCdf(StepCdf):
    """Analytic SINR CDF in linear threshold units."""

    def steps(self) -> list[tuple[float, float]]:
        return list(zip(self.breakpoints.tolist(), self.values.tolist()))

    def steps_db(self) -> list[tuple[float, float]]:
        return list(zip(linear_to_db(self.breakpoints).tolist(), self.values.tolist()))


def sinr_from_interference(omega0: float, c: float, z):
    # single expression shared by the analytic and simulated paths so that
    # breakpoints and samples agree bit for bit
    return omega0 / (c + z)


def sinr_cdf(powers: ReceivedPowers, pmf: JointPmf) -> SinrCdf:
    """``P(SINR <= beta)`` as a right-continuous step function of ``beta``.

    A larger ``Z`` gives a smaller SINR, so the atom at ``z`` becomes a jump
    at ``omega0 / (c + z)``.
    """
    dist = z_distribution(powers, pmf)
    betas = sinr_from_interference(powers.omega0, powers.c, np.array(dist.values))
    return SinrCdf.from_atoms(betas, dist.probs)


def mixture_sinr_cdf(omega0: float, snr: float, omega1, omega2, pmf: JointPmf,
                     weights=None) -> SinrCdf:
    """SINR CDF when the interferer powers are themselves random.

    ``omega1[j]``, ``omega2[j]`` are joint power outcomes with probability
    ``weights[j]`` (uniform by default), independent of blocking.
    """
    o1 = np.asarray(omega1, dtype=float).ravel()
    o2 = np.asarray(omega2, dtype=float).ravel()
    if o1.shape != o2.shape:
        raise ValueError("omega1 and omega2 must have the same length")
    w = np.full(o1.size, 1.0 / o1.size) if weights is None else np.asarray(weights, dtype=float).ravel()
    c = omega0 / snr
    z = np.concatenate([np.zeros_like(o1), o2, o1, o1 + o2])
    p = np.concatenate([w * pmf.p11, w * pmf.p10, w * pmf.p01, w * pmf.p00])
    return SinrCdf.from_atoms(sinr_from_interference(omega0, c, z), p)


def outage(cdf: StepCdf, beta) -> float:
    """Probability that the SINR is at most ``beta``."""
    return cdf(beta)


def coverage(cdf: StepCdf, beta) -> float:
    return 1.0 - cdf(beta)


def consistency_error(cdf: StepCdf, powers: ReceivedPowers, pmf: JointPmf, betas) -> float:
    """Largest deviation between ``cdf`` and ``1 - F_Z(omega0/beta - c)`` over ``betas``.

    The two agree everywhere except exactly at breakpoints, where the step
    function takes its right limit.
    """
    dist = z_distribution(powers, pmf)
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    ref = np.array([1.0 - z_cdf(dist, powers.omega0 / b - powers.c) for b in betas])
    return float(np.max(np.abs(cdf(betas) - ref)))
