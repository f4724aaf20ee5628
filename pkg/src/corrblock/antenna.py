"""Azimuth-only antenna gain patterns and interferer received power."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .geometry import TWO_PI, TransmitterSite, wrap_angle


@dataclass(frozen=True)
class Omni:
    directional = False

    def gain(self, angle):
        return np.ones_like(np.asarray(angle, dtype=float)) if np.ndim(angle) else 1.0


@dataclass(frozen=True)
class Sectorized:
    """Two-level main-lobe / side-lobe pattern. Defaults: 10 dB, -10 dB, 60 degrees."""

    main_gain: float = 10.0
    side_gain: float = 0.1
    beamwidth: float = math.pi / 3

    directional = True

    def __post_init__(self):
        if not self.main_gain >= self.side_gain > 0:
            raise ValueError("sectorized pattern needs main_gain >= side_gain > 0")
        if not 0 < self.beamwidth <= TWO_PI:
            raise ValueError("beamwidth must lie in (0, 2*pi]")

    def gain(self, angle):
        off = np.abs(wrap_angle(angle))
        g = np.where(off <= 0.5 * self.beamwidth, self.main_gain, self.side_gain)
        return float(g) if np.ndim(g) == 0 else g


@dataclass(frozen=True)
class UniformArray:
    """Uniform linear array of ``elements`` isotropic elements, ``spacing`` in wavelengths.

    Gain is ``N * |AF|**2`` with the normalised array factor
    ``AF = sin(N*pi*d*sin(a)) / (N*sin(pi*d*sin(a)))``, so the broadside peak is ``N``.
    """

    elements: int = 4
    spacing: float = 0.5

    directional = True

    def __post_init__(self):
        if self.elements < 1 or int(self.elements) != self.elements:
            raise ValueError("elements must be a positive integer")
        if not self.spacing > 0:
            raise ValueError("spacing must be > 0")

    def gain(self, angle):
        n = self.elements
        u = math.pi * self.spacing * np.sin(np.asarray(angle, dtype=float))
        den = n * np.sin(u)
        singular = np.abs(den) < 1e-12
        with np.errstate(divide="ignore", invalid="ignore"):
            af = np.where(singular, 1.0, np.sin(n * u) / np.where(singular, 1.0, den))
        g = n * af**2
        return float(g) if np.ndim(g) == 0 else g


@dataclass(frozen=True, eq=False)
class TabulatedPattern:
    """Measured pattern, linearly interpolated in angle (degrees)."""

    angles_deg: np.ndarray
    gains: np.ndarray

    directional = True

    def __post_init__(self):
        a = np.asarray(self.angles_deg, dtype=float)
        g = np.asarray(self.gains, dtype=float)
        if a.ndim != 1 or a.shape != g.shape or a.size < 2:
            raise ValueError("pattern table needs matching 1-D angle and gain columns")
        if np.any(np.diff(a) <= 0):
            raise ValueError("pattern angles must be strictly increasing")
        if a[0] > -180.0 or a[-1] < 180.0:
            raise ValueError("pattern angles must cover [-180, 180] degrees")
        if np.any(g < 0):
            raise ValueError("pattern gains must be >= 0")
        object.__setattr__(self, "angles_deg", a)
        object.__setattr__(self, "gains", g)

    @classmethod
    def from_csv(cls, path: str | Path) -> "TabulatedPattern":
        """Read a two-column ``angle_deg,gain_linear`` CSV (optional header)."""
        angles, gains = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    a, g = float(row[0]), float(row[1])
                except ValueError:
                    if not angles:
                        continue  # header
                    raise ValueError(f"bad pattern row {row!r} in {path}") from None
                angles.append(a)
                gains.append(g)
        return cls(np.array(angles), np.array(gains))

    def gain(self, angle):
        deg = np.degrees(wrap_angle(angle))
        g = np.interp(deg, self.angles_deg, self.gains)
        return float(g) if np.ndim(g) == 0 else g


AntennaPattern = Union[Omni, Sectorized, UniformArray, TabulatedPattern]
OMNI = Omni()


def gain(pattern: AntennaPattern, angle_off_boresight):
    return pattern.gain(angle_off_boresight)


@dataclass(frozen=True)
class OrientedTransmitter:
    site: TransmitterSite
    boresight: float
    pattern: AntennaPattern = OMNI

    def __post_init__(self):
        object.__setattr__(self, "boresight", float(self.boresight) % TWO_PI)


def tx_gain_toward_receiver(site: TransmitterSite, boresight, pattern: AntennaPattern):
    """Transmit gain in the direction of the receiver.

    A transmitter at azimuth ``phi`` sees the receiver at ``phi + pi``, so the
    off-boresight angle is ``|phi - psi| - pi``. Works on arrays of ``psi``.
    """
    return pattern.gain(np.abs(site.phi - np.asarray(boresight, dtype=float)) - math.pi)


def received_power(tx: OrientedTransmitter, rx_pattern: AntennaPattern, alpha: float,
                   rx_boresight: float = 0.0) -> float:
    if tx.site.r <= 0:
        raise ValueError("site coincides with receiver")
    g_r = rx_pattern.gain(tx.site.phi - rx_boresight)
    g_t = tx_gain_toward_receiver(tx.site, tx.boresight, tx.pattern)
    return g_r * g_t * tx.site.r ** (-alpha)


def draw_orientation(rng: np.random.Generator, size=None):
    """Boresight angle uniform on ``[0, 2*pi)``."""
    return rng.uniform(0.0, TWO_PI, size)
