import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import trapezoid
from scipy.special import j0

from corrblock.antenna import (
    OMNI,
    OrientedTransmitter,
    Sectorized,
    TabulatedPattern,
    UniformArray,
    draw_orientation,
    gain,
    received_power,
    tx_gain_toward_receiver,
)
from corrblock.geometry import TransmitterSite
from corrblock.montecarlo import Purpose, substream


def test_omni_unit_gain():
    assert OMNI.gain(1.3) == 1.0
    assert np.all(OMNI.gain(np.linspace(-4, 4, 9)) == 1.0)
    assert not OMNI.directional


def test_sectorized_levels():
    s = Sectorized()
    assert s.gain(0.0) == 10.0
    assert s.gain(math.radians(29.9)) == 10.0
    assert s.gain(math.radians(30.1)) == pytest.approx(0.1)
    assert s.gain(math.radians(180)) == pytest.approx(0.1)
    assert s.gain(2 * math.pi) == 10.0
    with pytest.raises(ValueError):
        Sectorized(main_gain=0.1, side_gain=1.0)
    with pytest.raises(ValueError):
        Sectorized(beamwidth=0.0)


def test_uniform_array_peak_and_null():
    u = UniformArray(4, 0.5)
    assert u.gain(0.0) == pytest.approx(4.0)
    # first null of a 4-element half-wavelength array: sin(a) = 0.5
    assert u.gain(math.radians(30)) == pytest.approx(0.0, abs=1e-12)
    assert u.gain(math.radians(90)) == pytest.approx(0.0, abs=1e-12)


def test_uniform_array_even_and_removable_singularity():
    u = UniformArray(4, 0.5)
    a = np.linspace(0, math.pi, 181)
    assert np.allclose(u.gain(a), u.gain(-a))
    # sin(u) = 0 at a = pi; the limit of the array factor there is 1
    assert u.gain(math.pi) == pytest.approx(4.0)
    assert u.gain(math.pi - 1e-9) == pytest.approx(4.0, rel=1e-6)
    assert UniformArray(1, 0.5).gain(0.7) == pytest.approx(1.0)


def test_uniform_array_mean_gain():
    # average over the full circle of N|AF|^2 for d = 1/2 equals 1 + sum of J0 cross terms
    u = UniformArray(4, 0.5)
    a = np.linspace(-math.pi, math.pi, 200001)
    mean = trapezoid(u.gain(a), a) / (2 * math.pi)
    n = 4
    expected = 1 + (2 / n) * sum((n - m) * j0(math.pi * m) for m in range(1, n))
    assert mean == pytest.approx(expected, rel=1e-6)


def test_tabulated_pattern(tmp_path):
    p = tmp_path / "pat.csv"
    p.write_text("angle_deg,gain\n-180,0.5\n0,2.0\n180,0.5\n")
    t = TabulatedPattern.from_csv(p)
    assert t.gain(0.0) == pytest.approx(2.0)
    assert t.gain(math.radians(90)) == pytest.approx(1.25)
    assert t.gain(math.radians(-90)) == pytest.approx(1.25)
    assert t.gain(math.radians(270)) == pytest.approx(1.25)
    assert t.directional


def test_tabulated_pattern_validation(tmp_path):
    with pytest.raises(ValueError, match="cover"):
        TabulatedPattern(np.array([-90.0, 90.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError, match="increasing"):
        TabulatedPattern(np.array([-180.0, 0.0, 0.0, 180.0]), np.ones(4))
    bad = tmp_path / "bad.csv"
    bad.write_text("-180,1\n0,x\n180,1\n")
    with pytest.raises(ValueError, match="bad pattern row"):
        TabulatedPattern.from_csv(bad)


def test_tx_gain_pointing_at_receiver():
    s = TransmitterSite.from_degrees(5, 40)
    sec = Sectorized()
    # boresight pointing back at the origin
    assert tx_gain_toward_receiver(s, s.phi + math.pi, sec) == 10.0
    assert tx_gain_toward_receiver(s, s.phi, sec) == pytest.approx(0.1)
    g = tx_gain_toward_receiver(s, np.array([s.phi + math.pi, s.phi]), sec)
    assert g.tolist() == pytest.approx([10.0, 0.1])


def test_received_power():
    s = TransmitterSite(5, 0.0)
    tx = OrientedTransmitter(s, math.pi, Sectorized())
    assert received_power(tx, OMNI, 2.0) == pytest.approx(10.0 / 25.0)
    assert received_power(tx, Sectorized(), 2.0, rx_boresight=0.0) == pytest.approx(100.0 / 25.0)
    assert received_power(OrientedTransmitter(s, 0.0), OMNI, 2.0) == pytest.approx(0.04)
    assert gain(OMNI, 0.2) == 1.0


def test_orientation_uniform_and_deterministic():
    x = draw_orientation(substream(1, Purpose.ORIENTATION), 200_000)
    assert np.all((x >= 0) & (x < 2 * math.pi))
    assert x.mean() == pytest.approx(math.pi, abs=0.02)
    assert stats.kstest(x / (2 * math.pi), "uniform").pvalue > 1e-3
    y = draw_orientation(substream(1, Purpose.ORIENTATION), 200_000)
    assert np.array_equal(x, y)
