"""End-to-end acceptance checks; a PASS/FAIL line per criterion is printed in the summary."""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from corrblock.analysis import RadioConfig, analytic_curves
from corrblock.antenna import Omni, Sectorized
from corrblock.blocking import BlockageField, PairBlockingStats, correlation, joint_pmf, pair_stats
from corrblock.cdf import ks_distance
from corrblock.cli import main
from corrblock.config import load_config
from corrblock.geometry import BlockingRegion, CircleRegion, TransmitterSite, overlap_area
from corrblock.montecarlo import McControls, estimate_pair_blocking, simulate_random_network, simulate_sinr
from corrblock.sinr import linear_to_db

from oracles import in_rectangle, mc_area

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
DISC = CircleRegion(6.0)


@pytest.fixture
def criterion(record_property):
    def start(name):
        record_property("criterion", name)
        t0 = time.perf_counter()

        def finish(detail, limit):
            elapsed = time.perf_counter() - t0
            record_property("detail", f"{detail}; {elapsed:.2f} s (limit {limit:g} s)")
            return elapsed

        return finish

    return start


def _plateau_midpoints(cdf):
    b = cdf.breakpoints
    return np.sqrt(b[:-1] * b[1:])


def test_criterion_01_breakpoints(criterion):
    done = criterion("1 breakpoint reproduction")
    fld = BlockageField(20, 1.0, DISC)
    curves = analytic_curves(TransmitterSite(5, 0), TransmitterSite.from_degrees(5, 25), fld, RadioConfig())
    db = linear_to_db(curves.correlated.breakpoints)
    elapsed = done("steps at " + ", ".join(f"{x:.2f}" for x in db) + " dB", 1)
    assert len(db) == 3
    assert np.all(np.abs(db - [9.5, 11.5, 15.0]) <= 0.1)
    assert db.round(2).tolist() == [9.52, 11.45, 15.0]
    assert elapsed < 1


def test_criterion_02_joint_pmf_identities(criterion):
    done = criterion("2 joint pmf identities")
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        p1, p2 = rng.uniform(0.01, 0.99, 2)
        lo, hi = PairBlockingStats.from_marginals(p1, p2, 0.0).bounds
        rho = rng.uniform(lo, hi)
        s = PairBlockingStats.from_marginals(p1, p2, rho)
        pmf = joint_pmf(s)
        errs = (
            abs(sum(pmf.as_tuple()) - 1.0),
            abs(pmf.p1 - p1),
            abs(pmf.p2 - p2),
            abs(pmf.p11 - (p1 * p2 + rho * s.h)),
            abs(correlation(pmf.p00, p1, p2) - rho),
        )
        worst = max(worst, *errs)
    elapsed = done(f"1000 cases, worst error {worst:.1e}", 1)
    assert worst <= 1e-12
    assert elapsed < 1


def test_criterion_03_symmetric_gap(criterion):
    done = criterion("3 symmetric plateau gap")
    rng = np.random.default_rng(33)
    worst = 0.0
    n = 0
    while n < 100:
        R = rng.uniform(1.0, 5.5)
        a = TransmitterSite(R, rng.uniform(0, 2 * math.pi))
        b = TransmitterSite(R, a.phi + rng.uniform(0, math.pi))
        fld = BlockageField(int(rng.integers(1, 30)), rng.uniform(0.2, 3.0), DISC)
        radio = RadioConfig(snr_db=rng.uniform(0, 30), alpha=rng.uniform(2, 4))
        curves = analytic_curves(a, b, fld, radio, str(rng.choice(["rectangle", "exact"])))
        st = curves.blocking.stats
        if st is None:
            continue
        n += 1
        g = st.rho * st.p1 * st.q1
        mid = _plateau_midpoints(curves.independent)
        diff = curves.correlated(mid) - curves.independent(mid)
        worst = max(worst, abs(diff[0] - g), abs(diff[1] + g))
    elapsed = done(f"100 scenarios, worst error {worst:.1e}", 1)
    assert worst <= 1e-12
    assert elapsed < 1


def test_criterion_04_rho_oracles(criterion):
    done = criterion("4 rho closed forms")
    s = TransmitterSite(5, 0.4)
    coincident = [pair_stats(s, s, BlockageField(k, w, DISC), m).rho
                  for k in (1, 5, 20) for w in (1.0, 3.0) for m in ("rectangle", "exact")]
    fld = BlockageField(1, 1.0, DISC)
    st = pair_stats(TransmitterSite(5, 0), TransmitterSite(5, math.pi), fld, "rectangle")
    ref = -st.p1 / st.q1
    elapsed = done(f"coincident rho {set(coincident)}, disjoint rho {st.rho:.6f} vs {ref:.6f}", 1)
    assert all(r == 1.0 for r in coincident)
    assert abs(st.rho - ref) <= 1e-9
    assert elapsed < 1


def test_criterion_05_blocking_mc(criterion):
    done = criterion("5 analytic vs MC blocking")
    worst_rect = worst_exact = 0.0
    controls = McControls(100_000, master_seed=3)
    a = TransmitterSite(5, 0)
    for w in (1.0, 2.0, 3.0):
        fld = BlockageField(1, w, DISC)
        for th in range(0, 181, 15):
            b = TransmitterSite.from_degrees(5, th)
            for model in ("rectangle", "exact"):
                st = pair_stats(a, b, fld, model)
                est = estimate_pair_blocking(a, b, fld, controls, predicate=model)
                z = 0.0
                for hat, ref, se in ((est.p1_hat, st.p1, est.se_p1), (est.p2_hat, st.p2, est.se_p2),
                                     (est.rho_hat, st.rho, est.se_rho)):
                    if hat != ref:
                        z = max(z, abs(hat - ref) / se)
                if model == "rectangle":
                    worst_rect = max(worst_rect, z)
                else:
                    worst_exact = max(worst_exact, z)
    elapsed = done(f"39 scenarios, worst |z| rectangle {worst_rect:.2f}, exact (reported) {worst_exact:.2f}", 60)
    assert worst_rect < 3
    assert elapsed < 60


def test_criterion_06_sinr_mc(criterion):
    done = criterion("6 analytic vs MC SINR")
    a, b = TransmitterSite(5, 0), TransmitterSite.from_degrees(5, 25)
    radio = RadioConfig()
    rows = []
    ok = True
    for k in (2, 5):
        for w in (2.0, 3.0):
            fld = BlockageField(k, w, DISC)
            curves = analytic_curves(a, b, fld, radio, "exact")
            emp = simulate_sinr(a, b, fld, radio, McControls(1_000_000, master_seed=7), predicate="exact")
            st = curves.blocking.stats
            rpq = st.rho * st.p1 * st.q1
            ks_c, ks_i = ks_distance(emp, curves.correlated), ks_distance(emp, curves.independent)
            ok &= ks_c <= 0.01 and ks_i > 0.5 * rpq
            rows.append(f"K{k}W{w:g} ks {ks_c:.4f}/{ks_i:.4f} rpq {rpq:.4f}")
    elapsed = done("; ".join(rows), 120)
    assert ok
    assert elapsed < 120


def test_criterion_07_monotone_gap(criterion):
    done = criterion("7 monotone gaps")
    a, b = TransmitterSite(5, 0), TransmitterSite.from_degrees(5, 25)
    radio = RadioConfig()
    ok = True
    rows = []
    for model in ("rectangle", "exact"):
        g = {(k, w): analytic_curves(a, b, BlockageField(k, w, DISC), radio, model).gap
             for k in (2, 5) for w in (2.0, 3.0)}
        ok &= g[2, 2.0] < g[2, 3.0] and g[5, 2.0] < g[5, 3.0]
        ok &= g[2, 2.0] < g[5, 2.0] and g[2, 3.0] < g[5, 3.0]
        rows.append(model + " " + " ".join(f"K{k}W{w:g}={v:.4f}" for (k, w), v in g.items()))
    elapsed = done("; ".join(rows), 5)
    assert ok
    assert elapsed < 5


def test_criterion_08_thread_determinism(criterion, tmp_path):
    done = criterion("8 thread determinism")
    cfg = str(CONFIGS / "simulate_grid.json")
    for threads in ("1", "8"):
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / f"t{threads}"),
                     "--threads", threads, "--seed", "123"]) == 0
    files = sorted(p.name for p in (tmp_path / "t1").glob("*.csv"))
    same = [(tmp_path / "t1" / f).read_bytes() == (tmp_path / "t8" / f).read_bytes() for f in files]
    elapsed = done(f"{sum(same)}/{len(files)} CSVs byte-identical", 120)
    assert files and all(same)
    assert elapsed < 120


def test_criterion_09_directional_pipeline(criterion):
    done = criterion("9 antenna pipeline properties")
    # (a) the directional pipeline with isotropic antennas recovers the omni closed form
    a, b = TransmitterSite(5, 0), TransmitterSite.from_degrees(5, 25)
    fld = BlockageField(5, 2.0, DISC)
    ref = analytic_curves(a, b, fld, RadioConfig(), "exact").correlated
    ks_a = 0.0
    # a unit-gain sectorized pattern still takes the random-orientation path
    for pattern in (Omni(), Sectorized(1.0, 1.0)):
        radio = RadioConfig(rx_pattern=pattern, tx_pattern=pattern)
        res = simulate_random_network(DISC, fld, radio, McControls(1_000_000, master_seed=11), placements=[(a, b)])
        ks_a = max(ks_a, ks_distance(res.empirical, ref), ks_distance(res.correlated, ref))

    # (b) pooling over random placements tightens the correlated/independent gap
    fixed_cfg = load_config(CONFIGS / "sectorized_fixed.json")
    net_cfg = load_config(CONFIGS / "sectorized_random.json")
    s1, s2 = fixed_cfg.site_pair()
    assert (fixed_cfg.blockage_count, fixed_cfg.blockage_width) == (net_cfg.blockage_count, net_cfg.blockage_width)
    fixed_gap = analytic_curves(s1, s2, fixed_cfg.field, fixed_cfg.radio, fixed_cfg.region_model,
                                n_orient=fixed_cfg.orientation_grid).gap
    controls = McControls(net_cfg.mc.trials, net_cfg.mc.realizations, net_cfg.mc.seed, threads=4)
    net = simulate_random_network(net_cfg.region, net_cfg.field, net_cfg.radio, controls,
                                  net_cfg.region_model, net_cfg.mc.predicate, net_cfg.orientation_grid)
    elapsed = done(f"(a) KS {ks_a:.4f}; (b) pooled gap {net.gap:.4f} vs fixed {fixed_gap:.4f}", 180)
    assert ks_a <= 0.01
    assert net.gap < fixed_gap
    assert elapsed < 180


def test_criterion_10_overlap_oracle(criterion):
    done = criterion("10 overlap geometry oracles")
    R, W, th = 5.0, 2.0, math.radians(25)
    v = overlap_area(BlockingRegion(TransmitterSite(R, 0), W), BlockingRegion(TransmitterSite(R, th), W))

    def both(p):
        return in_rectangle(p, R, 0.0, W) & in_rectangle(p, R, th, W)

    est, se = mc_area(both, (0.0, -W / 2, R, W / 2), n=10**7, seed=20241)
    rel = abs(v - est) / est
    thetas = np.linspace(0, math.pi, 25)
    base = BlockingRegion(TransmitterSite(R, 0), W)
    vs = [overlap_area(base, BlockingRegion(TransmitterSite(R, t), W)) for t in thetas]
    monotone = all(x >= y for x, y in zip(vs, vs[1:]))
    elapsed = done(f"v {v:.5f} vs MC {est:.5f} +- {se:.5f} (rel {rel:.2%}); non-increasing {monotone}", 30)
    assert rel <= 0.005
    assert monotone
    assert elapsed < 30
