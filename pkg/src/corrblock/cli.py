"""Command-line entry point.

Four pipelines, each writing one ``beta_db,cdf`` CSV per curve plus a JSON
sidecar into the output directory::

    corrblock analyze        --config rho_override.json
    corrblock rho-sweep      --config rho_vs_angle_width.json
    corrblock simulate       --config simulate_grid.json --threads 8
    corrblock random-network --config sectorized_random.json

Exit codes: 0 success, 2 config error, 3 infeasible scenario, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from .analysis import AnalyticCurves, analytic_curves, angular_separation, pair_sinr_cdf
from .blocking import blocking_model, pair_geometry
from .cdf import StepCdf, ks_distance
from .config import ScenarioConfig, load_config
from .errors import ConfigError, GeometryError, InfeasibleScenarioError
from .geometry import TransmitterSite
from .montecarlo import McControls, estimate_pair_blocking, simulate_random_network, simulate_sinr
from .sinr import consistency_error, linear_to_db

log = logging.getLogger("corrblock")

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_IO = 0, 2, 3, 4


# --------------------------------------------------------------------------
# output helpers


def write_curve(path: Path, cdf: StepCdf) -> None:
    data = np.column_stack((linear_to_db(cdf.breakpoints), cdf.values))
    np.savetxt(path, data, fmt="%.12g", delimiter=",", header="beta_db,cdf", comments="")


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def _clean(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else x


def _check_curve(cfg: ScenarioConfig, site1, site2, cdf: StepCdf, pmf) -> None:
    """Refuse to emit an analytic curve that breaks the F_SINR / F_Z identity."""
    if cfg.radio.random_orientation:
        return
    powers = cfg.radio.fixed_powers(site1, site2)
    lo, hi = cdf.breakpoints[0], cdf.breakpoints[-1]
    betas = np.random.default_rng(0).uniform(0.5 * lo, 2.0 * hi, 1000)
    err = consistency_error(cdf, powers, pmf, betas)
    if err > 1e-12:
        raise RuntimeError(f"analytic CDF failed its consistency check (error {err:.3g})")


def _site_json(s: TransmitterSite) -> dict:
    return {"r": s.r, "phi_deg": math.degrees(s.phi)}


def _blocking_json(curves: AnalyticCurves) -> dict:
    bm = curves.blocking
    return {
        "a1": bm.geometry.a1,
        "a2": bm.geometry.a2,
        "v": bm.geometry.v,
        "p1": bm.p1,
        "p2": bm.p2,
        "p00": bm.p00,
        "rho": None if bm.stats is None else bm.stats.rho,
    }


def _controls(cfg: ScenarioConfig, threads: int) -> McControls:
    return McControls(cfg.mc.trials, cfg.mc.realizations, cfg.mc.seed, threads)


# --------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: ScenarioConfig, threads: int = 1) -> dict:
    s1, s2 = cfg.site_pair()
    fld = cfg.field
    out = cfg.output.dir
    curves = []
    rhos = cfg.rho_override if cfg.rho_override is not None else (None,)
    for rho in rhos:
        bm = blocking_model(s1, s2, fld, cfg.region_model, rho)
        cdf = pair_sinr_cdf(s1, s2, cfg.radio, bm.correlated, cfg.orientation_grid)
        _check_curve(cfg, s1, s2, cdf, bm.correlated)
        name = f"{cfg.output.prefix}.csv" if rho is None else f"{cfg.output.prefix}_rho{rho:+.2f}.csv"
        write_curve(out / name, cdf)
        curves.append({
            "file": name,
            "rho": None if bm.stats is None else bm.stats.rho,
            "breakpoints_db": linear_to_db(cdf.breakpoints).tolist(),
            "values": cdf.values.tolist(),
        })
    summary = {
        "command": "analyze",
        "region_model": cfg.region_model,
        "sites": [_site_json(s1), _site_json(s2)],
        "K": fld.count,
        "W": fld.width,
        "A": fld.area,
        "curves": curves,
    }
    write_json(out / f"{cfg.output.prefix}_summary.json", summary)
    return summary


def cmd_rho_sweep(cfg: ScenarioConfig, threads: int = 1) -> dict:
    s1, s2 = cfg.site_pair()
    if s1.r != s2.r:
        log.warning("rho sweep with unequal distances R1=%g, R2=%g", s1.r, s2.r)
    sw = cfg.sweep
    if sw.widths is not None:
        cases = [(f"W{w:g}", cfg.blockage_count, w) for w in sw.widths]
    elif sw.counts is not None:
        cases = [(f"K{k}", k, cfg.blockage_width) for k in sw.counts]
    else:
        cases = [(f"K{cfg.blockage_count}_W{cfg.blockage_width:g}", cfg.blockage_count, cfg.blockage_width)]
    out = cfg.output.dir
    files = []
    for tag, k, w in cases:
        fld = cfg.field_for(k, w)
        rows = []
        for th in sw.theta_deg:
            a = TransmitterSite(s1.r, s1.phi)
            b = TransmitterSite(s2.r, s1.phi + math.radians(th))
            bm = blocking_model(a, b, fld, cfg.region_model)
            if bm.stats is None:
                raise InfeasibleScenarioError(f"degenerate marginal for K={k}, W={w:g}; rho undefined")
            row = [th, bm.stats.rho]
            if sw.mc:
                est = estimate_pair_blocking(a, b, fld, _controls(cfg, threads), cfg.mc.predicate)
                row += [est.rho_hat, est.se_rho]
            rows.append(row)
        header = "theta_deg,rho" + (",rho_mc,rho_se" if sw.mc else "")
        name = f"{cfg.output.prefix}_{tag}.csv"
        np.savetxt(out / name, np.array(rows), fmt="%.12g", delimiter=",", header=header, comments="")
        files.append({"file": name, "K": k, "W": w})
    summary = {"command": "rho-sweep", "region_model": cfg.region_model, "mc_predicate": cfg.mc.predicate,
               "R1": s1.r, "R2": s2.r, "curves": files}
    write_json(out / f"{cfg.output.prefix}_summary.json", summary)
    return summary


def cmd_simulate(cfg: ScenarioConfig, threads: int = 1) -> dict:
    s1, s2 = cfg.site_pair()
    out = cfg.output.dir
    cases = cfg.grid or ((cfg.blockage_count, cfg.blockage_width),)
    controls = _controls(cfg, threads)
    results = []
    for k, w in cases:
        fld = cfg.field_for(k, w)
        tag = cfg.output.prefix if cfg.grid is None else f"{cfg.output.prefix}_K{k}_W{w:g}"
        curves = analytic_curves(s1, s2, fld, cfg.radio, cfg.region_model, n_orient=cfg.orientation_grid)
        _check_curve(cfg, s1, s2, curves.correlated, curves.blocking.correlated)
        _check_curve(cfg, s1, s2, curves.independent, curves.blocking.independent)
        emp = simulate_sinr(s1, s2, fld, cfg.radio, controls, cfg.mc.predicate)
        write_curve(out / f"{tag}_empirical.csv", emp)
        write_curve(out / f"{tag}_correlated.csv", curves.correlated)
        write_curve(out / f"{tag}_independent.csv", curves.independent)
        other = "exact" if cfg.region_model == "rectangle" else "rectangle"
        g_other = pair_geometry(s1, s2, w, other)
        summary = {
            "command": "simulate",
            "tag": tag,
            "K": k,
            "W": w,
            "A": fld.area,
            "sites": [_site_json(s1), _site_json(s2)],
            "theta_deg": math.degrees(angular_separation(s1, s2)),
            "region_model": cfg.region_model,
            "mc_predicate": cfg.mc.predicate,
            "trials": controls.trials,
            "seed": controls.master_seed,
            **_blocking_json(curves),
            f"a1_{other}": g_other.a1,
            f"a2_{other}": g_other.a2,
            f"v_{other}": g_other.v,
            "ks_correlated": ks_distance(emp, curves.correlated),
            "ks_independent": ks_distance(emp, curves.independent),
            "gap": curves.gap,
        }
        write_json(out / f"{tag}_summary.json", summary)
        results.append(summary)
    return {"command": "simulate", "scenarios": results}


def cmd_random_network(cfg: ScenarioConfig, threads: int = 1) -> dict:
    if cfg.random_sites != 2:
        raise ConfigError("random-network needs sites = \"random:2\"")
    out = cfg.output.dir
    fld = cfg.field
    res = simulate_random_network(cfg.region, fld, cfg.radio, _controls(cfg, threads),
                                  cfg.region_model, cfg.mc.predicate, cfg.orientation_grid)
    prefix = cfg.output.prefix
    write_curve(out / f"{prefix}_empirical.csv", res.empirical)
    write_curve(out / f"{prefix}_correlated.csv", res.correlated)
    write_curve(out / f"{prefix}_independent.csv", res.independent)
    rhos = [c.blocking.stats.rho for c in res.realizations if c.blocking.stats is not None]
    summary = {
        "command": "random-network",
        "K": fld.count,
        "W": fld.width,
        "A": fld.area,
        "region_model": cfg.region_model,
        "mc_predicate": cfg.mc.predicate,
        "realizations": len(res.realizations),
        "trials_per_realization": cfg.mc.trials,
        "seed": cfg.mc.seed,
        "ks_correlated": ks_distance(res.empirical, res.correlated),
        "ks_independent": ks_distance(res.empirical, res.independent),
        "gap": res.gap,
        "rho_mean": float(np.mean(rhos)) if rhos else None,
    }
    write_json(out / f"{prefix}_summary.json", summary)
    return summary


COMMANDS = {
    "analyze": cmd_analyze,
    "rho-sweep": cmd_rho_sweep,
    "simulate": cmd_simulate,
    "random-network": cmd_random_network,
}


def _u64(text: str) -> int:
    val = int(text, 0)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="scenario JSON file")
    common.add_argument("--seed", type=_u64, help="master seed (overrides the config)")
    common.add_argument("--out", help="output directory (overrides the config)")
    common.add_argument("--threads", type=_positive_int,
                        help="worker threads; never changes results (default: $CORRBLOCK_THREADS or 1)")
    common.add_argument("--region-model", choices=("rectangle", "exact"),
                        help="blocking-region model for the closed forms")
    parser = argparse.ArgumentParser(prog="corrblock", description="Correlated blocking SINR analysis.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="analytic SINR CDFs, optionally sweeping rho")
    sub.add_parser("rho-sweep", parents=[common], help="correlation coefficient versus angular separation")
    sub.add_parser("simulate", parents=[common], help="Monte-Carlo vs analytic CDFs for fixed sites")
    sub.add_parser("random-network", parents=[common], help="CDFs pooled over random interferer placements")
    return parser


def _threads(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("CORRBLOCK_THREADS")
    if env:
        try:
            return _positive_int(env)
        except (ValueError, argparse.ArgumentTypeError):
            raise ConfigError(f"CORRBLOCK_THREADS must be a positive integer, got {env!r}") from None
    return 1


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        threads = _threads(args.threads)
        cfg = load_config(args.config).with_overrides(seed=args.seed, out=args.out, region_model=args.region_model)
        cfg.output.dir.mkdir(parents=True, exist_ok=True)
        summary = COMMANDS[args.command](cfg, threads)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (InfeasibleScenarioError, GeometryError) as exc:
        log.error("infeasible scenario: %s", exc)
        return EXIT_INFEASIBLE
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    log.info("%s: wrote results to %s", args.command, cfg.output.dir)
    if args.command == "simulate":
        for s in summary["scenarios"]:
            log.info("%s: rho=%s ks_correlated=%.4g ks_independent=%.4g", s["tag"], _clean(s["rho"]),
                     s["ks_correlated"], s["ks_independent"])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
