"""JSON scenario configuration.

Angles are in degrees and gains/SNR in dB in the file; everything is
converted to radians and linear units on load. Schema (all keys optional
unless noted)::

    {
      "region":       {"radius": 6.0} | {"polygon": [[x, y], ...]},
      "area":         null,                  # overrides A in closed forms only
      "sites":        [[R1, phi1_deg], [R2, phi2_deg]] | "random:2",
      "omega0":       1.0,
      "snr_db":       15.0,
      "alpha":        2.0,
      "blockage":     {"count": K, "width": W},        # required
      "region_model": "rectangle" | "exact",
      "rho_override": null | r | [r, ...] | {"start": a, "stop": b, "step": s},
      "antennas": {
        "rx": PATTERN, "tx": PATTERN,
        "rx_boresight_deg": 0.0,
        "orientation_grid": 360
      },
      "mc":     {"trials": 100000, "realizations": 1000, "seed": 0, "predicate": "exact"},
      "sweep":  {"theta_deg": [..] | {"start", "stop", "step"},
                 "widths": [..] | "counts": [..], "mc": false},
      "grid":   {"count": [..], "width": [..]},
      "output": {"dir": "out", "prefix": "run"}
    }

    PATTERN = {"type": "omni"}
            | {"type": "sectorized", "main_gain_db": 10, "side_gain_db": -10, "beamwidth_deg": 60}
            | {"type": "uniform_array", "elements": 4, "spacing": 0.5}
            | {"type": "tabulated", "path": "pattern.csv"}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from .analysis import RadioConfig
from .antenna import OMNI, AntennaPattern, Omni, Sectorized, TabulatedPattern, UniformArray
from .blocking import BlockageField
from .errors import ConfigError, CorrBlockError
from .geometry import REGION_MODELS, CircleRegion, DeploymentRegion, PolygonRegion, TransmitterSite
from .sinr import db_to_linear


@dataclass(frozen=True)
class SweepConfig:
    theta_deg: tuple[float, ...] = tuple(range(0, 181, 15))
    widths: tuple[float, ...] | None = None
    counts: tuple[int, ...] | None = None
    mc: bool = False


@dataclass(frozen=True)
class OutputConfig:
    dir: Path = Path("out")
    prefix: str = "run"


@dataclass(frozen=True)
class MonteCarloConfig:
    trials: int = 100_000
    realizations: int = 1000
    seed: int = 0
    predicate: str = "exact"


@dataclass(frozen=True)
class ScenarioConfig:
    region: DeploymentRegion
    blockage_count: int
    blockage_width: float
    sites: tuple[TransmitterSite, ...] | None = None
    random_sites: int = 0
    area: float | None = None
    radio: RadioConfig = RadioConfig()
    region_model: str = "rectangle"
    rho_override: tuple[float, ...] | None = None
    orientation_grid: int = 360
    mc: MonteCarloConfig = MonteCarloConfig()
    sweep: SweepConfig = SweepConfig()
    grid: tuple[tuple[int, float], ...] | None = None
    output: OutputConfig = OutputConfig()

    @property
    def field(self) -> BlockageField:
        return self.field_for(self.blockage_count, self.blockage_width)

    def field_for(self, count: int, width: float) -> BlockageField:
        return BlockageField(count, width, self.region, self.area)

    def site_pair(self) -> tuple[TransmitterSite, TransmitterSite]:
        if self.sites is None or len(self.sites) != 2:
            raise ConfigError("this command needs exactly two fixed sites")
        return self.sites[0], self.sites[1]

    def with_overrides(self, *, seed: int | None = None, out: str | None = None,
                       region_model: str | None = None) -> "ScenarioConfig":
        cfg = self
        if seed is not None:
            cfg = replace(cfg, mc=replace(cfg.mc, seed=seed))
        if out is not None:
            cfg = replace(cfg, output=replace(cfg.output, dir=Path(out)))
        if region_model is not None:
            cfg = replace(cfg, region_model=_model(region_model, "region_model"))
        return cfg


def _model(value, name):
    if value not in REGION_MODELS:
        raise ConfigError(f"{name} must be one of {REGION_MODELS}, got {value!r}")
    return value


def _num(d: dict, key: str, default=None, *, positive=False, integer=False):
    if key not in d or d[key] is None:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    val = d[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {val!r}")
    if integer and int(val) != val:
        raise ConfigError(f"{key!r} must be an integer, got {val!r}")
    if positive and not val > 0:
        raise ConfigError(f"{key!r} must be > 0, got {val!r}")
    return int(val) if integer else float(val)


def _range_or_list(spec, name) -> tuple[float, ...]:
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return (float(spec),)
    if isinstance(spec, list):
        return tuple(float(_num({"v": v}, "v")) for v in spec)
    if isinstance(spec, dict):
        start, stop, step = (_num(spec, k) for k in ("start", "stop", "step"))
        if step <= 0 or stop < start:
            raise ConfigError(f"{name}: need step > 0 and stop >= start")
        n = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 10) for i in range(n))
    raise ConfigError(f"{name} must be a number, a list or a start/stop/step range")


def parse_pattern(spec: dict | None, base_dir: Path) -> AntennaPattern:
    if spec is None:
        return OMNI
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"antenna pattern needs a 'type', got {spec!r}")
    kind = spec["type"]
    try:
        if kind == "omni":
            return Omni()
        if kind == "sectorized":
            return Sectorized(
                db_to_linear(_num(spec, "main_gain_db", 10.0)),
                db_to_linear(_num(spec, "side_gain_db", -10.0)),
                math.radians(_num(spec, "beamwidth_deg", 60.0)),
            )
        if kind == "uniform_array":
            return UniformArray(_num(spec, "elements", 4, integer=True), _num(spec, "spacing", 0.5))
        if kind == "tabulated":
            path = Path(spec.get("path", ""))
            if not path.is_absolute():
                path = base_dir / path
            return TabulatedPattern.from_csv(path)
    except OSError as exc:
        raise ConfigError(f"cannot read antenna table: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, CorrBlockError):
            raise
        raise ConfigError(f"bad {kind} antenna pattern: {exc}") from exc
    raise ConfigError(f"unknown antenna type {kind!r}")


def _parse_region(spec) -> DeploymentRegion:
    if not isinstance(spec, dict):
        raise ConfigError("region must be an object")
    try:
        if "radius" in spec:
            return CircleRegion(_num(spec, "radius", positive=True))
        if "polygon" in spec:
            return PolygonRegion.from_vertices(spec["polygon"])
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad region: {exc}") from exc
    raise ConfigError("region needs 'radius' or 'polygon'")


def _parse_sites(spec):
    if spec is None:
        return None, 0
    if isinstance(spec, str):
        if not spec.startswith("random:"):
            raise ConfigError(f"sites string must look like 'random:n', got {spec!r}")
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad random site count in {spec!r}") from None
        if n != 2:
            raise ConfigError("only two interferers are supported")
        return None, n
    if not isinstance(spec, list) or len(spec) != 2:
        raise ConfigError("sites must list exactly two [R, phi_deg] pairs")
    sites = []
    for item in spec:
        if not isinstance(item, list) or len(item) != 2:
            raise ConfigError(f"site must be [R, phi_deg], got {item!r}")
        r = _num({"r": item[0]}, "r", positive=True)
        sites.append(TransmitterSite.from_degrees(r, _num({"p": item[1]}, "p")))
    return tuple(sites), 0


def parse_config(data: dict[str, Any], base_dir: Path | str = ".") -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    base_dir = Path(base_dir)
    region = _parse_region(data.get("region", {"radius": 6.0}))
    sites, n_random = _parse_sites(data.get("sites"))

    blk = data.get("blockage")
    if not isinstance(blk, dict):
        raise ConfigError("missing 'blockage' object with count and width")
    count = _num(blk, "count", integer=True)
    if count < 0:
        raise ConfigError("blockage count must be >= 0")
    width = _num(blk, "width", positive=True)

    ant = data.get("antennas") or {}
    radio = RadioConfig(
        omega0=_num(data, "omega0", 1.0, positive=True),
        snr_db=_num(data, "snr_db", 15.0),
        alpha=_num(data, "alpha", 2.0, positive=True),
        rx_pattern=parse_pattern(ant.get("rx"), base_dir),
        tx_pattern=parse_pattern(ant.get("tx"), base_dir),
        rx_boresight=math.radians(_num(ant, "rx_boresight_deg", 0.0)),
    )

    rho = data.get("rho_override")
    rho_override = None if rho is None else _range_or_list(rho, "rho_override")

    mc = data.get("mc") or {}
    mc_cfg = MonteCarloConfig(
        trials=_num(mc, "trials", 100_000, positive=True, integer=True),
        realizations=_num(mc, "realizations", 1000, positive=True, integer=True),
        seed=_num(mc, "seed", 0, integer=True),
        predicate=_model(mc.get("predicate", "exact"), "mc.predicate"),
    )
    if not 0 <= mc_cfg.seed < 2**64:
        raise ConfigError("mc.seed must be an unsigned 64-bit integer")

    sw = data.get("sweep") or {}
    if "widths" in sw and "counts" in sw:
        raise ConfigError("sweep takes either 'widths' or 'counts', not both")
    sweep = SweepConfig(
        theta_deg=_range_or_list(sw["theta_deg"], "sweep.theta_deg") if "theta_deg" in sw else SweepConfig.theta_deg,
        widths=_range_or_list(sw["widths"], "sweep.widths") if "widths" in sw else None,
        counts=tuple(int(k) for k in _range_or_list(sw["counts"], "sweep.counts")) if "counts" in sw else None,
        mc=bool(sw.get("mc", False)),
    )

    grid = None
    if data.get("grid") is not None:
        g = data["grid"]
        counts = [int(k) for k in _range_or_list(g.get("count", count), "grid.count")]
        widths = list(_range_or_list(g.get("width", width), "grid.width"))
        grid = tuple((k, w) for k in counts for w in widths)

    out = data.get("output") or {}
    area = data.get("area")
    return ScenarioConfig(
        region=region,
        blockage_count=count,
        blockage_width=width,
        sites=sites,
        random_sites=n_random,
        area=None if area is None else _num(data, "area", positive=True),
        radio=radio,
        region_model=_model(data.get("region_model", "rectangle"), "region_model"),
        rho_override=rho_override,
        orientation_grid=_num(ant, "orientation_grid", 360, positive=True, integer=True),
        mc=mc_cfg,
        sweep=sweep,
        grid=grid,
        output=OutputConfig(Path(out.get("dir", "out")), str(out.get("prefix", "run"))),
    )


def load_config(path: str | Path) -> ScenarioConfig:
    """Read a scenario file. ``OSError`` propagates; bad content raises ConfigError."""
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(data, path.parent)
