"""Blocking geometry for line-segment blockages.

The receiver sits at the origin. A blockage is a segment of width ``W``
centred at a point and oriented perpendicular to the ray from the receiver
to that point. A transmitter is blocked when some blockage segment cuts the
straight path between it and the receiver.

Two models of the blocking region of a transmitter are provided:

``"exact"``
    the set of blockage centres whose segment really intersects the path;
``"rectangle"``
    the ``R x W`` rectangle along the path, whose area is exactly ``W * R``.

All angles are in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence, Union

import numpy as np
from scipy import integrate, optimize

from .errors import GeometryError

RegionModel = Literal["rectangle", "exact"]
REGION_MODELS = ("rectangle", "exact")

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


def wrap_angle(angle):
    """Wrap an angle (scalar or array) into ``[-pi, pi]``."""
    if np.ndim(angle) == 0:
        return math.remainder(float(angle), TWO_PI)
    return np.remainder(np.asarray(angle, dtype=float) + math.pi, TWO_PI) - math.pi


def _check_model(model: str) -> None:
    if model not in REGION_MODELS:
        raise GeometryError(f"unknown region model {model!r}; expected one of {REGION_MODELS}")


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    @classmethod
    def from_polar(cls, r: float, phi: float) -> "Point2":
        return cls(r * math.cos(phi), r * math.sin(phi))

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi(self) -> float:
        """Azimuth in ``[0, 2*pi)``."""
        return math.atan2(self.y, self.x) % TWO_PI


@dataclass(frozen=True)
class TransmitterSite:
    """Polar placement of a transmitter relative to the receiver."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not (self.r >= 0.0 and math.isfinite(self.r)):
            raise GeometryError(f"site distance must be finite and >= 0, got {self.r}")
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @classmethod
    def from_degrees(cls, r: float, phi_deg: float) -> "TransmitterSite":
        return cls(r, math.radians(phi_deg))

    @classmethod
    def from_point(cls, p: Point2) -> "TransmitterSite":
        return cls(p.r, p.phi)

    @property
    def point(self) -> Point2:
        return Point2.from_polar(self.r, self.phi)


@dataclass(frozen=True)
class BlockageSegment:
    center: Point2
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise GeometryError(f"blockage width must be > 0, got {self.width}")

    def endpoints(self) -> tuple[Point2, Point2]:
        r = self.center.r
        if r == 0.0:
            raise GeometryError("segment orientation undefined for a centre at the receiver")
        # unit normal to the receiver->centre ray
        nx, ny = -self.center.y / r, self.center.x / r
        h = 0.5 * self.width
        c = self.center
        return Point2(c.x - h * nx, c.y - h * ny), Point2(c.x + h * nx, c.y + h * ny)


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "vertices", v)
        if len(v) < 3:
            raise GeometryError("a polygon needs at least 3 vertices")
        if not _is_convex_ccw(v):
            raise GeometryError("polygon vertices must be convex and counter-clockwise")

    @property
    def area(self) -> float:
        return shoelace_area(self.vertices)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Closed point-in-polygon test for an ``(..., 2)`` array."""
        pts = np.asarray(points, dtype=float)
        inside = np.ones(pts.shape[:-1], dtype=bool)
        v = self.vertices
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            cross = (b[0] - a[0]) * (pts[..., 1] - a[1]) - (b[1] - a[1]) * (pts[..., 0] - a[0])
            inside &= cross >= 0.0
        return inside


def shoelace_area(vertices: np.ndarray) -> float:
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _is_convex_ccw(v: np.ndarray, tol: float = 1e-12) -> bool:
    d1 = np.roll(v, -1, axis=0) - v
    d2 = np.roll(d1, -1, axis=0)
    cross = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    scale = max(1.0, float(np.max(np.abs(v))) ** 2)
    return bool(np.all(cross >= -tol * scale)) and shoelace_area(v) > 0.0


def polygon_clip(p: ConvexPolygon, q: ConvexPolygon) -> ConvexPolygon | None:
    """Intersect two convex polygons (Sutherland-Hodgman).

    Returns ``None`` when the intersection has no interior.
    """
    out = [tuple(pt) for pt in p.vertices]
    clip = q.vertices
    for a, b in zip(clip, np.roll(clip, -1, axis=0)):
        if not out:
            return None
        ex, ey = b[0] - a[0], b[1] - a[1]

        def side(pt):
            return ex * (pt[1] - a[1]) - ey * (pt[0] - a[0])

        src, out = out, []
        prev = src[-1]
        s_prev = side(prev)
        for cur in src:
            s_cur = side(cur)
            if s_cur >= 0.0:
                if s_prev < 0.0:
                    out.append(_lerp(prev, cur, s_prev, s_cur))
                out.append(cur)
            elif s_prev >= 0.0:
                out.append(_lerp(prev, cur, s_prev, s_cur))
            prev, s_prev = cur, s_cur

    verts = _dedupe(out)
    if len(verts) < 3:
        return None
    arr = np.array(verts)
    scale = max(p.area, q.area)
    if shoelace_area(arr) <= 1e-12 * scale:
        return None
    return ConvexPolygon(arr)


def _lerp(p0, p1, s0, s1):
    t = s0 / (s0 - s1)
    return (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))


def _dedupe(points, tol=1e-12):
    res = []
    for pt in points:
        if not res or math.dist(pt, res[-1]) > tol:
            res.append(pt)
    while len(res) > 1 and math.dist(res[0], res[-1]) <= tol:
        res.pop()
    return res


# --------------------------------------------------------------------------
# deployment regions


@dataclass(frozen=True)
class CircleRegion:
    """Disc centred on the receiver."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError(f"circle radius must be > 0, got {self.radius}")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return np.hypot(pts[..., 0], pts[..., 1]) <= self.radius

    @property
    def bounding_box(self) -> tuple[float, float, float, float]:
        r = self.radius
        return (-r, -r, r, r)


@dataclass(frozen=True, eq=False)
class PolygonRegion:
    """Convex polygonal deployment region (vertices counter-clockwise)."""

    polygon: ConvexPolygon

    @classmethod
    def from_vertices(cls, vertices: Sequence[Sequence[float]]) -> "PolygonRegion":
        return cls(ConvexPolygon(np.asarray(vertices, dtype=float)))

    @property
    def area(self) -> float:
        return self.polygon.area

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self.polygon.contains(points)

    @property
    def bounding_box(self) -> tuple[float, float, float, float]:
        v = self.polygon.vertices
        return (float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max()))


DeploymentRegion = Union[CircleRegion, PolygonRegion]


# --------------------------------------------------------------------------
# blocking predicate


def blocked_mask(centers, site: TransmitterSite, width: float, model: RegionModel = "exact") -> np.ndarray:
    """Vectorised blocking test for an ``(..., 2)`` array of blockage centres.

    With ``model="exact"`` this is the segment/path intersection test. In the
    frame where the site lies on the positive x axis a centre ``(x, y)`` at
    range ``r`` blocks iff ``x > 0``, ``r*|y| <= (W/2)*x`` and ``r**2 <= R*x``.
    With ``model="rectangle"`` it is membership of ``[0, R] x [-W/2, W/2]``.
    """
    _check_model(model)
    if site.r == 0.0:
        raise GeometryError("site coincides with receiver")
    c = np.asarray(centers, dtype=float)
    cos_p, sin_p = math.cos(site.phi), math.sin(site.phi)
    x = c[..., 0] * cos_p + c[..., 1] * sin_p
    y = c[..., 1] * cos_p - c[..., 0] * sin_p
    half = 0.5 * width
    if model == "rectangle":
        return (x >= 0.0) & (x <= site.r) & (np.abs(y) <= half)
    r2 = c[..., 0] ** 2 + c[..., 1] ** 2
    return (x > 0.0) & (np.sqrt(r2) * np.abs(y) <= half * x) & (r2 <= site.r * x)


def blocks(seg: BlockageSegment, site: TransmitterSite) -> bool:
    """True iff the blockage segment cuts the closed path from the receiver to ``site``."""
    if site.r == 0.0:
        raise GeometryError("site coincides with receiver")
    c = np.array([seg.center.x, seg.center.y])
    return bool(blocked_mask(c, site, seg.width, "exact"))


# --------------------------------------------------------------------------
# blocking regions and their areas


@dataclass(frozen=True)
class BlockingRegion:
    target: TransmitterSite
    width: float
    model: RegionModel = "rectangle"

    def __post_init__(self):
        _check_model(self.model)
        if not self.width > 0:
            raise GeometryError(f"blockage width must be > 0, got {self.width}")
        if self.target.r == 0.0:
            raise GeometryError("site coincides with receiver")

    def polygon(self) -> ConvexPolygon:
        """Rectangle-model region as a polygon."""
        return rectangle_polygon(self.target, self.width)

    def reach(self, offset):
        """Radial extent of the exact region along a ray ``offset`` radians off the site.

        Zero outside ``(-pi/2, pi/2)``.
        """
        return _exact_reach(np.asarray(offset, dtype=float), self.target.r, self.width)


def rectangle_polygon(site: TransmitterSite, width: float) -> ConvexPolygon:
    h = 0.5 * width
    local = np.array([[0.0, -h], [site.r, -h], [site.r, h], [0.0, h]])
    c, s = math.cos(site.phi), math.sin(site.phi)
    rot = np.array([[c, -s], [s, c]])
    return ConvexPolygon(local @ rot.T)


def _exact_reach(offset: np.ndarray, R: float, W: float) -> np.ndarray:
    off = np.abs(wrap_angle(offset))
    with np.errstate(divide="ignore", invalid="ignore"):
        lateral = np.where(off > 0.0, 0.5 * W / np.tan(off), np.inf)
    reach = np.minimum(R * np.cos(off), lateral)
    return np.where(off < HALF_PI, np.maximum(reach, 0.0), 0.0)


def _kink(R: float, W: float) -> float:
    # offset where the lateral limit meets the r <= R cos(offset) limit
    return math.asin(min(1.0, 0.5 * W / R))


_QUAD_OPTS = dict(epsabs=0.0, limit=500)


def region_area(region: BlockingRegion) -> float:
    """Area of a blocking region.

    The rectangle model gives ``W * R`` exactly; the exact model integrates
    ``reach(offset)**2 / 2`` over the half-plane of offsets.
    """
    R, W = region.target.r, region.width
    if region.model == "rectangle":
        return W * R
    k = _kink(R, W)

    def f(t):
        return 0.5 * float(_exact_reach(np.array(t), R, W)) ** 2

    pts = [k] if 0.0 < k < HALF_PI else None
    val, _ = integrate.quad(f, 0.0, HALF_PI, points=pts, epsrel=1e-11, **_QUAD_OPTS)
    return 2.0 * val


def overlap_area(r1: BlockingRegion, r2: BlockingRegion) -> float:
    """Area common to two blocking regions built with the same model."""
    if r1.model != r2.model:
        raise GeometryError("both regions must use the same model")
    if r1 == r2:
        # identical regions; skip clipping/integration round-off
        return region_area(r1)
    if r1.model == "rectangle":
        inter = polygon_clip(r1.polygon(), r2.polygon())
        return 0.0 if inter is None else inter.area
    return _exact_overlap(r1, r2)


def _exact_overlap(r1: BlockingRegion, r2: BlockingRegion) -> float:
    # Each exact region is radially convex from the receiver: along any ray it
    # is (0, reach]. The overlap reduces to a 1-D integral of min(reach)^2 / 2.
    theta = wrap_angle(r2.target.phi - r1.target.phi)
    lo, hi = max(-HALF_PI, theta - HALF_PI), min(HALF_PI, theta + HALF_PI)
    if hi <= lo:
        return 0.0

    def reach1(t):
        return _exact_reach(t, r1.target.r, r1.width)

    def reach2(t):
        return _exact_reach(np.asarray(t) - theta, r2.target.r, r2.width)

    def f(t):
        return 0.5 * float(min(reach1(np.array(t)), reach2(np.array(t)))) ** 2

    k1, k2 = _kink(r1.target.r, r1.width), _kink(r2.target.r, r2.width)
    cand = [0.0, k1, -k1, theta, theta + k2, theta - k2]
    # crossings of the two reach curves
    def diff(t):
        return float(reach1(np.array(t)) - reach2(np.array(t)))

    grid = np.linspace(lo, hi, 2001)[1:-1]
    d = reach1(grid) - reach2(grid)
    for i in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
        # re-bracket with the scalar path; near-identical curves can round differently
        a, b = grid[i], grid[i + 1]
        da, db = diff(a), diff(b)
        if da * db < 0:
            cand.append(optimize.brentq(diff, a, b, xtol=1e-15))
        elif da == 0.0 or db == 0.0:
            cand.append(a if da == 0.0 else b)
    pts = sorted({c for c in cand if lo < c < hi})
    edges = [lo, *pts, hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a > 1e-13:
            total += integrate.quad(f, a, b, epsrel=1e-10, **_QUAD_OPTS)[0]
    return total
