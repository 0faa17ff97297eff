"""Boundary sets K and admissible regions J for the built-in configurations.

Every domain exposes its boundary as a tuple of one-parameter charts.  A chart
maps a parameter ``t`` in ``(t_lo, t_hi)`` to a boundary point.  Ends of a chart
that are not part of K (points at infinity, or a removed point) are recorded as
:class:`EndLimit` entries so the extremum search can add limit candidates.

The two 3-D configurations keep a two-parameter chart for completeness and
build a symmetry-reduced one-parameter chart per pair of points on demand
(:meth:`ParallelPlanes.reduced_chart`, :meth:`ConcentricSpheres.reduced_chart`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import PreconditionError

TWO_PI = 2.0 * math.pi
_EPS = float(np.finfo(float).eps)

__all__ = [
    "EndLimit",
    "BoundaryChart",
    "LineChart",
    "CircleChart",
    "PointChart",
    "SurfaceChart",
    "Domain",
    "HalfPlane",
    "Disk",
    "Quadrant",
    "CircleMinusPoint",
    "ParallelPlanes",
    "ConcentricSpheres",
    "Polyline",
    "make_domain",
    "domain_from_json",
    "contains",
    "boundary_point",
    "as_point",
    "as_direction",
]


def as_point(p: Any, dim: int | None = None) -> np.ndarray:
    """Coerce ``p`` to a finite float vector, optionally checking its dimension."""
    arr = np.asarray(p, dtype=float).reshape(-1)
    if dim is not None and arr.shape != (dim,):
        raise PreconditionError(f"expected a {dim}-D point, got {arr.tolist()}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"point has non-finite coordinates: {arr.tolist()}")
    return arr


def as_direction(v: Any, dim: int = 2) -> np.ndarray:
    arr = as_point(v, dim)
    if not np.any(arr):
        raise PreconditionError("direction must be non-zero")
    return arr


@dataclass(frozen=True)
class EndLimit:
    """An open end of a chart.

    Exactly one of ``point`` (finite limit point not in K) and ``direction``
    (unit direction of travel towards infinity) is set.
    """

    side: str
    point: np.ndarray | None = None
    direction: np.ndarray | None = None

    @property
    def at_infinity(self) -> bool:
        return self.point is None


@dataclass(frozen=True, eq=False)
class BoundaryChart:
    """Base class of one-parameter boundary charts."""

    t_lo: float
    t_hi: float
    lo_open: bool = False
    hi_open: bool = False
    periodic: bool = False

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def point(self, t):
        raise NotImplementedError

    def foot(self, p: np.ndarray) -> tuple[float, float]:
        """Closest parameter on the closure of the chart and the distance to it."""
        raise NotImplementedError

    @property
    def open_ends(self) -> tuple[EndLimit, ...]:
        return ()

    @property
    def compact(self) -> bool:
        return not self.open_ends

    @property
    def midpoint(self) -> float:
        lo, hi = self.t_lo, self.t_hi
        if math.isinf(lo) and math.isinf(hi):
            return 0.0
        if math.isinf(hi):
            return lo + 1.0
        if math.isinf(lo):
            return hi - 1.0
        return 0.5 * (lo + hi)

    def in_range(self, t: float) -> bool:
        lo_ok = t > self.t_lo if self.lo_open else t >= self.t_lo
        hi_ok = t < self.t_hi if self.hi_open else t <= self.t_hi
        return lo_ok and hi_ok


@dataclass(frozen=True, eq=False)
class LineChart(BoundaryChart):
    """``origin + t * direction`` for a unit ``direction``; covers lines, rays and segments."""

    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))
    direction: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0]))

    @property
    def dim(self) -> int:
        return self.origin.shape[0]

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.origin + t[..., None] * self.direction

    def foot(self, p):
        t = float(np.dot(np.asarray(p) - self.origin, self.direction))
        t = min(max(t, self.t_lo), self.t_hi)
        return t, float(np.linalg.norm(np.asarray(p) - self.point(t)))

    @property
    def open_ends(self):
        ends = []
        if math.isinf(self.t_lo):
            ends.append(EndLimit("lo", direction=-self.direction))
        elif self.lo_open:
            ends.append(EndLimit("lo", point=self.point(self.t_lo)))
        if math.isinf(self.t_hi):
            ends.append(EndLimit("hi", direction=self.direction))
        elif self.hi_open:
            ends.append(EndLimit("hi", point=self.point(self.t_hi)))
        return tuple(ends)


@dataclass(frozen=True, eq=False)
class CircleChart(BoundaryChart):
    """``center + radius * (cos t * e1 + sin t * e2)``; full circles, arcs, punctured circles."""

    center: np.ndarray = field(default_factory=lambda: np.zeros(2))
    radius: float = 1.0
    e1: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0]))
    e2: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0]))

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.center + self.radius * (
            np.cos(t)[..., None] * self.e1 + np.sin(t)[..., None] * self.e2
        )

    def foot(self, p):
        q = np.asarray(p, dtype=float) - self.center
        a, b = float(np.dot(q, self.e1)), float(np.dot(q, self.e2))
        phi = math.atan2(b, a) if (a or b) else 0.0
        t = self.t_lo + (phi - self.t_lo) % TWO_PI
        if not self.periodic and t > self.t_hi:
            # outside an arc: nearest end by angular gap
            if (t - self.t_hi) <= (self.t_lo + TWO_PI - t):
                t = self.t_hi
            else:
                t = self.t_lo
        return t, float(np.linalg.norm(np.asarray(p) - self.point(t)))

    @property
    def open_ends(self):
        if self.periodic:
            # the seam of a full circle is an ordinary point of K
            return ()
        ends = []
        if self.lo_open:
            ends.append(EndLimit("lo", point=self.point(self.t_lo)))
        if self.hi_open:
            ends.append(EndLimit("hi", point=self.point(self.t_hi)))
        return tuple(ends)


@dataclass(frozen=True, eq=False)
class PointChart(BoundaryChart):
    """A boundary consisting of a single point (degenerate polylines only)."""

    at: np.ndarray = field(default_factory=lambda: np.zeros(2))

    @property
    def dim(self) -> int:
        return self.at.shape[0]

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(self.at, t.shape + self.at.shape).copy()

    def foot(self, p):
        return 0.0, float(np.linalg.norm(np.asarray(p) - self.at))


@dataclass(frozen=True, eq=False)
class SurfaceChart:
    """Two-parameter chart of a 3-D boundary surface (plane or sphere)."""

    kind: str
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    offset: float

    def point(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kind == "plane":
            return np.stack([u, v, np.full(np.broadcast(u, v).shape, self.offset)], axis=-1)
        # sphere: u polar angle, v azimuth
        s = np.sin(u)
        return self.offset * np.stack([s * np.cos(v), s * np.sin(v), np.cos(u) * np.ones_like(v)], axis=-1)

    @property
    def compact(self) -> bool:
        return self.kind == "sphere"


# ---------------------------------------------------------------------------
# domains


class Domain:
    """A pair (K, J): boundary charts plus a membership predicate for J."""

    kind: str = ""
    dim: int = 2
    planar: bool = True

    @property
    def charts(self) -> tuple:
        raise NotImplementedError

    def contains(self, p) -> bool:
        raise NotImplementedError

    def boundary_distance(self, p) -> float:
        """Euclidean distance from ``p`` to the closure of K."""
        p = as_point(p, self.dim)
        return min(ch.foot(p)[1] for ch in self.charts)

    def nearest_boundary_point(self, p) -> tuple[np.ndarray, float]:
        p = as_point(p, self.dim)
        best = None
        for ch in self.charts:
            t, d = ch.foot(p)
            if best is None or d < best[1]:
                best = (ch.point(t), d)
        return best

    def sampling_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class HalfPlane(Domain):
    kind = "halfplane"

    @property
    def charts(self):
        return (LineChart(-math.inf, math.inf, True, True),)

    def contains(self, p):
        p = as_point(p, 2)
        return bool(p[1] > 0.0)

    def boundary_distance(self, p):
        p = as_point(p, 2)
        return abs(float(p[1]))

    def sampling_box(self):
        return np.array([-5.0, 0.0]), np.array([5.0, 5.0])

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True, eq=False)
class Disk(Domain):
    rho: float = 1.0
    kind = "disk"

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise PreconditionError(f"radius must be positive, got {self.rho}")

    @property
    def charts(self):
        return (CircleChart(0.0, TWO_PI, False, True, True, center=np.zeros(2), radius=self.rho),)

    def contains(self, p):
        p = as_point(p, 2)
        # margin of a few ulps so rounded images of the circle never land in J
        return bool(math.hypot(p[0], p[1]) < self.rho * (1.0 - 4 * _EPS))

    def boundary_distance(self, p):
        p = as_point(p, 2)
        return abs(self.rho - math.hypot(p[0], p[1]))

    def sampling_box(self):
        return np.array([-self.rho, -self.rho]), np.array([self.rho, self.rho])

    def to_json(self):
        return {"kind": self.kind, "rho": self.rho}


@dataclass(frozen=True, eq=False)
class CircleMinusPoint(Disk):
    """Disk whose boundary circle has the point at angle ``l_angle`` removed."""

    l_angle: float = 0.0
    kind = "circle_minus_point"

    @property
    def charts(self):
        lo = float(self.l_angle)
        return (
            CircleChart(lo, lo + TWO_PI, True, True, False, center=np.zeros(2), radius=self.rho),
        )

    @property
    def excluded_point(self) -> np.ndarray:
        return self.rho * np.array([math.cos(self.l_angle), math.sin(self.l_angle)])

    def to_json(self):
        return {"kind": self.kind, "rho": self.rho, "l_angle": self.l_angle}


@dataclass(frozen=True, eq=False)
class Quadrant(Domain):
    kind = "quadrant"

    @property
    def charts(self):
        o = np.zeros(2)
        return (
            LineChart(0.0, math.inf, True, True, origin=o, direction=np.array([1.0, 0.0])),
            LineChart(0.0, math.inf, True, True, origin=o, direction=np.array([0.0, 1.0])),
        )

    def contains(self, p):
        p = as_point(p, 2)
        return bool(p[0] > 0.0 and p[1] > 0.0)

    def boundary_distance(self, p):
        p = as_point(p, 2)
        x, y = float(p[0]), float(p[1])
        dx = abs(y) if x >= 0 else math.hypot(x, y)
        dy = abs(x) if y >= 0 else math.hypot(x, y)
        return min(dx, dy)

    def sampling_box(self):
        return np.array([0.0, 0.0]), np.array([5.0, 5.0])

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True, eq=False)
class ParallelPlanes(Domain):
    """J is the plane z = 0, K the parallel plane z = h."""

    h: float = 1.0
    kind = "parallel_planes"
    dim = 3
    planar = False

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise PreconditionError(f"plane separation must be positive, got {self.h}")

    @property
    def charts(self):
        return (SurfaceChart("plane", (-math.inf, math.inf), (-math.inf, math.inf), self.h),)

    def contains(self, p):
        p = as_point(p, 3)
        return bool(abs(p[2]) <= 1e-12 * (1.0 + abs(p[0]) + abs(p[1])))

    def boundary_distance(self, p):
        p = as_point(p, 3)
        return abs(float(p[2]) - self.h)

    def project(self, pts):
        """Orthogonal projection onto the plane of J."""
        pts = np.array(pts, dtype=float)
        pts[..., 2] = 0.0
        return pts

    def reduced_chart(self, a, b) -> LineChart:
        """The line of K lying over the line through the projections of ``a`` and ``b``."""
        a, b = self.project(as_point(a, 3)), self.project(as_point(b, 3))
        d = b - a
        n = np.linalg.norm(d)
        u = d / n if n > 0 else np.array([1.0, 0.0, 0.0])
        return LineChart(-math.inf, math.inf, True, True, origin=a + np.array([0.0, 0.0, self.h]), direction=u)

    def sampling_box(self):
        return np.array([-5.0, -5.0, 0.0]), np.array([5.0, 5.0, 0.0])

    def to_json(self):
        return {"kind": self.kind, "h": self.h}


@dataclass(frozen=True, eq=False)
class ConcentricSpheres(Domain):
    """K is the sphere of radius ``r_k``, J the concentric sphere of radius ``r_j``."""

    r_k: float = 1.0
    r_j: float = 2.0
    kind = "concentric_spheres"
    dim = 3
    planar = False

    def __post_init__(self):
        for name in ("r_k", "r_j"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise PreconditionError(f"{name} must be positive, got {v}")

    @property
    def charts(self):
        return (SurfaceChart("sphere", (0.0, math.pi), (0.0, TWO_PI), self.r_k),)

    def contains(self, p):
        p = as_point(p, 3)
        return bool(abs(np.linalg.norm(p) - self.r_j) <= 1e-9 * self.r_j)

    def boundary_distance(self, p):
        p = as_point(p, 3)
        return abs(float(np.linalg.norm(p)) - self.r_k)

    def project(self, pts):
        """Radial projection onto the sphere of J."""
        pts = np.asarray(pts, dtype=float)
        return self.r_j * pts / np.linalg.norm(pts, axis=-1, keepdims=True)

    def reduced_chart(self, a, b) -> CircleChart:
        """Great circle of K through the radial images of ``a`` and ``b``."""
        a = as_point(a, 3)
        b = as_point(b, 3)
        e1 = a / np.linalg.norm(a)
        w = b - np.dot(b, e1) * e1
        nw = np.linalg.norm(w)
        if nw <= 1e-14 * np.linalg.norm(b):
            # collinear with the centre: any great circle through a works
            trial = np.eye(3)[int(np.argmin(np.abs(e1)))]
            w = trial - np.dot(trial, e1) * e1
            nw = np.linalg.norm(w)
        e2 = w / nw
        return CircleChart(0.0, TWO_PI, False, True, True, center=np.zeros(3), radius=self.r_k, e1=e1, e2=e2)

    def sampling_box(self):
        r = self.r_j
        return np.array([-r, -r, -r]), np.array([r, r, r])

    def to_json(self):
        return {"kind": self.kind, "r_k": self.r_k, "r_j": self.r_j}


# ---------------------------------------------------------------------------
# polylines


def _parse_item(item, allow_degenerate: bool) -> BoundaryChart:
    if isinstance(item, (list, tuple)):
        if len(item) != 2:
            raise PreconditionError(f"bare segment must be a pair of points, got {item!r}")
        item = {"type": "segment", "from": item[0], "to": item[1]}
    if not isinstance(item, dict):
        raise PreconditionError(f"cannot parse boundary item {item!r}")
    typ = item.get("type", "segment")
    allowed = {
        "segment": {"type", "from", "to"},
        "ray": {"type", "from", "direction"},
        "arc": {"type", "center", "radius", "start", "end"},
        "point": {"type", "at"},
    }
    if typ not in allowed:
        raise PreconditionError(f"unknown boundary item type {typ!r}")
    extra = set(item) - allowed[typ]
    if extra:
        raise PreconditionError(f"unknown keys for {typ}: {sorted(extra)}")

    if typ == "segment":
        p0, p1 = as_point(item["from"], 2), as_point(item["to"], 2)
        length = float(np.linalg.norm(p1 - p0))
        if length == 0.0:
            if allow_degenerate:
                return PointChart(0.0, 0.0, at=p0)
            raise PreconditionError("degenerate polyline: zero-length segment")
        return LineChart(0.0, length, origin=p0, direction=(p1 - p0) / length)
    if typ == "ray":
        p0 = as_point(item["from"], 2)
        d = as_direction(item["direction"], 2)
        return LineChart(0.0, math.inf, False, True, origin=p0, direction=d / np.linalg.norm(d))
    if typ == "arc":
        c = as_point(item["center"], 2)
        r = float(item["radius"])
        if not (math.isfinite(r) and r > 0):
            raise PreconditionError(f"arc radius must be positive, got {r}")
        a0, a1 = float(item["start"]), float(item["end"])
        span = a1 - a0
        if not (0.0 < span <= TWO_PI):
            raise PreconditionError("arc must run counter-clockwise with 0 < end - start <= 2*pi")
        if span == TWO_PI:
            return CircleChart(a0, a0 + TWO_PI, False, True, True, center=c, radius=r)
        return CircleChart(a0, a1, center=c, radius=r)
    if not allow_degenerate:
        raise PreconditionError("degenerate polyline: single point boundary")
    return PointChart(0.0, 0.0, at=as_point(item["at"], 2))


def _chart_ends(ch: BoundaryChart) -> tuple[np.ndarray, np.ndarray] | None:
    if isinstance(ch, PointChart) or math.isinf(ch.t_hi) or ch.periodic:
        return None
    return ch.point(ch.t_lo), ch.point(ch.t_hi)


def _crossings(ch: BoundaryChart, p: np.ndarray) -> int:
    """Crossings of the horizontal ray from ``p`` towards +x with the chart."""
    px, py = float(p[0]), float(p[1])
    if isinstance(ch, LineChart):
        a, b = ch.point(ch.t_lo), ch.point(ch.t_hi)
        if (a[1] > py) == (b[1] > py):
            return 0
        x = a[0] + (py - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
        return int(x > px)
    if isinstance(ch, CircleChart):
        dy = py - ch.center[1]
        if abs(dy) >= ch.radius:
            return 0
        dx = math.sqrt(ch.radius**2 - dy**2)
        count = 0
        for x in (ch.center[0] - dx, ch.center[0] + dx):
            if x <= px:
                continue
            phi = math.atan2(dy, x - ch.center[0])
            t = ch.t_lo + (phi - ch.t_lo) % TWO_PI
            # half-open in y so shared vertices are counted once
            if ch.periodic or t <= ch.t_hi:
                count += 1
        return count
    return 0


@dataclass(frozen=True, eq=False)
class Polyline(Domain):
    """Boundary made of segments, circular arcs and rays.

    A closed chain of segments/arcs bounds J (its interior); otherwise J is the
    plane with K removed.
    """

    items: tuple = ()
    compact: bool = True
    allow_degenerate: bool = False
    kind = "polyline"

    def __post_init__(self):
        if not self.items:
            raise PreconditionError("polyline needs at least one item")
        charts = tuple(_parse_item(it, self.allow_degenerate) for it in self.items)
        has_open = any(ch.open_ends for ch in charts)
        if has_open == bool(self.compact):
            raise PreconditionError("compact flag disagrees with the boundary items (rays make K non-compact)")
        object.__setattr__(self, "_charts", charts)

    @property
    def charts(self):
        return self._charts

    @property
    def closed(self) -> bool:
        if any(isinstance(ch, PointChart) or ch.open_ends for ch in self.charts):
            return False
        if len(self.charts) == 1 and self.charts[0].periodic:
            return True
        ends = [_chart_ends(ch) for ch in self.charts]
        if any(e is None for e in ends):
            return False
        n = len(ends)
        return all(np.allclose(ends[i][1], ends[(i + 1) % n][0], atol=1e-12) for i in range(n))

    def contains(self, p):
        p = as_point(p, 2)
        if self.boundary_distance(p) == 0.0:
            return False
        if not self.closed:
            return True
        return sum(_crossings(ch, p) for ch in self.charts) % 2 == 1

    def sampling_box(self):
        pts = []
        for ch in self.charts:
            if isinstance(ch, CircleChart):
                pts += [ch.center - ch.radius, ch.center + ch.radius]
            elif isinstance(ch, PointChart):
                pts.append(ch.at)
            else:
                pts.append(ch.origin)
                if math.isfinite(ch.t_hi):
                    pts.append(ch.point(ch.t_hi))
        pts = np.array(pts)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        if not self.closed:
            lo, hi = lo - 1.0, hi + 1.0
        return lo, hi

    def to_json(self):
        return {"kind": self.kind, "segments": list(self.items), "compact": self.compact}


# ---------------------------------------------------------------------------
# construction

_ALIASES = {
    "halfplane": "halfplane",
    "half_plane": "halfplane",
    "disk": "disk",
    "quadrant": "quadrant",
    "circle_minus_point": "circle_minus_point",
    "circleminuspoint": "circle_minus_point",
    "parallel_planes": "parallel_planes",
    "parallelplanes": "parallel_planes",
    "concentric_spheres": "concentric_spheres",
    "concentricspheres": "concentric_spheres",
    "polyline": "polyline",
    "custompolyline": "polyline",
}

_PARAMS = {
    "halfplane": set(),
    "quadrant": set(),
    "disk": {"rho"},
    "circle_minus_point": {"rho", "l_angle"},
    "parallel_planes": {"h"},
    "concentric_spheres": {"r_k", "r_j"},
    "polyline": {"segments", "compact", "allow_degenerate"},
}


def make_domain(kind: str, **params) -> Domain:
    """Build a domain by name: ``make_domain("disk", rho=1.0)``."""
    key = _ALIASES.get(str(kind).lower().replace("-", "_"))
    if key is None:
        raise PreconditionError(f"unknown domain kind {kind!r}")
    extra = set(params) - _PARAMS[key]
    if extra:
        raise PreconditionError(f"unknown parameters for {key}: {sorted(extra)}")
    if key == "halfplane":
        return HalfPlane()
    if key == "quadrant":
        return Quadrant()
    if key == "disk":
        return Disk(float(params.get("rho", 1.0)))
    if key == "circle_minus_point":
        return CircleMinusPoint(float(params.get("rho", 1.0)), float(params.get("l_angle", 0.0)))
    if key == "parallel_planes":
        return ParallelPlanes(float(params.get("h", 1.0)))
    if key == "concentric_spheres":
        return ConcentricSpheres(float(params.get("r_k", 1.0)), float(params.get("r_j", 2.0)))
    segs = params.get("segments")
    if not isinstance(segs, Sequence) or isinstance(segs, str):
        raise PreconditionError("polyline needs a list of segments")
    return Polyline(tuple(segs), bool(params.get("compact", True)), bool(params.get("allow_degenerate", False)))


def domain_from_json(obj: dict) -> Domain:
    """Build a domain from its JSON form, e.g. ``{"kind": "disk", "rho": 1.0}``."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise PreconditionError("domain JSON must be an object with a 'kind' key")
    params = {k: v for k, v in obj.items() if k != "kind"}
    if "allow_degenerate" in params:
        raise PreconditionError("unknown parameters for polyline: ['allow_degenerate']")
    return make_domain(obj["kind"], **params)


def contains(domain: Domain, point) -> bool:
    return domain.contains(point)


def boundary_point(domain: Domain, chart_index: int, t) -> np.ndarray:
    """Boundary point of ``domain`` at parameter ``t`` of chart ``chart_index``."""
    charts = domain.charts
    if not 0 <= chart_index < len(charts):
        raise PreconditionError(f"chart index {chart_index} out of range")
    ch = charts[chart_index]
    if isinstance(ch, SurfaceChart):
        u, v = t
        (ulo, uhi), (vlo, vhi) = ch.u_range, ch.v_range
        if not (ulo <= u <= uhi and vlo <= v <= vhi and math.isfinite(u) and math.isfinite(v)):
            raise PreconditionError(f"parameter {t!r} out of chart range")
        return ch.point(u, v)
    t = float(t)
    if not ch.in_range(t):
        raise PreconditionError(f"parameter {t} out of chart range ({ch.t_lo}, {ch.t_hi})")
    return ch.point(t)
