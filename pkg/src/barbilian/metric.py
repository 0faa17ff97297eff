"""The infinitesimal metric ds = lambda |dx| induced by the distance.

Convention: the metric in the direction of a velocity v comes from the two
circles through A whose centres lie on the line through A along v, that is the
circles tangent at A to the line d perpendicular to v.  This is what
d(A, A + eps v) / eps converges to; for the half-plane and the disk lambda does
not depend on v at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distance import barbilian_distance
from .domains import Disk, Domain, HalfPlane, Quadrant, as_direction, as_point
from .errors import BarbilianError, ConfigurationError, PreconditionError
from .extremum import SearchOptions
from .tangent import TangentCircles, tangent_circles, tangent_circles_quadrant

__all__ = [
    "MetricSample",
    "CurvatureSample",
    "tangent_slope",
    "conformal_factor",
    "metric_tensor",
    "quadrant_lambda_squared",
    "gaussian_curvature",
    "path_length",
    "metric_derivative",
    "richardson",
]

# relative spread allowed when checking direction-independence
ISOTROPY_TOL = 1e-10
_ISOTROPY_DIRS = [(math.cos(k * math.pi / 8), math.sin(k * math.pi / 8)) for k in range(8)]


@dataclass(frozen=True)
class MetricSample:
    point: np.ndarray
    direction: np.ndarray
    R: float
    r: float
    lam: float
    g11: float
    g12: float
    g22: float

    @property
    def det_g(self) -> float:
        return self.g11 * self.g22 - self.g12 * self.g12

    def matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])


@dataclass(frozen=True)
class CurvatureSample:
    point: np.ndarray
    step_h: float
    kappa: float


def tangent_slope(direction) -> float:
    """Slope of the line d perpendicular to ``direction`` (inf when d is vertical)."""
    v = as_direction(direction, 2)
    if v[1] == 0.0:
        return math.inf
    return float(-v[0] / v[1])


def quadrant_lambda_squared(a, m: float) -> float:
    """(y m + x + (x + y) sqrt(m^2+1))^2 / (4 x^2 y^2 (m^2+1)) at A = (x, y).

    ``m`` is the slope of the tangent line d; ``m = inf`` gives the vertical
    limit (x + 2y)^2 / (4 x^2 y^2).
    """
    x, y = (float(c) for c in as_point(a, 2))
    if not (x > 0 and y > 0):
        raise PreconditionError(f"A=({x}, {y}) is not in the open quadrant")
    if m == math.inf:
        return (x + 2.0 * y) ** 2 / (4.0 * x * x * y * y)
    s = math.hypot(1.0, m)
    return (y * m + x + (x + y) * s) ** 2 / (4.0 * x * x * y * y * s * s)


def _circles(domain: Domain, a, direction) -> TangentCircles:
    return tangent_circles(domain, a, slope=tangent_slope(direction))


def conformal_factor(domain: Domain, a, direction=(1.0, 0.0)) -> float:
    """lambda(A, v) = 1/2 (1/R + 1/r).

    On the half-plane and the disk the value is also computed for 8 other
    directions and a BarbilianError is raised if they disagree.
    """
    lam = _circles(domain, a, direction).lam
    if isinstance(domain, (HalfPlane, Disk)):
        vals = [_circles(domain, a, d).lam for d in _ISOTROPY_DIRS]
        if max(vals) - min(vals) > ISOTROPY_TOL * max(1.0, lam):
            raise BarbilianError(f"conformal factor is not direction-independent at {list(a)}")
    return lam


def metric_tensor(domain: Domain, a, direction=(1.0, 0.0), closed_form_only: bool = False) -> MetricSample:
    """g = lambda^2 I at A for velocity ``direction``.

    On the quadrant the closed-form lambda^2 in the tangent slope is used when
    both circles are in their expected configuration; otherwise (or for a
    vertical tangent line) lambda comes from the numeric tangent circles,
    unless ``closed_form_only`` asks for an error instead.
    """
    a = as_point(a, 2)
    v = as_direction(direction, 2)
    m = tangent_slope(v)
    if isinstance(domain, Quadrant):
        if closed_form_only and math.isinf(m):
            raise ConfigurationError("vertical tangent line has no closed form; use the numeric fallback")
        try:
            tc = tangent_circles_quadrant(a, m)
            lam2 = quadrant_lambda_squared(a, m)
        except ConfigurationError:
            if closed_form_only:
                raise
            tc = tangent_circles(domain, a, slope=m)
            lam2 = tc.lam**2
        lam = math.sqrt(lam2)
    else:
        tc = tangent_circles(domain, a, slope=m, closed_form_only=closed_form_only)
        lam = tc.lam
        lam2 = lam * lam
    return MetricSample(a, v, tc.R_plus, tc.R_minus, lam, lam2, 0.0, lam2)


def gaussian_curvature(domain: Domain, a, h: float | None = None) -> CurvatureSample:
    """kappa = -(Laplacian of ln lambda) / lambda^2 by the 5-point stencil."""
    if not isinstance(domain, (HalfPlane, Disk)):
        raise PreconditionError("curvature needs a direction-independent metric (halfplane or disk)")
    a = as_point(a, 2)
    if not domain.contains(a):
        raise PreconditionError(f"A={a.tolist()} is not in J")
    dist = domain.boundary_distance(a)
    if h is None:
        h = 1e-3 * dist
    if not (h > 0 and h <= dist / 10):
        raise PreconditionError(f"step h={h} must be in (0, dist(A, K)/10 = {dist / 10}]")

    def ln_lam(p):
        return math.log(_circles(domain, p, (1.0, 0.0)).lam)

    ex, ey = np.array([h, 0.0]), np.array([0.0, h])
    c = ln_lam(a)
    lap = (ln_lam(a + ex) + ln_lam(a - ex) + ln_lam(a + ey) + ln_lam(a - ey) - 4.0 * c) / (h * h)
    return CurvatureSample(a, float(h), -lap / math.exp(2.0 * c))


def path_length(domain: Domain, polyline, subdivisions: int = 1) -> float:
    """Midpoint-rule length of a polyline, each segment split into ``subdivisions`` pieces."""
    if subdivisions < 1:
        raise PreconditionError("subdivisions must be >= 1")
    pts = [as_point(p, 2) for p in polyline]
    if not pts:
        raise PreconditionError("empty polyline")
    for p in pts:
        if not domain.contains(p):
            raise PreconditionError(f"vertex {p.tolist()} is not in J")
    total = 0.0
    for p, q in zip(pts[:-1], pts[1:]):
        seg = q - p
        length = float(np.linalg.norm(seg))
        if length == 0.0:
            continue
        piece = length / subdivisions
        for k in range(subdivisions):
            mid = p + ((k + 0.5) / subdivisions) * seg
            if not domain.contains(mid):
                raise PreconditionError(f"polyline leaves J near {mid.tolist()}")
            total += _circles(domain, mid, seg).lam * piece
    return total


def richardson(hs, values) -> float:
    """Value at h = 0 of the polynomial through ``(hs[i], values[i])`` (Neville)."""
    hs = [float(h) for h in hs]
    p = [float(v) for v in values]
    n = len(hs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (hs[i] * p[i + 1] - hs[i + k] * p[i]) / (hs[i] - hs[i + k])
    return p[0]


def metric_derivative(
    spec,
    domain: Domain,
    a,
    direction,
    eps_list=None,
    opts: SearchOptions | None = None,
) -> float:
    """Extrapolate q(eps) = d(A, A + eps v) / eps to eps = 0, v the unit direction.

    The default steps are dist(A, K) * (1e-2, 5e-3, 2.5e-3).
    """
    a = as_point(a, 2)
    v = as_direction(direction, 2)
    v = v / np.linalg.norm(v)
    if not domain.contains(a):
        raise PreconditionError(f"A={a.tolist()} is not in J")
    dist = domain.boundary_distance(a)
    if eps_list is None:
        eps_list = [dist * 1e-2, dist * 5e-3, dist * 2.5e-3]
    eps_list = [float(e) for e in eps_list]
    if not eps_list or any(e <= 0 for e in eps_list):
        raise PreconditionError("eps values must be positive")
    if any(e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
        raise PreconditionError("eps values must be strictly decreasing")
    if eps_list[0] > 0.5 * dist:
        raise PreconditionError(f"eps={eps_list[0]} is not small next to dist(A, K)={dist}")
    qs = []
    for e in eps_list:
        b = a + e * v
        if not domain.contains(b):
            raise PreconditionError(f"A + eps v = {b.tolist()} leaves J")
        qs.append(barbilian_distance(spec, domain, a, b, opts).distance / e)
    return richardson(eps_list, qs)
