"""Circles tangent to a line d at a point A and tangent to the boundary K.

A line through A is given either by its slope ``m`` (``math.inf`` or None for a
vertical line) or by a direction vector.  The two circles sit on opposite sides
of d; the "plus" circle is the one whose centre lies on the side of the unit
normal ``n+ = (-m, 1) / sqrt(1 + m^2)`` (``(-1, 0)`` for a vertical line).
Infinite radii are legitimate values: the circle has degenerated into a line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import Disk, Domain, HalfPlane, Quadrant, as_direction, as_point
from .errors import ConfigurationError, ConvergenceError, PreconditionError

__all__ = [
    "TangentCircles",
    "line_normal",
    "slope_of",
    "tangent_circles_halfplane",
    "tangent_circles_disk",
    "tangent_circles_quadrant",
    "tangent_circles_numeric",
    "tangent_circles",
]

# bisection is capped well above the ~60 halvings needed for a double
MAX_BISECTIONS = 200
# h(s) is searched for a sign change up to this multiple of dist(A, K)
MAX_EXPANSION = 1e6
# relative slack when checking that a closed-form circle stays inside J
VALIDITY_SLACK = 1e-12


@dataclass(frozen=True)
class TangentCircles:
    """The two tangent circles; centre and touch point are None for an infinite radius."""

    R_plus: float
    R_minus: float
    center_plus: np.ndarray | None
    center_minus: np.ndarray | None
    tangency_plus: np.ndarray | None
    tangency_minus: np.ndarray | None

    @property
    def lam(self) -> float:
        """Conformal factor 1/2 (1/R + 1/r), with 1/inf = 0."""
        return 0.5 * (1.0 / self.R_plus + 1.0 / self.R_minus)

    def to_json(self) -> dict:
        def pt(p):
            return None if p is None else [float(c) for c in p]

        return {
            "R_plus": self.R_plus,
            "R_minus": self.R_minus,
            "center_plus": pt(self.center_plus),
            "center_minus": pt(self.center_minus),
            "tangency_plus": pt(self.tangency_plus),
            "tangency_minus": pt(self.tangency_minus),
        }


def _is_vertical(m) -> bool:
    return m is None or math.isinf(m)


def line_normal(m) -> np.ndarray:
    """Unit normal n+ of a line with slope ``m`` (None or +-inf for vertical)."""
    if _is_vertical(m):
        return np.array([-1.0, 0.0])
    m = float(m)
    if math.isnan(m):
        raise PreconditionError("slope is NaN")
    s = math.hypot(1.0, m)
    return np.array([-m / s, 1.0 / s])


def slope_of(direction) -> float:
    """Slope of the line spanned by ``direction``; ``math.inf`` when vertical."""
    v = as_direction(direction, 2)
    if v[0] == 0.0:
        return math.inf
    return float(v[1] / v[0])


def _normal_from_direction(direction) -> np.ndarray:
    v = as_direction(direction, 2)
    u = v / np.linalg.norm(v)
    # canonical orientation so that n+ agrees with line_normal(slope)
    if u[0] < 0 or (u[0] == 0 and u[1] < 0):
        u = -u
    if u[0] == 0.0:
        return np.array([-1.0, 0.0])
    return np.array([-u[1], u[0]])


def _assemble(domain: Domain, a: np.ndarray, n: np.ndarray, r_plus: float, r_minus: float) -> TangentCircles:
    parts = []
    for r, sign in ((r_plus, 1.0), (r_minus, -1.0)):
        if math.isinf(r):
            parts.append((None, None))
            continue
        c = a + sign * r * n
        parts.append((c, domain.nearest_boundary_point(c)[0]))
    (cp, tp), (cm, tm) = parts
    return TangentCircles(float(r_plus), float(r_minus), cp, cm, tp, tm)


def tangent_circles_halfplane(a, m) -> TangentCircles:
    """Closed form for the upper half-plane y > 0.

    R = y sqrt(m^2+1) / (sqrt(m^2+1) - 1) above the line and
    r = y sqrt(m^2+1) / (sqrt(m^2+1) + 1) below it.
    """
    dom = HalfPlane()
    a = as_point(a, 2)
    y = float(a[1])
    if not y > 0:
        raise PreconditionError(f"A={a.tolist()} is not in the upper half-plane")
    if _is_vertical(m):
        return _assemble(dom, a, line_normal(m), y, y)
    m = float(m)
    if math.isnan(m):
        raise PreconditionError("slope is NaN")
    s = math.hypot(1.0, m)
    # 1/R = (s - 1) / (y s) rewritten as m^2 / (y s (s + 1)) to avoid cancellation;
    # it underflows to 0 for tiny slopes, where the circle is a line
    inv_big = (m / y) * (m / (s * (s + 1.0)))
    big = math.inf if inv_big == 0.0 else 1.0 / inv_big
    small = y * s / (s + 1.0)
    return _assemble(dom, a, line_normal(m), big, small)


def tangent_circles_disk(rho: float, a, m) -> TangentCircles:
    """Closed form for the disk of radius ``rho`` centred at the origin.

    With n the unit normal pointing at the circle's centre,
    radius = (rho^2 - |A|^2) / (2 (rho + A.n)); both radii are finite.
    """
    dom = Disk(float(rho))
    a = as_point(a, 2)
    if not dom.contains(a):
        raise PreconditionError(f"A={a.tolist()} is not inside the disk of radius {rho}")
    n = line_normal(m)
    power = (rho - math.hypot(a[0], a[1])) * (rho + math.hypot(a[0], a[1]))
    an = float(a @ n)
    return _assemble(dom, a, n, power / (2.0 * (rho + an)), power / (2.0 * (rho - an)))


def tangent_circles_quadrant(a, m) -> TangentCircles:
    """Closed form for the open first quadrant.

    The plus circle touches the y-axis, R1 = x sqrt(m^2+1) / (m + sqrt(m^2+1)),
    and the minus circle touches the x-axis, R2 = y sqrt(m^2+1) / (1 + sqrt(m^2+1)).
    Raises ConfigurationError when either circle would cross the other axis
    first; use :func:`tangent_circles_numeric` there.
    """
    dom = Quadrant()
    a = as_point(a, 2)
    if not dom.contains(a):
        raise PreconditionError(f"A={a.tolist()} is not in the open quadrant")
    n = line_normal(m)
    x, y = float(a[0]), float(a[1])
    d1, d2 = 1.0 - float(n[0]), 1.0 + float(n[1])
    # a zero denominator only happens far outside the valid configuration
    r1 = x / d1 if d1 > 0 else math.inf
    r2 = y / d2
    for r, sign, axis in ((r1, 1.0, "y"), (r2, -1.0, "x")):
        if not math.isfinite(r) or dom.boundary_distance(a + sign * r * n) < r * (1.0 - VALIDITY_SLACK):
            raise ConfigurationError(
                f"at A={a.tolist()}, m={m} the circle meant to touch the {axis}-axis crosses the other axis; "
                "use the numeric solver"
            )
    return _assemble(dom, a, n, r1, r2)


def _first_touch(domain: Domain, a: np.ndarray, n: np.ndarray, dist0: float) -> float:
    """Smallest s > 0 with dist(A + s n, K) = s, or inf."""

    def h(s):
        return domain.boundary_distance(a + s * n) - s

    # h decreases (slope in [-2, 0]) from h(0) = dist0, so h(dist0 / 2) >= 0
    lo, hi = 0.0, 0.5 * dist0
    while h(hi) > 0:
        lo = hi
        hi *= 2.0
        if hi > MAX_EXPANSION * dist0:
            return math.inf
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return hi
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"tangent-circle bisection did not converge in {MAX_BISECTIONS} steps")


def tangent_circles_numeric(domain: Domain, a, direction=None, *, slope=None) -> TangentCircles:
    """Tangent circles for any planar domain by root-finding along the normal.

    For each side, the centre A + s n moves away from d until the clearance
    dist(centre, K) - s reaches zero.  Give the line by ``direction`` or ``slope``.
    """
    if not domain.planar:
        raise PreconditionError("tangent circles need a planar domain")
    a = as_point(a, 2)
    if not domain.contains(a):
        raise PreconditionError(f"A={a.tolist()} is not in J")
    if (direction is None) == (slope is None):
        raise PreconditionError("give exactly one of direction and slope")
    n = _normal_from_direction(direction) if direction is not None else line_normal(slope)
    dist0 = domain.boundary_distance(a)
    r_plus = _first_touch(domain, a, n, dist0)
    r_minus = _first_touch(domain, a, -n, dist0)
    return _assemble(domain, a, n, r_plus, r_minus)


def tangent_circles(domain: Domain, a, direction=None, *, slope=None, closed_form_only: bool = False) -> TangentCircles:
    """Closed form where one exists and holds, numeric solver otherwise."""
    if (direction is None) == (slope is None):
        raise PreconditionError("give exactly one of direction and slope")
    m = slope if slope is not None else slope_of(direction)
    try:
        if isinstance(domain, HalfPlane):
            return tangent_circles_halfplane(a, m)
        if isinstance(domain, Disk):
            # a removed boundary point does not change the nearest-touch geometry
            return tangent_circles_disk(domain.rho, a, m)
        if isinstance(domain, Quadrant):
            return tangent_circles_quadrant(a, m)
    except ConfigurationError:
        if closed_form_only:
            raise
        return tangent_circles_numeric(domain, a, slope=m)
    if closed_form_only:
        raise ConfigurationError(f"no closed form for domain kind {domain.kind!r}")
    return tangent_circles_numeric(domain, a, slope=m)
