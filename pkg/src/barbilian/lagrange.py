"""The quadrant metric as a velocity-dependent tensor g_ij(x, y, xdot, ydot).

Writing the slope as m = ydot / xdot (xdot > 0) turns the closed-form
lambda^2 of the quadrant into

    g11 = g22 = (y ydot + x xdot + (x + y) |v|)^2 / (4 x^2 y^2 |v|^2),  g12 = 0,

which is 0-homogeneous in v.  The checks here probe the identity
dg11/dydot = dg12/dxdot that a Lagrangian (hence Finsler or Riemannian)
metric would have to satisfy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import as_direction, as_point
from .errors import PreconditionError

__all__ = [
    "CartanSample",
    "lagrange_g11",
    "lagrange_tensor",
    "dg11_dydot_exact",
    "cartan_asymmetry",
    "check_homogeneity",
    "check_positive_definite",
]

SYMMETRY_TOL = 1e-9
# default central-difference step, relative to |v|
REL_STEP = 1e-5


@dataclass(frozen=True)
class CartanSample:
    point: np.ndarray
    direction: np.ndarray
    step_h: float
    dg11_dydot: float
    dg12_dxdot: float
    symmetric: bool


def _args(a, v):
    a = as_point(a, 2)
    v = as_direction(v, 2)
    if not (a[0] > 0 and a[1] > 0):
        raise PreconditionError(f"A={a.tolist()} is not in the open quadrant")
    if not v[0] > 0:
        raise PreconditionError(f"velocity {v.tolist()} needs xdot > 0")
    return a, v


def _g11(x, y, xd, yd):
    speed = math.hypot(xd, yd)
    return (y * yd + x * xd + (x + y) * speed) ** 2 / (4.0 * x * x * y * y * speed * speed)


def _g12(x, y, xd, yd):
    return 0.0


def lagrange_g11(a, v) -> float:
    a, v = _args(a, v)
    return _g11(a[0], a[1], v[0], v[1])


def lagrange_tensor(a, v) -> np.ndarray:
    g = lagrange_g11(a, v)
    return np.array([[g, 0.0], [0.0, g]])


def dg11_dydot_exact(a, v) -> float:
    """Closed-form derivative of g11 with respect to ydot."""
    a, v = _args(a, v)
    x, y = float(a[0]), float(a[1])
    xd, yd = float(v[0]), float(v[1])
    s2 = xd * xd + yd * yd
    s = math.sqrt(s2)
    num = y * yd + x * xd + (x + y) * s
    dnum = y + (x + y) * yd / s
    return (2.0 * num * dnum * s2 - num * num * 2.0 * yd) / (4.0 * x * x * y * y * s2 * s2)


def cartan_asymmetry(a, direction, h: float | None = None, tol: float = SYMMETRY_TOL) -> CartanSample:
    """Central differences of g11 in ydot and of g12 in xdot at (A, v)."""
    a, v = _args(a, direction)
    speed = float(np.linalg.norm(v))
    if h is None:
        h = REL_STEP * speed
    if not (h > 0 and h <= 1e-3 * speed):
        raise PreconditionError(f"step h={h} must be in (0, 1e-3 |v|]")
    if v[0] - h <= 0:
        raise PreconditionError("the xdot perturbation leaves the xdot > 0 chart")
    x, y, xd, yd = float(a[0]), float(a[1]), float(v[0]), float(v[1])
    d11 = (_g11(x, y, xd, yd + h) - _g11(x, y, xd, yd - h)) / (2.0 * h)
    d12 = (_g12(x, y, xd + h, yd) - _g12(x, y, xd - h, yd)) / (2.0 * h)
    return CartanSample(a, v, float(h), d11, d12, bool(abs(d11 - d12) <= tol))


def check_homogeneity(a, direction, scales=(2.0, 10.0, 0.1)) -> float:
    """max over c of |g11(A, c v) - g11(A, v)| / g11(A, v)."""
    a, v = _args(a, direction)
    scales = [float(c) for c in scales]
    if not scales or any(not (c > 0 and math.isfinite(c)) for c in scales):
        raise PreconditionError("scales must be positive and finite")
    g = lagrange_g11(a, v)
    return max(abs(lagrange_g11(a, c * v) - g) / g for c in scales)


def check_positive_definite(a, direction) -> bool:
    """g11 > 0 and det g = g11^2 > 0."""
    g = lagrange_tensor(a, direction)
    return bool(g[0, 0] > 0 and g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0] > 0)
