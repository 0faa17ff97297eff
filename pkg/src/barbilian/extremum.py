"""Global sup / inf of g_AB(P) over the boundary K.

Each chart is sampled on a uniform grid in a compactified parameter, merged
with two zoomed grids centred at the boundary points nearest to A and to B
(the ratio peaks sharply there when A or B is close to K).  Every discrete local
maximum is refined by golden-section search, and the best refined value is
compared with the limits of g_AB at the open ends of the charts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .domains import BoundaryChart, CircleChart, Domain, PointChart, SurfaceChart, TWO_PI, as_point
from .errors import ConvergenceError, PreconditionError
from .influence import InfluenceSpec, log_ratio, log_ratio_at_infinity

__all__ = [
    "SearchOptions",
    "ExtremumResult",
    "chart_grid",
    "sup_ratio",
    "inf_ratio",
    "log_sup_ratio",
    "brute_force_extrema",
    "grid_search_2d",
    "golden_section_max",
]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# at most this many discrete local maxima per chart are refined
MAX_BRACKETS = 8
# refined points beyond FAR_OUT * scale count as the limit at infinity
FAR_OUT = 1e6
# a removed-point limit this close (in ulps of log g) to the best value wins
LIMIT_ULPS = 4
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SearchOptions:
    grid_points_per_chart: int = 4096
    refine_tol: float = 1e-12
    max_refine_iters: int = 200

    def __post_init__(self):
        if self.grid_points_per_chart < 16:
            raise PreconditionError("grid_points_per_chart must be >= 16")
        if not self.refine_tol > 0:
            raise PreconditionError("refine_tol must be positive")
        if self.max_refine_iters < 1:
            raise PreconditionError("max_refine_iters must be >= 1")


@dataclass(frozen=True)
class ExtremumResult:
    """Sup (or inf) of g_AB over K, stored as its logarithm.

    ``attained`` is False when the winning candidate is the limit at an open
    chart end; ``point`` is then the removed limit point, or None at infinity.
    """

    log_value: float
    chart_index: int | None
    arg_t: float | None
    attained: bool
    evaluations: int
    point: np.ndarray | None = None

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


# ---------------------------------------------------------------------------
# grids


def _param_scale(chart: BoundaryChart, dist: float) -> float:
    if isinstance(chart, CircleChart):
        return dist / chart.radius
    return dist


def _has_infinite_end(chart: BoundaryChart) -> bool:
    return math.isinf(chart.t_lo) or math.isinf(chart.t_hi)


def _open_unit_grid(n: int, lo_open: bool, hi_open: bool) -> np.ndarray:
    u = np.linspace(0.0, 1.0, n + 2)
    return u[int(lo_open): n + 2 - int(hi_open)]


def chart_grid(chart: BoundaryChart, n: int, center: float | None = None, scale: float | None = None) -> np.ndarray:
    """Parameter samples on ``chart``.

    Without ``center`` finite charts get a uniform grid; otherwise (or for
    infinite charts) ``t = center + scale * tan(theta)`` with ``theta`` uniform,
    which concentrates samples within ``scale`` of ``center``.  Open ends are
    never sampled.
    """
    if isinstance(chart, PointChart):
        return np.zeros(n)
    lo, hi = chart.t_lo, chart.t_hi
    if chart.periodic:
        if center is None:
            return np.linspace(lo, hi, n, endpoint=False)
        th_max = math.atan(math.pi / scale)
        theta = np.linspace(-th_max, th_max, n, endpoint=False)
        t = center + scale * np.tan(theta)
        return lo + np.mod(t - lo, TWO_PI)
    if center is None and not _has_infinite_end(chart):
        u = _open_unit_grid(n, chart.lo_open, chart.hi_open)
        return lo + (hi - lo) * u
    if center is None:
        center, scale = chart.midpoint, 1.0
    th_lo = -math.pi / 2 if math.isinf(lo) else math.atan((lo - center) / scale)
    th_hi = math.pi / 2 if math.isinf(hi) else math.atan((hi - center) / scale)
    u = _open_unit_grid(n, chart.lo_open or math.isinf(lo), chart.hi_open or math.isinf(hi))
    t = center + scale * np.tan(th_lo + (th_hi - th_lo) * u)
    # tan round-off can step outside a finite closed range
    return np.clip(t, lo, hi)


def golden_section_max(f, a: float, b: float, tol: float, max_iter: int) -> tuple[float, float, int]:
    """Maximise ``f`` on ``(a, b)`` without evaluating the endpoints.

    Returns ``(x_best, f_best, evaluations)``.
    """
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    it = 0
    while (b - a) > tol * max(1.0, abs(a) + abs(b)):
        it += 1
        if it > max_iter:
            raise ConvergenceError(f"golden-section search did not converge in {max_iter} iterations")
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc, evals) if fc >= fd else (d, fd, evals)


# ---------------------------------------------------------------------------
# search


@dataclass
class _Candidate:
    log_value: float
    chart_index: int
    arg_t: float | None
    attained: bool
    point: np.ndarray | None


def _search_chart(spec, domain, chart, index, a, b, opts) -> tuple[list[_Candidate], int]:
    n = opts.grid_points_per_chart
    ta, da = chart.foot(a)
    tb, db = chart.foot(b)
    infinite = _has_infinite_end(chart)
    c0 = 0.5 * (ta + tb)
    s0 = max(da, db, abs(ta - tb), 1e-300)
    grids = [chart_grid(chart, n, c0 if infinite else None, s0 if infinite else None)]
    for t_f, d_f in ((ta, da), (tb, db)):
        if d_f > 0:
            grids.append(chart_grid(chart, n, t_f, _param_scale(chart, d_f)))
    ts = np.unique(np.concatenate(grids))
    vals = log_ratio(spec, domain, chart.point(ts), a, b)
    evals = ts.size

    if chart.periodic:
        left, right = np.roll(vals, 1), np.roll(vals, -1)
    else:
        left = np.concatenate(([-np.inf], vals[:-1]))
        right = np.concatenate((vals[1:], [-np.inf]))
    idx = np.flatnonzero((vals >= left) & (vals >= right))
    # best brackets first; stable sort keeps index order on ties
    idx = idx[np.argsort(-vals[idx], kind="stable")][:MAX_BRACKETS]

    if infinite:
        def to_t(w):
            return c0 + s0 * math.tan(w)

        def to_w(t):
            return math.atan((t - c0) / s0)
    else:
        def to_t(w):
            return w

        def to_w(t):
            return t

    def f(w):
        return float(log_ratio(spec, domain, chart.point(np.array([to_t(w)])), a, b)[0])

    m = ts.size
    cands = []
    for i in idx:
        if chart.periodic:
            t_left = ts[i - 1] if i > 0 else ts[-1] - TWO_PI
            t_right = ts[i + 1] if i < m - 1 else ts[0] + TWO_PI
        else:
            t_left = ts[i - 1] if i > 0 else chart.t_lo
            t_right = ts[i + 1] if i < m - 1 else chart.t_hi
        wa = -math.pi / 2 if math.isinf(t_left) else to_w(t_left)
        wb = math.pi / 2 if math.isinf(t_right) else to_w(t_right)
        if wb <= wa:
            w_best, v_best, k = to_w(ts[i]), vals[i], 0
        else:
            w_best, v_best, k = golden_section_max(f, wa, wb, opts.refine_tol, opts.max_refine_iters)
        evals += k
        # A refinement that ran into an open end is only approaching the end's
        # limit, which is a candidate of its own; keep the grid node instead.
        w_tol = 16 * opts.refine_tol * max(1.0, abs(w_best))
        into_open_end = (
            (t_left == chart.t_lo and (chart.lo_open or math.isinf(t_left)) and w_best - wa <= w_tol)
            or (t_right == chart.t_hi and (chart.hi_open or math.isinf(t_right)) and wb - w_best <= w_tol)
            # so far out that g has rounded onto its limit at infinity
            or (infinite and abs(to_t(w_best) - c0) > FAR_OUT * s0)
        )
        if vals[i] >= v_best or into_open_end:
            t_best, v_best = float(ts[i]), float(vals[i])
        else:
            t_best = to_t(w_best)
        if chart.periodic:
            t_best = chart.t_lo + (t_best - chart.t_lo) % TWO_PI
        cands.append(_Candidate(float(v_best), index, t_best, True, chart.point(t_best)))

    for end in chart.open_ends:
        if end.at_infinity:
            v = log_ratio_at_infinity(spec, domain, end.direction, a, b)
            cands.append(_Candidate(v, index, None, False, None))
        else:
            v = float(log_ratio(spec, domain, end.point[None, :], a, b)[0])
            cands.append(_Candidate(v, index, None, False, end.point))
        evals += 1
    return cands, evals


def _pick(cands: list[_Candidate]) -> _Candidate:
    # exact ties go to attained candidates, then lowest (chart_index, arg_t)
    best = min(cands, key=lambda c: (-c.log_value, not c.attained, c.chart_index,
                                     c.arg_t if c.arg_t is not None else math.inf))
    # Near a removed boundary point g is flat to rounding, so refinement stops a
    # little short of it; a point limit within a few ulps is the true sup.
    slack = LIMIT_ULPS * _EPS * max(1.0, abs(best.log_value))
    for c in cands:
        if not c.attained and c.point is not None and c.log_value >= best.log_value - slack:
            return c
    return best


def _prepare(spec, domain, a, b):
    spec = InfluenceSpec.parse(spec)
    spec.check(domain)
    a = as_point(a, domain.dim)
    b = as_point(b, domain.dim)
    for p in (a, b):
        if not domain.contains(p):
            raise PreconditionError(f"point {p.tolist()} is not in J")
    return spec, a, b


def _charts_for(domain: Domain, a, b) -> tuple:
    if domain.planar:
        return domain.charts
    return (domain.reduced_chart(a, b),)


def log_sup_ratio(spec, domain: Domain, a, b, opts: SearchOptions | None = None) -> ExtremumResult:
    """Sup of g_AB over K (``sup_ratio`` without re-validating the arguments twice)."""
    opts = opts or SearchOptions()
    charts = _charts_for(domain, a, b)
    if np.array_equal(a, b):
        t = charts[0].midpoint
        return ExtremumResult(0.0, 0, t, True, 0, charts[0].point(t))
    cands = []
    evals = 0
    for i, ch in enumerate(charts):
        c, k = _search_chart(spec, domain, ch, i, a, b, opts)
        cands += c
        evals += k
    best = _pick(cands)
    return ExtremumResult(best.log_value, best.chart_index, best.arg_t, best.attained, evals, best.point)


def sup_ratio(spec, domain: Domain, a, b, opts: SearchOptions | None = None) -> ExtremumResult:
    """Supremum of g_AB(P) = f(P, A) / f(P, B) over P in K."""
    spec, a, b = _prepare(spec, domain, a, b)
    return log_sup_ratio(spec, domain, a, b, opts)


def inf_ratio(spec, domain: Domain, a, b, opts: SearchOptions | None = None) -> ExtremumResult:
    """Infimum of g_AB over K, computed as ``1 / sup g_BA``."""
    res = sup_ratio(spec, domain, b, a, opts)
    return replace(res, log_value=-res.log_value)


# ---------------------------------------------------------------------------
# oracles (test-only use)


def brute_force_extrema(spec, domain: Domain, a, b, n_samples: int) -> tuple[float, float]:
    """Plain max / min of g_AB over dense uniform grids plus open-end limits.

    Each chart gets one uniform grid in ``theta`` for the whole chart and one
    per point of the pair, with ``t = t_foot + d * tan(theta)`` (angles for
    circles).  No refinement of any kind.
    """
    if n_samples < 2:
        raise PreconditionError("n_samples must be >= 2")
    spec, a, b = _prepare(spec, domain, a, b)
    if np.array_equal(a, b):
        return 1.0, 1.0
    hi_v, lo_v = -math.inf, math.inf
    for ch in _charts_for(domain, a, b):
        if isinstance(ch, PointChart):
            ts = [np.zeros(1)]
        else:
            ts = []
            centres = [(None, None)]
            for p in (a, b):
                t_f, d_f = ch.foot(p)
                if d_f > 0:
                    centres.append((t_f, d_f / ch.radius if isinstance(ch, CircleChart) else d_f))
            for c, s in centres:
                k = np.arange(1, n_samples + 1) / (n_samples + 1)
                if ch.periodic:
                    if c is None:
                        ts.append(ch.t_lo + TWO_PI * k)
                    else:
                        th = math.atan(math.pi / s)
                        ts.append(c + s * np.tan(-th + 2 * th * k))
                    continue
                lo, hi = ch.t_lo, ch.t_hi
                if c is None:
                    if math.isinf(lo) or math.isinf(hi):
                        c, s = 0.0, 1.0
                    else:
                        ts.append(lo + (hi - lo) * np.linspace(0.0, 1.0, n_samples)[int(ch.lo_open):n_samples - int(ch.hi_open)])
                        continue
                th0 = -math.pi / 2 if math.isinf(lo) else math.atan((lo - c) / s)
                th1 = math.pi / 2 if math.isinf(hi) else math.atan((hi - c) / s)
                ts.append(np.clip(c + s * np.tan(th0 + (th1 - th0) * k), lo, hi))
        t = np.concatenate(ts)
        v = log_ratio(spec, domain, ch.point(t), a, b)
        hi_v = max(hi_v, float(v.max()))
        lo_v = min(lo_v, float(v.min()))
        for end in ch.open_ends:
            if end.at_infinity:
                e = log_ratio_at_infinity(spec, domain, end.direction, a, b)
            else:
                e = float(log_ratio(spec, domain, end.point[None, :], a, b)[0])
            hi_v, lo_v = max(hi_v, e), min(lo_v, e)
    return math.exp(hi_v), math.exp(lo_v)


def grid_search_2d(spec, domain: Domain, a, b, n: int = 64) -> tuple[float, float]:
    """Sup / inf of g_AB on the full two-parameter chart of a 3-D domain.

    Coarse ``n x n`` grid followed by a Nelder-Mead polish of the best grid
    node.  Independent of the symmetry reduction used by :func:`sup_ratio`.
    """
    from scipy.optimize import minimize

    spec, a, b = _prepare(spec, domain, a, b)
    (chart,) = domain.charts
    if not isinstance(chart, SurfaceChart):
        raise PreconditionError("grid_search_2d needs a 3-D domain")
    if chart.kind == "plane":
        centre = 0.5 * (a[:2] + b[:2])
        scale = max(float(np.linalg.norm(a - b)), 1e-12)
        th = np.linspace(-math.pi / 2, math.pi / 2, n + 2)[1:-1]
        u = centre[0] + scale * np.tan(th)
        v = centre[1] + scale * np.tan(th)
    else:
        u = np.linspace(0.0, math.pi, n + 2)[1:-1]
        v = np.linspace(0.0, TWO_PI, n, endpoint=False)
    uu, vv = np.meshgrid(u, v, indexing="ij")

    def g(x):
        return float(log_ratio(spec, domain, chart.point(x[0], x[1])[None, :], a, b)[0])

    vals = log_ratio(spec, domain, chart.point(uu, vv).reshape(-1, 3), a, b).reshape(uu.shape)
    du = float(np.max(np.diff(u))) if chart.kind == "sphere" else scale
    out = []
    for sign in (1.0, -1.0):
        i, j = np.unravel_index(np.argmax(sign * vals), vals.shape)
        x0 = np.array([uu[i, j], vv[i, j]])
        simplex = np.array([x0, x0 + [du, 0.0], x0 + [0.0, du]])
        res = minimize(lambda x: -sign * g(x), x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
        out.append(max(sign * vals[i, j], -res.fun) * sign)
    return math.exp(out[0]), math.exp(out[1])
