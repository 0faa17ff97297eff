"""Influence functions f(P, A) and the ratio g_AB(P) = f(P, A) / f(P, B).

All influences are evaluated as ``log f`` internally.  The exponential kinds
overflow quickly for distant points, and the distance only ever needs log-ratios.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .domains import ConcentricSpheres, Domain, ParallelPlanes, as_point
from .errors import PreconditionError

__all__ = [
    "InfluenceKind",
    "InfluenceSpec",
    "default_influence",
    "influence_from_json",
    "log_influence",
    "influence_eval",
    "log_ratio",
    "ratio_g",
    "log_ratio_at_infinity",
    "is_effective",
]


class InfluenceKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    EXP_PROJECTED = "exp_projected"
    EXP_SPHERICAL = "exp_spherical"


@dataclass(frozen=True)
class InfluenceSpec:
    kind: InfluenceKind = InfluenceKind.EUCLIDEAN

    @classmethod
    def parse(cls, name: "str | InfluenceKind | InfluenceSpec") -> "InfluenceSpec":
        if isinstance(name, InfluenceSpec):
            return name
        try:
            return cls(InfluenceKind(name))
        except ValueError:
            raise PreconditionError(f"unknown influence {name!r}") from None

    def check(self, domain: Domain) -> None:
        """Raise if this influence cannot be paired with ``domain``."""
        kind = self.kind
        if kind is InfluenceKind.EXP_PROJECTED and not isinstance(domain, ParallelPlanes):
            raise PreconditionError("exp_projected influence needs a parallel_planes domain")
        if kind is InfluenceKind.EXP_SPHERICAL and not isinstance(domain, ConcentricSpheres):
            raise PreconditionError("exp_spherical influence needs a concentric_spheres domain")
        if kind is InfluenceKind.EUCLIDEAN and not domain.planar:
            raise PreconditionError("euclidean influence needs a planar domain")


def default_influence(domain: Domain) -> InfluenceSpec:
    if isinstance(domain, ParallelPlanes):
        return InfluenceSpec(InfluenceKind.EXP_PROJECTED)
    if isinstance(domain, ConcentricSpheres):
        return InfluenceSpec(InfluenceKind.EXP_SPHERICAL)
    return InfluenceSpec(InfluenceKind.EUCLIDEAN)


def influence_from_json(obj: dict) -> InfluenceSpec:
    """``{"influence": "euclidean" | "exp_projected" | "exp_spherical"}``."""
    if not isinstance(obj, dict) or set(obj) != {"influence"}:
        raise PreconditionError('influence JSON must be {"influence": <name>}')
    return InfluenceSpec.parse(obj["influence"])


def _spherical_distance(domain: ConcentricSpheres, p: np.ndarray, a: np.ndarray) -> np.ndarray:
    # atan2 form keeps accuracy for nearly equal and nearly antipodal points
    pa = np.linalg.norm(np.cross(p, a), axis=-1)
    dot = p @ a
    return domain.r_j * np.arctan2(pa, dot)


def log_influence(spec: InfluenceSpec, domain: Domain, pts, a) -> np.ndarray:
    """``log f(P, A)`` for an array of boundary points ``pts`` of shape (n, dim)."""
    pts = np.asarray(pts, dtype=float)
    a = np.asarray(a, dtype=float)
    kind = spec.kind
    if kind is InfluenceKind.EUCLIDEAN:
        return np.log(np.linalg.norm(pts - a, axis=-1))
    if kind is InfluenceKind.EXP_PROJECTED:
        proj = domain.project(pts)
        return 0.5 * np.linalg.norm(proj - a, axis=-1)
    proj = domain.project(pts)
    return 0.5 * _spherical_distance(domain, proj, a)


def _check_args(spec, domain, p, *points):
    spec.check(domain)
    p = as_point(p, domain.dim)
    if domain.boundary_distance(p) > 1e-9 * (1.0 + float(np.linalg.norm(p))):
        raise PreconditionError(f"P={p.tolist()} is not on the boundary K")
    pts = [as_point(x, domain.dim) for x in points]
    for x in pts:
        if not domain.contains(x):
            raise PreconditionError(f"point {x.tolist()} is not in J")
    return p, pts


def influence_eval(spec: InfluenceSpec, domain: Domain, p, a) -> float:
    """f(P, A) for a boundary point ``p`` and a point ``a`` of J."""
    p, (a,) = _check_args(spec, domain, p, a)
    value = float(np.exp(log_influence(spec, domain, p[None, :], a)[0]))
    if not (value > 0 and np.isfinite(value)):
        raise PreconditionError(f"influence is not a finite positive number at P={p.tolist()}")
    return value


def log_ratio(spec: InfluenceSpec, domain: Domain, pts, a, b) -> np.ndarray:
    """``log g_AB(P)`` over an array of boundary points, no argument checks."""
    return log_influence(spec, domain, pts, a) - log_influence(spec, domain, pts, b)


def ratio_g(spec: InfluenceSpec, domain: Domain, p, a, b) -> float:
    """g_AB(P) = f(P, A) / f(P, B)."""
    p, (a, b) = _check_args(spec, domain, p, a, b)
    if spec.kind is InfluenceKind.EUCLIDEAN:
        return float(np.linalg.norm(p - a) / np.linalg.norm(p - b))
    return float(np.exp(log_ratio(spec, domain, p[None, :], a, b)[0]))


def log_ratio_at_infinity(spec: InfluenceSpec, domain: Domain, direction, a, b) -> float:
    """Limit of ``log g_AB(P)`` as P runs to infinity along the unit ``direction``."""
    if spec.kind is InfluenceKind.EUCLIDEAN:
        return 0.0
    if spec.kind is InfluenceKind.EXP_PROJECTED:
        u = domain.project(np.asarray(direction, dtype=float))
        u = u / np.linalg.norm(u)
        return 0.5 * float(np.dot(u, np.asarray(b) - np.asarray(a)))
    raise PreconditionError("the spherical boundary has no points at infinity")


def is_effective(
    spec: InfluenceSpec,
    domain: Domain,
    pair_sampler: Callable[[int], Iterable[tuple]] | None = None,
    n_pairs: int = 50,
    n_boundary_samples: int = 256,
    tol: float = 1e-9,
) -> tuple[bool, tuple | None]:
    """Sampled necessary check that no pair (A, B) gives a constant ratio on K.

    Returns ``(True, None)`` or ``(False, (A, B))`` with the witness pair whose
    log-ratio varied by less than ``tol`` over the boundary samples.  Passing
    is evidence, not proof.
    """
    if n_pairs < 1 or n_boundary_samples < 2:
        raise PreconditionError("need n_pairs >= 1 and n_boundary_samples >= 2")
    spec = InfluenceSpec.parse(spec)
    spec.check(domain)
    if pair_sampler is None:
        from .sampling import sample_pairs

        def pair_sampler(n):
            return sample_pairs(domain, n, seed=0)

    from .extremum import chart_grid

    for a, b in pair_sampler(n_pairs):
        a, b = np.asarray(a, float), np.asarray(b, float)
        if np.array_equal(a, b):
            continue
        charts = domain.reduced_chart(a, b) if not domain.planar else None
        charts = (charts,) if charts is not None else domain.charts
        vals = []
        for ch in charts:
            ts = chart_grid(ch, n_boundary_samples)
            vals.append(log_ratio(spec, domain, ch.point(ts), a, b))
        vals = np.concatenate(vals)
        if float(vals.max() - vals.min()) < tol:
            return False, (a, b)
    return True, None
