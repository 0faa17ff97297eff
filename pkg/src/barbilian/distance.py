"""Barbilian distance d(A, B) = ln(sup g_AB / inf g_AB) and the metric-axiom harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import Domain
from .errors import PreconditionError
from .extremum import ExtremumResult, SearchOptions, _prepare, log_sup_ratio
from .influence import is_effective
from .sampling import NEAR_BOUNDARY, sample_pairs, sample_triples

__all__ = ["DistanceResult", "AxiomReport", "barbilian_distance", "check_axioms", "positivity_check"]


@dataclass(frozen=True)
class DistanceResult:
    distance: float
    sup: ExtremumResult
    inf: ExtremumResult

    def to_json(self) -> dict:
        def arg(r):
            return None if r.point is None else [float(x) for x in r.point]

        return {
            "distance": self.distance,
            "sup": self.sup.value,
            "inf": self.inf.value,
            "sup_attained": self.sup.attained,
            "inf_attained": self.inf.attained,
            "argmax": arg(self.sup),
            "argmin": arg(self.inf),
        }


@dataclass(frozen=True)
class AxiomReport:
    n_samples: int
    max_symmetry_violation: float
    max_triangle_violation: float
    max_identity_violation: float
    worst_triple: tuple

    def to_json(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "max_symmetry_violation": self.max_symmetry_violation,
            "max_triangle_violation": self.max_triangle_violation,
            "max_identity_violation": self.max_identity_violation,
            "worst_triple": [[float(x) for x in p] for p in self.worst_triple],
        }


def barbilian_distance(spec, domain: Domain, a, b, opts: SearchOptions | None = None) -> DistanceResult:
    """d(A, B) = ln sup g_AB + ln sup g_BA.

    The second term is ``-ln inf g_AB``, so swapping A and B only reorders a
    two-term sum and the result is symmetric bit for bit.
    """
    spec, a, b = _prepare(spec, domain, a, b)
    up = log_sup_ratio(spec, domain, a, b, opts)
    if np.array_equal(a, b):
        return DistanceResult(0.0, up, up)
    down = log_sup_ratio(spec, domain, b, a, opts)
    inf = ExtremumResult(-down.log_value, down.chart_index, down.arg_t, down.attained, down.evaluations, down.point)
    d = max(0.0, up.log_value + down.log_value)
    return DistanceResult(d, up, inf)


def check_axioms(
    spec,
    domain: Domain,
    n_triples: int,
    seed: int = 0,
    opts: SearchOptions | None = None,
    allow_near_boundary: bool = False,
) -> AxiomReport:
    """Sample triples of J and report the worst symmetry, triangle and identity violations."""
    if n_triples < 1:
        raise PreconditionError("n_triples must be >= 1")
    near = 0.0 if allow_near_boundary else NEAR_BOUNDARY
    triples = sample_triples(domain, n_triples, seed, min_boundary_distance=near)

    def d(p, q):
        return barbilian_distance(spec, domain, p, q, opts).distance

    sym = tri = ident = 0.0
    worst, worst_score = triples[0], -1.0
    for a, b, c in triples:
        ab, ba, bc, ac = d(a, b), d(b, a), d(b, c), d(a, c)
        s = abs(ab - ba)
        t = max(0.0, ac - ab - bc)
        i = max(d(a, a), d(b, b), d(c, c))
        sym, tri, ident = max(sym, s), max(tri, t), max(ident, i)
        score = max(s, t, i)
        if score > worst_score:
            worst, worst_score = (a, b, c), score
    return AxiomReport(len(triples), sym, tri, ident, tuple(worst))


def positivity_check(
    spec,
    domain: Domain,
    n_pairs: int,
    seed: int = 0,
    opts: SearchOptions | None = None,
    min_separation: float = 0.1,
) -> float:
    """Smallest d(A, B) over sampled pairs with ``|A - B| >= min_separation``.

    Refuses to run when the sampled effectiveness check finds a pair with a
    constant ratio, since d is then only a semidistance.
    """
    ok, witness = is_effective(spec, domain, n_pairs=min(n_pairs, 20), n_boundary_samples=256)
    if not ok:
        raise PreconditionError(f"influence is not effective on this domain (witness {witness})")
    pairs = sample_pairs(domain, n_pairs, seed, min_separation=min_separation)
    return min(barbilian_distance(spec, domain, a, b, opts).distance for a, b in pairs)
