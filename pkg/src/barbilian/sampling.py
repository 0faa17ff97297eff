"""Seeded samplers for points of J.

The generator is numpy's PCG64 bit generator seeded with the 64-bit seed; its
stream is specified and identical across platforms.  Planar domains use
rejection sampling from the domain's bounding box (half-plane [-5,5]x(0,5],
quadrant (0,5]^2, disk [-rho,rho]^2); candidates closer than
``min_boundary_distance`` to K are rejected as well.
"""

from __future__ import annotations

import numpy as np

from .domains import ConcentricSpheres, Domain, ParallelPlanes
from .errors import PreconditionError

NEAR_BOUNDARY = 1e-3


def make_rng(seed: int | np.random.Generator | None = 0) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    seed = 0 if seed is None else int(seed)
    if not 0 <= seed < 2**64:
        raise PreconditionError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.PCG64(seed))


def sample_points(
    domain: Domain,
    n: int,
    seed: int | np.random.Generator | None = 0,
    min_boundary_distance: float = NEAR_BOUNDARY,
    max_tries: int = 1000,
) -> np.ndarray:
    """``n`` points of J, drawn deterministically from ``seed``."""
    rng = make_rng(seed)
    if isinstance(domain, ConcentricSpheres):
        v = rng.standard_normal((n, 3))
        return domain.r_j * v / np.linalg.norm(v, axis=1, keepdims=True)
    lo, hi = domain.sampling_box()
    if isinstance(domain, ParallelPlanes):
        xy = rng.uniform(lo[:2], hi[:2], size=(n, 2))
        return np.column_stack([xy, np.zeros(n)])
    out = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries * max(n, 1):
            raise PreconditionError("rejection sampler could not find enough points in J")
        p = rng.uniform(lo, hi)
        if domain.contains(p) and domain.boundary_distance(p) >= min_boundary_distance:
            out.append(p)
    return np.array(out).reshape(n, domain.dim)


def sample_pairs(domain: Domain, n: int, seed=0, min_separation: float = 0.0, **kw) -> list:
    """``n`` pairs of distinct points (A, B) with ``|A - B| >= min_separation``."""
    rng = make_rng(seed)
    pairs = []
    while len(pairs) < n:
        a, b = sample_points(domain, 2, rng, **kw)
        sep = float(np.linalg.norm(a - b))
        if sep > 0.0 and sep >= min_separation:
            pairs.append((a, b))
    return pairs


def sample_triples(domain: Domain, n: int, seed=0, **kw) -> list:
    rng = make_rng(seed)
    return [tuple(sample_points(domain, 3, rng, **kw)) for _ in range(n)]
