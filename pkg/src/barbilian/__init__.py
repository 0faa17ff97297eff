"""Barbilian's metrization procedure: induced distances, metrics and their checks."""

from .domains import (
    ConcentricSpheres,
    CircleMinusPoint,
    Disk,
    Domain,
    HalfPlane,
    ParallelPlanes,
    Polyline,
    Quadrant,
    boundary_point,
    contains,
    domain_from_json,
    make_domain,
)
from .errors import BarbilianError, ConfigurationError, ConvergenceError, PreconditionError
from .influence import InfluenceKind, InfluenceSpec, influence_eval, is_effective, ratio_g
from .extremum import ExtremumResult, SearchOptions, brute_force_extrema, inf_ratio, sup_ratio
from .distance import AxiomReport, DistanceResult, barbilian_distance, check_axioms, positivity_check

__version__ = "0.1.0"
