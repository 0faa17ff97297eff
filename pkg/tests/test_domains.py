import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barbilian import (
    CircleMinusPoint,
    ConcentricSpheres,
    Disk,
    HalfPlane,
    ParallelPlanes,
    PreconditionError,
    Quadrant,
    boundary_point,
    contains,
    domain_from_json,
    make_domain,
)
from barbilian.extremum import chart_grid


def test_disk_has_one_compact_chart():
    d = make_domain("disk", rho=1)
    (ch,) = d.charts
    assert ch.compact
    assert ch.t_lo == 0.0 and ch.t_hi == pytest.approx(2 * math.pi)
    assert np.allclose(boundary_point(d, 0, 0.0), [1.0, 0.0])


def test_quadrant_charts_are_open_rays():
    q = make_domain("quadrant")
    assert len(q.charts) == 2
    assert not any(ch.compact for ch in q.charts)
    assert np.allclose(boundary_point(q, 0, 2.0), [2.0, 0.0])
    assert np.allclose(boundary_point(q, 1, 2.0), [0.0, 2.0])


def test_halfplane_chart():
    hp = make_domain("halfplane")
    assert len(hp.charts) == 1 and not hp.charts[0].compact
    assert np.allclose(boundary_point(hp, 0, -3.0), [-3.0, 0.0])


def test_circle_minus_point_chart_is_noncompact():
    d = make_domain("circle_minus_point", rho=1.0, l_angle=0.0)
    (ch,) = d.charts
    assert not ch.compact
    assert ch.lo_open and ch.hi_open


@pytest.mark.parametrize("kind,params", [("disk", {"rho": -1}), ("disk", {"rho": 0}),
                                         ("parallel_planes", {"h": 0}),
                                         ("concentric_spheres", {"r_k": -1, "r_j": 2})])
def test_invalid_parameters_rejected(kind, params):
    with pytest.raises(PreconditionError):
        make_domain(kind, **params)


def test_unknown_kind_and_param_rejected():
    with pytest.raises(PreconditionError):
        make_domain("torus")
    with pytest.raises(PreconditionError):
        make_domain("disk", radius=1)


@pytest.mark.parametrize("dom,p,expected", [
    (HalfPlane(), (0, 1), True),
    (HalfPlane(), (0, 0), False),
    (HalfPlane(), (0, -1), False),
    (Disk(1), (0.5, 0), True),
    (Disk(1), (1, 0), False),
    (Quadrant(), (1, 1), True),
    (Quadrant(), (0, 1), False),
    (Quadrant(), (-1, 1), False),
])
def test_contains(dom, p, expected):
    assert contains(dom, p) is expected


def test_boundary_point_out_of_range():
    with pytest.raises(PreconditionError):
        boundary_point(Quadrant(), 0, -1.0)
    with pytest.raises(PreconditionError):
        boundary_point(Quadrant(), 5, 1.0)


@pytest.mark.parametrize("dom", [HalfPlane(), Disk(1.7), Quadrant(), CircleMinusPoint(2.0, 1.0)])
def test_chart_images_lie_on_k_and_outside_j(dom):
    for ch in dom.charts:
        pts = ch.point(chart_grid(ch, 512))
        for p in pts:
            assert dom.boundary_distance(p) <= 1e-12 * (1 + np.linalg.norm(p))
            assert not dom.contains(p)


def test_disk_chart_satisfies_circle_equation():
    d = Disk(2.5)
    pts = d.charts[0].point(np.linspace(0, 2 * np.pi, 1000, endpoint=False))
    assert np.max(np.abs(np.hypot(pts[:, 0], pts[:, 1]) - 2.5)) <= 1e-12


def test_circle_minus_point_never_produces_l():
    d = CircleMinusPoint(1.0, 0.7)
    ch = d.charts[0]
    ts = chart_grid(ch, 4096)
    assert np.all((ts > ch.t_lo) & (ts < ch.t_hi))
    assert np.min(np.linalg.norm(ch.point(ts) - d.excluded_point, axis=1)) > 0


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 10), st.floats(0, 2 * math.pi, exclude_max=True))
def test_boundary_points_not_contained(rho, t):
    d = Disk(rho)
    p = boundary_point(d, 0, t)
    assert not d.contains(p)


def test_json_round_trip():
    for obj in [{"kind": "disk", "rho": 1.0}, {"kind": "quadrant"}, {"kind": "halfplane"},
                {"kind": "circle_minus_point", "rho": 1.0, "l_angle": 0.0},
                {"kind": "parallel_planes", "h": 1.0}, {"kind": "concentric_spheres", "r_k": 1.0, "r_j": 2.0}]:
        d = domain_from_json(obj)
        assert d.to_json() == obj
        assert domain_from_json(json.loads(json.dumps(d.to_json()))).to_json() == obj


def test_json_unknown_key_rejected():
    with pytest.raises(PreconditionError):
        domain_from_json({"kind": "disk", "rho": 1.0, "colour": "red"})
    with pytest.raises(PreconditionError):
        domain_from_json({"rho": 1.0})


def test_polyline_square_interior():
    sq = make_domain("polyline", segments=[[[0, 0], [1, 0]], [[1, 0], [1, 1]], [[1, 1], [0, 1]], [[0, 1], [0, 0]]])
    assert sq.closed
    assert sq.contains((0.5, 0.5))
    assert not sq.contains((1.5, 0.5))
    assert not sq.contains((1.0, 0.5))
    assert sq.boundary_distance((0.5, 0.25)) == pytest.approx(0.25)


def test_polyline_degenerate_segment_rejected():
    with pytest.raises(PreconditionError):
        make_domain("polyline", segments=[[[0, 0], [0, 0]]])


def test_polyline_compact_flag_checked():
    with pytest.raises(PreconditionError):
        make_domain("polyline", segments=[{"type": "ray", "from": [0, 0], "direction": [1, 0]}], compact=True)
    d = make_domain("polyline", segments=[{"type": "ray", "from": [0, 0], "direction": [1, 0]}], compact=False)
    assert d.contains((1.0, 1.0)) and not d.contains((1.0, 0.0))


def test_planes_and_spheres_membership():
    pp = ParallelPlanes(2.0)
    assert pp.contains((1, 2, 0)) and not pp.contains((1, 2, 2.0))
    cs = ConcentricSpheres(1.0, 2.0)
    assert cs.contains((2, 0, 0)) and not cs.contains((1, 0, 0))
