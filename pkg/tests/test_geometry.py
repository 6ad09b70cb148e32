"""Planar-geometry primitives: polygons, predicates, motions, tolerances."""

import math

import numpy as np
import pytest

from meanarc import (
    ContactKind,
    DegenerateInput,
    Location,
    RigidMotion,
    SimplePolygon,
    Tolerance,
    ValidationError,
    apply_motion,
    circumradius_about,
    convex_hull,
    locate_points,
    point_in_polygon,
    segment_intersection,
    shapes,
    signed_distances,
)
from conftest import TWO_PI, regular_ngon_area, regular_ngon_perimeter
from oracles import halfplane_inside, raycast_inside


# ---------------------------------------------------------------- area/perimeter


def test_area_unit_square(unit_square):
    assert unit_square.area == pytest.approx(1.0, abs=1e-15)


def test_area_regular_256gon():
    poly = shapes.regular_polygon(256, 1.0)
    assert poly.area == pytest.approx(regular_ngon_area(256, 1.0), rel=1e-12)
    assert poly.area == pytest.approx(3.1412773, abs=1e-7)


def test_area_l_shape(l_shape_corner):
    assert l_shape_corner.area == pytest.approx(3.0, abs=1e-14)


def test_perimeter_unit_square(unit_square):
    assert unit_square.perimeter == pytest.approx(4.0, abs=1e-15)


def test_perimeter_l_shape(l_shape_corner):
    assert l_shape_corner.perimeter == pytest.approx(8.0, abs=1e-14)


def test_perimeter_regular_256gon():
    poly = shapes.regular_polygon(256, 1.0)
    assert poly.perimeter == pytest.approx(regular_ngon_perimeter(256, 1.0), rel=1e-12)
    assert poly.perimeter == pytest.approx(6.2830276, abs=1e-7)


# ---------------------------------------------------------------- convexity


def test_unit_square_is_convex(unit_square):
    assert unit_square.is_convex


def test_l_shape_is_not_convex(l_shape_corner):
    assert not l_shape_corner.is_convex


def test_star_is_not_convex():
    assert not shapes.star(1.0, 0.5, 5).is_convex


def test_collinear_runs_count_as_convex():
    poly = SimplePolygon([(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1)])
    assert poly.is_convex


# ---------------------------------------------------------------- convex hull


def test_hull_drops_interior_point():
    hull = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    assert len(hull.vertices) == 4
    assert hull.area == pytest.approx(1.0, abs=1e-14)
    assert hull.is_convex


def test_hull_of_l_shape_vertices(l_shape_corner):
    # The notch corners (2,1) and (1,2) are extreme points, so the hull is
    # the pentagon they span, not the 2x2 bounding square.
    hull = convex_hull(l_shape_corner.vertices)
    expected = [(0.0, 0.0), (0.0, 2.0), (1.0, 2.0), (2.0, 0.0), (2.0, 1.0)]
    assert sorted(map(tuple, hull.vertices)) == expected
    assert hull.area == pytest.approx(3.5, abs=1e-14)
    tol = Tolerance.for_shapes(hull)
    codes = locate_points(l_shape_corner.vertices, hull.vertices, tol.eps_length)
    assert (codes != Location.OUTSIDE).all()


def test_hull_contains_all_inputs():
    rng = np.random.default_rng(7)
    r = np.sqrt(rng.random(100))
    ang = rng.uniform(0, TWO_PI, 100)
    pts = np.column_stack([r * np.cos(ang), r * np.sin(ang)])
    hull = convex_hull(pts)
    assert hull.is_convex
    tol = Tolerance.for_shapes(hull)
    codes = locate_points(pts, hull.vertices, tol.eps_length)
    assert (codes != Location.OUTSIDE).all()


def test_hull_rejects_collinear_input():
    with pytest.raises(DegenerateInput):
        convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])


# ---------------------------------------------------------------- point location


def test_point_inside_square(unit_square):
    assert point_in_polygon((0.5, 0.5), unit_square) == Location.INSIDE


def test_point_in_notch_is_outside(l_shape_corner):
    assert point_in_polygon((1.5, 1.5), l_shape_corner) == Location.OUTSIDE


def test_point_on_edge(unit_square):
    assert point_in_polygon((1.0, 0.5), unit_square) == Location.ON_BOUNDARY


def test_location_against_halfplane_oracle():
    rng = np.random.default_rng(11)
    for seed in range(6):
        poly = shapes.random_convex(3 + 2 * seed, 1.0, seed=seed)
        pts = rng.uniform(-1.3, 1.3, size=(2000, 2))
        tol = Tolerance.for_shapes(poly)
        codes = locate_points(pts, poly.vertices, tol.eps_length)
        strict = halfplane_inside(pts, poly.vertices, slack=1e-9)
        generic = codes != Location.ON_BOUNDARY
        assert ((codes == Location.INSIDE) == strict)[generic].all()


def test_location_against_raycast_oracle():
    """Majority-vote random-ray classification agrees on >= 20 polygons
    x >= 10^4 generic query points overall."""
    rng = np.random.default_rng(23)
    polys = [shapes.random_convex(5 + k, 1.0, seed=k) for k in range(10)]
    polys += [
        shapes.star(1.0, 0.45, 5),
        shapes.star(1.2, 0.5, 7),
        shapes.l_shape(2.0, 1.0),
        shapes.l_shape(1.5, 0.5),
        shapes.keyhole(1.0, 0.3, 0.8, res=48),
        shapes.keyhole(0.8, 0.2, 0.5, res=32),
        shapes.comb(3, 0.5, 0.35, 0.5, 1.0),
        shapes.comb(4, 0.3, 0.25, 0.4, 0.8),
        shapes.ellipse(1.4, 0.6, res=64),
        shapes.rectangle(2.0, 0.7),
    ]
    assert len(polys) >= 20
    checked = 0
    for poly in polys:
        lo = poly.vertices.min(axis=0) - 0.2
        hi = poly.vertices.max(axis=0) + 0.2
        pts = rng.uniform(lo, hi, size=(600, 2))
        tol = Tolerance.for_shapes(poly)
        codes = locate_points(pts, poly.vertices, tol.eps_length)
        expected = raycast_inside(pts, poly.vertices, rng)
        generic = codes != Location.ON_BOUNDARY
        assert ((codes == Location.INSIDE) == expected)[generic].all()
        checked += int(generic.sum())
    assert checked >= 10_000


# ---------------------------------------------------------------- segment intersection


@pytest.fixture
def seg_tol():
    return Tolerance(eps_length=1e-9)


def test_proper_crossing(seg_tol):
    hit = segment_intersection((0, 0), (1, 1), (0, 1), (1, 0), seg_tol)
    assert hit.kind == ContactKind.PROPER
    assert hit.point == pytest.approx((0.5, 0.5), abs=1e-15)
    assert hit.t == pytest.approx(0.5, abs=1e-15)
    assert hit.u == pytest.approx(0.5, abs=1e-15)


def test_parallel_disjoint_is_none(seg_tol):
    hit = segment_intersection((0, 0), (1, 0), (0, 1), (1, 1), seg_tol)
    assert hit.kind == ContactKind.NONE


def test_endpoint_touch_is_degenerate(seg_tol):
    hit = segment_intersection((0, 0), (1, 0), (0.5, 0), (0.5, 1), seg_tol)
    assert hit.kind == ContactKind.DEGENERATE


def test_collinear_overlap_is_degenerate(seg_tol):
    hit = segment_intersection((0, 0), (1, 0), (0.5, 0), (1.5, 0), seg_tol)
    assert hit.kind == ContactKind.DEGENERATE


def test_swap_symmetry(seg_tol):
    rng = np.random.default_rng(3)
    for _ in range(400):
        a0, a1, b0, b1 = rng.uniform(-1, 1, size=(4, 2))
        fwd = segment_intersection(a0, a1, b0, b1, seg_tol)
        rev = segment_intersection(b0, b1, a0, a1, seg_tol)
        assert fwd.kind == rev.kind
        if fwd.kind == ContactKind.PROPER:
            assert fwd.point == pytest.approx(rev.point, abs=1e-12)
            assert fwd.t == pytest.approx(rev.u, abs=1e-12)
            assert fwd.u == pytest.approx(rev.t, abs=1e-12)


# ---------------------------------------------------------------- rigid motions


def test_identity_motion(unit_square):
    moved = apply_motion(unit_square, RigidMotion(0.0, 0.0, 0.0))
    assert np.array_equal(moved.vertices, unit_square.vertices)


def test_quarter_turn_square(unit_square):
    moved = apply_motion(unit_square, RigidMotion(math.pi / 2, 0.0, 0.0))
    expected = np.array([(0, 0), (0, 1), (-1, 1), (-1, 0)], dtype=float)
    assert moved.vertices == pytest.approx(expected, abs=1e-15)
    assert moved.area == pytest.approx(1.0, rel=1e-12)


def test_motion_is_isometry():
    rng = np.random.default_rng(5)
    for seed in range(10):
        poly = shapes.random_convex(8, 1.0, seed=seed)
        motion = RigidMotion(rng.uniform(0, TWO_PI), *rng.uniform(-3, 3, 2))
        moved = apply_motion(poly, motion)
        assert moved.area == pytest.approx(poly.area, rel=1e-9)
        assert moved.perimeter == pytest.approx(poly.perimeter, rel=1e-9)


def test_theta_normalized_into_period():
    assert RigidMotion(TWO_PI + 1.0, 0, 0).theta == pytest.approx(1.0, abs=1e-12)
    assert RigidMotion(-0.5, 0, 0).theta == pytest.approx(TWO_PI - 0.5, abs=1e-12)
    assert 0.0 <= RigidMotion(-123.456, 0, 0).theta < TWO_PI


def test_motion_transform_matches_manual():
    m = RigidMotion(0.7, 1.5, -2.0)
    pts = np.array([(0.3, -0.4), (1.0, 2.0)])
    c, s = math.cos(0.7), math.sin(0.7)
    expected = np.column_stack(
        [c * pts[:, 0] - s * pts[:, 1] + 1.5, s * pts[:, 0] + c * pts[:, 1] - 2.0]
    )
    assert m.transform(pts) == pytest.approx(expected, abs=1e-15)


# ---------------------------------------------------------------- circumradius


def test_circumradius_square_about_centroid(unit_square):
    assert circumradius_about(unit_square, (0.5, 0.5)) == pytest.approx(
        math.sqrt(2) / 2, rel=1e-12
    )


def test_circumradius_square_about_corner(unit_square):
    assert circumradius_about(unit_square, (0.0, 0.0)) == pytest.approx(
        math.sqrt(2), rel=1e-12
    )


def test_circumradius_regular_polygon_about_center():
    poly = shapes.regular_polygon(256, 1.0)
    assert circumradius_about(poly, (0.0, 0.0)) == pytest.approx(1.0, rel=1e-12)


# ---------------------------------------------------------------- tolerances


def test_tolerance_scales_with_diameter(unit_square):
    big = SimplePolygon(unit_square.vertices * 1000.0)
    tol_small = Tolerance.for_shapes(unit_square)
    tol_big = Tolerance.for_shapes(unit_square, big)
    assert tol_small.eps_length == pytest.approx(1e-9 * math.sqrt(2), rel=1e-12)
    assert tol_big.eps_length == pytest.approx(1e-6 * math.sqrt(2), rel=1e-9)
    assert tol_big.eps_param > 0


# ---------------------------------------------------------------- validation


def test_too_few_vertices():
    with pytest.raises(ValidationError, match="at least 3"):
        SimplePolygon([(0, 0), (1, 0)])


def test_repeated_vertex_named():
    with pytest.raises(ValidationError, match="coincide"):
        SimplePolygon([(0, 0), (1, 0), (1, 0), (0, 1)])


def test_nonfinite_vertex_rejected():
    with pytest.raises(ValidationError, match="not finite"):
        SimplePolygon([(0, 0), (1, 0), (float("nan"), 1)])


def test_bowtie_names_offending_edge_pair():
    with pytest.raises(ValidationError) as err:
        SimplePolygon([(0, 0), (1, 1), (1, 0), (0, 1)])
    assert "edge 0" in str(err.value) and "edge 2" in str(err.value)
    assert err.value.vertex_context == (0, 2)


def test_zero_area_rejected():
    with pytest.raises(ValidationError):
        SimplePolygon([(0, 0), (1, 0), (2, 0), (1, 1e-15)])


def test_clockwise_input_reversed_silently():
    poly = SimplePolygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert poly.area > 0
    assert poly.area == pytest.approx(1.0, abs=1e-15)


# ---------------------------------------------------------------- signed distance


def test_signed_distance_sign_convention(unit_square):
    d = signed_distances(np.array([(0.5, 0.5), (2.0, 0.5), (1.0, 0.5)]), unit_square)
    assert d[0] == pytest.approx(0.5, abs=1e-12)
    assert d[1] == pytest.approx(-1.0, abs=1e-12)
    assert abs(d[2]) <= 1e-12
