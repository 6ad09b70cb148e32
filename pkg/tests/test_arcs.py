"""Boundary clipping: inside arcs, crossing counts, classification."""

import math

import numpy as np
import pytest

from meanarc import (
    Classification,
    RigidMotion,
    SimplePolygon,
    Tolerance,
    apply_motion,
    build_window,
    classify_containment,
    clip_boundary,
    locate_points,
    Location,
    motion_arrays,
    point_in_polygon,
    shapes,
)
from conftest import TWO_PI, random_shape_pairs
from oracles import (
    brute_crossings,
    compose_motions,
    inverse_motion,
    sampled_inside_length,
)


def random_motions(domain, trajectory, count, seed):
    window = build_window(domain, trajectory, ref=(0.0, 0.0))
    arr = np.concatenate(motion_arrays(window, count, seed), axis=0)
    return [RigidMotion(t, x, y) for t, x, y in arr]


# ---------------------------------------------------------------- frozen cases


def test_offset_unit_squares(unit_square):
    # Trajectory square occupying (0.5,0.5)-(1.5,1.5): two half-edges inside.
    traj = shapes.rectangle(1.0, 1.0)
    report = clip_boundary(unit_square, traj, RigidMotion(0.0, 1.0, 1.0))
    assert report.classification == Classification.CROSSING
    assert report.crossing_count == 2
    assert report.inside_length == pytest.approx(1.0, rel=1e-12)
    assert len(report.arcs) == 1
    assert report.arcs[0].length == pytest.approx(1.0, rel=1e-12)
    assert not report.degenerate


def test_small_circle_inside_square(unit_square):
    traj = shapes.circle(0.1, res=64)
    report = clip_boundary(unit_square, traj, RigidMotion(0.0, 0.5, 0.5))
    assert report.classification == Classification.TRAJECTORY_INSIDE_DOMAIN
    assert report.crossing_count == 0
    assert report.inside_length == pytest.approx(traj.perimeter, rel=1e-12)
    assert len(report.arcs) == 1
    loop = report.arcs[0].points
    assert np.allclose(loop[0], loop[-1])


def test_huge_circle_around_square(unit_square):
    traj = shapes.circle(10.0, res=64)
    report = clip_boundary(unit_square, traj, RigidMotion(0.0, 0.5, 0.5))
    assert report.classification == Classification.DOMAIN_INSIDE_TRAJECTORY
    assert report.crossing_count == 0
    assert report.inside_length == 0.0
    assert report.arcs == []


def test_far_away_is_disjoint(unit_square):
    traj = shapes.circle(0.3, res=32)
    report = clip_boundary(unit_square, traj, RigidMotion(1.0, 5.0, 5.0))
    assert report.classification == Classification.DISJOINT
    assert report.crossing_count == 0
    assert report.inside_length == 0.0


COMB_CENTROID = np.array([1.1, 1.775 / 2.6])  # corner-frame centroid


def comb_motion(corner_center):
    """Motion placing a centered template at corner-frame coordinates of the
    3-tooth reference comb (teeth x-spans [0,.5], [.85,1.35], [1.7,2.2])."""
    t = np.asarray(corner_center, dtype=float) - COMB_CENTROID
    return RigidMotion(0.0, t[0], t[1])


def test_bar_across_comb_teeth_and_one_gap():
    # Bar x in [0.25, 1.5], y in [0.9, 1.1]: its left end sits inside the
    # first tooth, the right end hangs over the first-to-second gap, and the
    # loop crosses tooth walls six times, leaving three inside arcs:
    # 0.25+0.2+0.25 wrapping the left end, plus 0.5 on each long edge
    # through the middle tooth.
    comb = shapes.comb(3, 0.5, 0.35, 0.5, 1.0)
    bar = shapes.rectangle(1.25, 0.2)
    motion = comb_motion((0.875, 1.0))
    report = clip_boundary(comb, bar, motion)
    assert report.classification == Classification.CROSSING
    assert not report.degenerate
    assert report.crossing_count == 6
    assert len(report.arcs) == 3
    assert report.inside_length == pytest.approx(1.7, rel=1e-12)
    assert sorted(round(a.length, 9) for a in report.arcs) == [0.5, 0.5, 0.7]

    moved = SimplePolygon(motion.transform(bar.vertices))
    dense = sampled_inside_length(
        comb.vertices, moved.vertices, points_per_unit=int(4e6)
    )
    assert dense == pytest.approx(report.inside_length, rel=1e-6)


def test_bar_across_all_comb_teeth():
    # Wider bar spanning every tooth at tooth height: both long edges cross
    # all six tooth walls, giving 12 crossings and 6 arcs of total length 3.
    comb = shapes.comb(3, 0.5, 0.35, 0.5, 1.0)
    bar = shapes.rectangle(2.4, 0.1)
    report = clip_boundary(comb, bar, comb_motion((1.1, 1.0)))
    assert report.crossing_count == 12
    assert len(report.arcs) == 6
    assert report.inside_length == pytest.approx(3.0, rel=1e-12)
    assert not report.degenerate


# ---------------------------------------------------------------- invariants


def test_report_invariants_on_random_placements():
    checked = 0
    for k, (dom, traj) in enumerate(random_shape_pairs()):
        for motion in random_motions(dom, traj, 120, seed=100 + k):
            report = clip_boundary(dom, traj, motion)
            if report.degenerate:
                continue
            checked += 1
            n = report.crossing_count
            assert n % 2 == 0
            assert -1e-12 <= report.inside_length <= traj.perimeter * (1 + 1e-9)
            assert (report.classification == Classification.CROSSING) == (n >= 2)
            if n >= 2:
                assert len(report.arcs) == n // 2
            arc_sum = sum(a.length for a in report.arcs)
            assert arc_sum == pytest.approx(report.inside_length, rel=1e-9, abs=1e-12)
    assert checked > 500


def test_length_conservation_against_independent_crossings():
    """inside(clip) + outside(rebuilt from brute-force crossing positions)
    must give back the full loop length."""
    checked = 0
    for k, (dom, traj) in enumerate(random_shape_pairs()):
        perim = traj.perimeter
        tol = Tolerance.for_shapes(dom, traj)
        for motion in random_motions(dom, traj, 80, seed=200 + k):
            report = clip_boundary(dom, traj, motion)
            if report.degenerate or report.classification != Classification.CROSSING:
                continue
            moved = motion.transform(traj.vertices)
            brute = brute_crossings(dom.vertices, moved)
            if brute is None or brute[0] != report.crossing_count:
                continue
            ell = np.sort(brute[2])
            lengths = np.diff(np.append(ell, ell[0] + perim))
            mids = np.mod(ell + 0.5 * lengths, perim)
            pieces = _points_along(moved, mids)
            codes = locate_points(pieces, dom.vertices, tol.eps_length)
            outside = float(lengths[codes != Location.INSIDE].sum())
            checked += 1
            assert report.inside_length + outside == pytest.approx(perim, rel=1e-9)
    assert checked > 200


def _points_along(verts, stations):
    d = np.roll(verts, -1, axis=0) - verts
    lens = np.hypot(d[:, 0], d[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    idx = np.clip(np.searchsorted(cum, stations, side="right") - 1, 0, len(lens) - 1)
    frac = (stations - cum[idx]) / lens[idx]
    return verts[idx] + frac[:, None] * d[idx]


def test_global_motion_invariance():
    rng = np.random.default_rng(42)
    compared = 0
    for k, (dom, traj) in enumerate(random_shape_pairs()):
        motions = random_motions(dom, traj, 25, seed=300 + k)
        g = (rng.uniform(0, TWO_PI), *rng.uniform(-2, 2, size=2))
        dom_g = apply_motion(dom, RigidMotion(*g))
        for motion in motions:
            report = clip_boundary(dom, traj, motion)
            combined = RigidMotion(*compose_motions(g, (motion.theta, motion.tx, motion.ty)))
            report_g = clip_boundary(dom_g, traj, combined)
            if report.degenerate or report_g.degenerate:
                continue
            compared += 1
            assert report_g.crossing_count == report.crossing_count
            assert report_g.classification == report.classification
            assert report_g.inside_length == pytest.approx(
                report.inside_length, rel=1e-9, abs=1e-9
            )
    assert compared > 100


def test_crossing_count_symmetric_under_role_exchange():
    compared = 0
    for k, (dom, traj) in enumerate(random_shape_pairs()):
        for motion in random_motions(dom, traj, 40, seed=400 + k):
            fwd = clip_boundary(dom, traj, motion)
            inv = RigidMotion(*inverse_motion(motion.theta, motion.tx, motion.ty))
            rev = clip_boundary(traj, dom, inv)
            if fwd.degenerate or rev.degenerate:
                continue
            compared += 1
            assert rev.crossing_count == fwd.crossing_count
    assert compared > 150


def test_inside_length_against_dense_sampling_oracle():
    """10^3 random placements, 10^5-point arc-length sampling oracle, with
    a 3-standard-error budget plus the oracle's own quantization floor."""
    points = 100_000
    placements = 0
    for k, (dom, traj) in enumerate(random_shape_pairs()):
        perim = traj.perimeter
        for motion in random_motions(dom, traj, 167, seed=500 + k):
            report = clip_boundary(dom, traj, motion)
            if report.degenerate:
                continue
            placements += 1
            moved = motion.transform(traj.vertices)
            est = sampled_inside_length(
                dom.vertices, moved, points_per_unit=points / perim
            )
            frac = est / perim
            se = perim * math.sqrt(max(frac * (1 - frac), 0.0) / points)
            quantization = (report.crossing_count + 2) * perim / points
            assert abs(report.inside_length - est) <= 3 * se + quantization
    assert placements >= 1000


# ---------------------------------------------------------------- containment


def test_containment_circle_in_square(unit_square):
    small = shapes.circle(0.4, res=64)
    big = shapes.circle(0.6, res=64)
    center = RigidMotion(0.0, 0.5, 0.5)
    assert classify_containment(unit_square, small, center)
    assert not classify_containment(unit_square, big, center)


def test_containment_square_in_arm_of_l(l_shape_corner):
    block = shapes.rectangle(0.5, 0.5)
    assert classify_containment(l_shape_corner, block, RigidMotion(0.0, 0.5, 0.5))
    # Sliding the same block up into the notch region pushes it outside.
    assert not classify_containment(l_shape_corner, block, RigidMotion(0.0, 1.1, 1.1))


def test_containment_notch_overlap_matches_grid_oracle(l_shape_corner):
    block = shapes.rectangle(0.5, 0.5)
    motion = RigidMotion(0.0, 1.1, 1.1)
    moved = motion.transform(block.vertices)
    xs = np.linspace(moved[:, 0].min(), moved[:, 0].max(), 40)
    ys = np.linspace(moved[:, 1].min(), moved[:, 1].max(), 40)
    grid = np.array([(x, y) for x in xs for y in ys])
    tol = Tolerance.for_shapes(l_shape_corner, block)
    codes = locate_points(grid, l_shape_corner.vertices, tol.eps_length)
    assert (codes == Location.OUTSIDE).any()
    assert not classify_containment(l_shape_corner, block, motion)


def test_containment_rejects_boundary_contact(unit_square):
    # Shared full edge: vertices inside or on the boundary, but edge contact
    # makes strict containment false.
    block = shapes.rectangle(1.0, 0.2)
    assert not classify_containment(unit_square, block, RigidMotion(0.0, 0.5, 0.1))
    # Identical squares never strictly contain each other.
    sq = shapes.rectangle(1.0, 1.0)
    assert not classify_containment(unit_square, sq, RigidMotion(0.0, 0.5, 0.5))


def test_containment_accepts_preplaced_inner(unit_square):
    inner = SimplePolygon([(0.2, 0.2), (0.8, 0.2), (0.8, 0.8), (0.2, 0.8)])
    assert classify_containment(unit_square, inner)
    outer = SimplePolygon([(-1, -1), (2, -1), (2, 2), (-1, 2)])
    assert not classify_containment(unit_square, outer)


def test_containment_respects_rotation(unit_square):
    # A 1.1 x 0.1 bar is longer than the square's side, so it only fits
    # when tilted toward the diagonal.
    bar = shapes.rectangle(1.1, 0.1)
    assert not classify_containment(unit_square, bar, RigidMotion(0.0, 0.5, 0.5))
    assert classify_containment(unit_square, bar, RigidMotion(math.pi / 4, 0.5, 0.5))
