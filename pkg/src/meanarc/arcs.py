"""Boundary-arc clipping: place a trajectory polygon with a rigid motion and
decompose its boundary into the arcs lying inside a domain polygon.

The decomposition is crossing-driven: every transversal crossing between the
moved trajectory boundary and the domain boundary splits the trajectory loop,
each piece is classified by its arc-length midpoint, and adjacent inside
pieces are reported as maximal arcs. Anything the tolerance cannot resolve
(tangency, endpoint touch, midpoint on the boundary, odd crossing parity)
marks the whole placement degenerate so samplers can redraw it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import (
    ContactKind,
    Location,
    RigidMotion,
    SimplePolygon,
    Tolerance,
    locate_points,
    segment_intersection,
)


class Classification(Enum):
    DISJOINT = "disjoint"
    CROSSING = "crossing"
    TRAJECTORY_INSIDE_DOMAIN = "trajectory_inside_domain"
    DOMAIN_INSIDE_TRAJECTORY = "domain_inside_trajectory"


@dataclass
class Arc:
    """One maximal run of trajectory boundary inside the domain."""

    points: np.ndarray
    length: float


@dataclass
class ArcReport:
    inside_length: float
    crossing_count: int
    arcs: list
    classification: Classification
    degenerate: bool


def _edge_geometry(verts: np.ndarray):
    nxt = np.roll(verts, -1, axis=0)
    d = nxt - verts
    lens = np.hypot(d[:, 0], d[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    return d, lens, cum


def _boundary_crossings(dom: np.ndarray, traj: np.ndarray, tol: Tolerance):
    """All proper crossings between the two boundaries.

    Returns (ell, points, degenerate): crossing positions as arc length along
    the trajectory loop, their coordinates, and whether any contact was
    unresolvable. Candidate edge pairs are prefiltered by bounding box before
    the exact test.
    """
    d1, len1, cum1 = _edge_geometry(traj)
    d2, len2, _ = _edge_geometry(dom)
    eps = tol.eps_length

    a_lo = np.minimum(traj, np.roll(traj, -1, axis=0)) - eps
    a_hi = np.maximum(traj, np.roll(traj, -1, axis=0)) + eps
    b_lo = np.minimum(dom, np.roll(dom, -1, axis=0))
    b_hi = np.maximum(dom, np.roll(dom, -1, axis=0))
    boxes = (
        (a_lo[:, None, 0] <= b_hi[None, :, 0])
        & (b_lo[None, :, 0] <= a_hi[:, None, 0])
        & (a_lo[:, None, 1] <= b_hi[None, :, 1])
        & (b_lo[None, :, 1] <= a_hi[:, None, 1])
    )
    ti, dj = np.nonzero(boxes)
    if len(ti) == 0:
        return np.empty(0), np.empty((0, 2)), False

    qx = dom[dj, 0] - traj[ti, 0]
    qy = dom[dj, 1] - traj[ti, 1]
    d1x, d1y = d1[ti, 0], d1[ti, 1]
    d2x, d2y = d2[dj, 0], d2[dj, 1]
    denom = d1x * d2y - d1y * d2x
    parallel = np.abs(denom) <= eps * (len1[ti] + len2[dj])

    degenerate = False
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qx * d2y - qy * d2x) / denom
        u = (qx * d1y - qy * d1x) / denom
    dt = np.maximum(tol.eps_param, eps / len1[ti])
    du = np.maximum(tol.eps_param, eps / len2[dj])
    in_range = (
        ~parallel & (t >= -dt) & (t <= 1.0 + dt) & (u >= -du) & (u <= 1.0 + du)
    )
    proper = in_range & (t > dt) & (t < 1.0 - dt) & (u > du) & (u < 1.0 - du)
    if (in_range & ~proper).any():
        degenerate = True

    # Parallel pairs that passed the box prefilter are rare; settle them with
    # the scalar predicate, which distinguishes collinear overlap from a
    # clean miss.
    if parallel.any():
        t0 = np.roll(traj, -1, axis=0)
        d0 = np.roll(dom, -1, axis=0)
        for k in np.nonzero(parallel)[0]:
            i, j = ti[k], dj[k]
            contact = segment_intersection(traj[i], t0[i], dom[j], d0[j], tol)
            if contact.kind is ContactKind.DEGENERATE:
                degenerate = True
                break

    sel = np.nonzero(proper)[0]
    ell = cum1[ti[sel]] + t[sel] * len1[ti[sel]]
    pts = np.column_stack(
        [traj[ti[sel], 0] + t[sel] * d1x[sel], traj[ti[sel], 1] + t[sel] * d1y[sel]]
    )
    order = np.argsort(ell)
    return ell[order], pts[order], degenerate


def _points_at(traj: np.ndarray, cum: np.ndarray, ell: np.ndarray) -> np.ndarray:
    """Coordinates of the loop points at the given arc-length positions."""
    perim = cum[-1]
    ell = np.mod(ell, perim)
    edge = np.clip(np.searchsorted(cum, ell, side="right") - 1, 0, len(traj) - 1)
    d = np.roll(traj, -1, axis=0) - traj
    lens = cum[1:] - cum[:-1]
    frac = (ell - cum[edge]) / lens[edge]
    return traj[edge] + frac[:, None] * d[edge]


def _piece_polyline(traj, cum, la, lb, pa, pb):
    """Polyline from loop position la to lb (forward, possibly wrapping),
    with precomputed endpoints pa and pb."""
    perim = cum[-1]
    if lb <= la:
        lb += perim
    pos = cum[:-1]  # loop position of each vertex
    first = np.nonzero((pos > la) & (pos < lb))[0]
    wrapped = np.nonzero((pos + perim > la) & (pos + perim < lb))[0]
    pts = [pa]
    pts.extend(traj[i] for i in first)
    pts.extend(traj[i] for i in wrapped)
    pts.append(pb)
    return np.array(pts)


def clip_boundary(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    motion: RigidMotion,
    tol: Tolerance | None = None,
) -> ArcReport:
    """Move the trajectory and report how its boundary meets the domain."""
    if tol is None:
        tol = Tolerance.for_shapes(domain, trajectory)
    dom = domain.vertices
    traj = motion.transform(trajectory.vertices)
    _, lens, cum = _edge_geometry(traj)
    perim = float(cum[-1])
    eps = tol.eps_length

    ell, pts, degenerate = _boundary_crossings(dom, traj, tol)
    n = len(ell)

    if n == 0:
        code = int(locate_points(traj[:1], dom, eps)[0])
        if code == Location.ON_BOUNDARY:
            return ArcReport(0.0, 0, [], Classification.DISJOINT, True)
        if code == Location.INSIDE:
            loop = np.vstack([traj, traj[:1]])
            return ArcReport(
                perim,
                0,
                [Arc(loop, perim)],
                Classification.TRAJECTORY_INSIDE_DOMAIN,
                degenerate,
            )
        code = int(locate_points(dom[:1], traj, eps)[0])
        if code == Location.ON_BOUNDARY:
            return ArcReport(0.0, 0, [], Classification.DISJOINT, True)
        cls = (
            Classification.DOMAIN_INSIDE_TRAJECTORY
            if code == Location.INSIDE
            else Classification.DISJOINT
        )
        return ArcReport(0.0, 0, [], cls, degenerate)

    if n % 2 == 1:
        degenerate = True

    # Pieces run from each crossing to the next, wrapping at the end.
    starts = ell
    ends = np.roll(ell, -1)
    lengths = ends - starts
    lengths[-1] += perim
    mids = np.mod(starts + 0.5 * lengths, perim)
    mid_pts = _points_at(traj, cum, mids)
    codes = locate_points(mid_pts, dom, eps)
    if (codes == Location.ON_BOUNDARY).any():
        degenerate = True
    inside = codes == Location.INSIDE
    # Transversal crossings must alternate inside/outside around the loop.
    if n >= 2 and (inside == np.roll(inside, -1)).any():
        degenerate = True

    arcs = []
    for k in np.nonzero(inside)[0]:
        nxt = (k + 1) % n
        poly = _piece_polyline(traj, cum, starts[k], ends[k], pts[k], pts[nxt])
        arcs.append(Arc(poly, float(lengths[k])))
    inside_length = float(lengths[inside].sum())

    return ArcReport(inside_length, n, arcs, Classification.CROSSING, degenerate)


def classify_containment(
    outer: SimplePolygon,
    inner: SimplePolygon,
    motion: RigidMotion | None = None,
    tol: Tolerance | None = None,
) -> bool:
    """True iff the inner polygon (optionally placed by ``motion``) lies
    strictly inside the outer one: every vertex strictly inside and no edge
    pair in contact."""
    if tol is None:
        tol = Tolerance.for_shapes(inner, outer)
    moved = inner.vertices if motion is None else motion.transform(inner.vertices)
    codes = locate_points(moved, outer.vertices, tol.eps_length)
    if (codes != Location.INSIDE).any():
        return False
    ell, _, degenerate = _boundary_crossings(outer.vertices, moved, tol)
    return len(ell) == 0 and not degenerate
