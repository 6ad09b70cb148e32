"""Planar geometry primitives: simple polygons, rigid motions, and the
tolerance-disciplined predicates everything else is built on.

All polygons are stored as (n, 2) float64 vertex arrays in counterclockwise
order. There is no exact arithmetic here; instead every predicate takes an
explicit tolerance and ambiguous configurations are reported as degenerate
rather than silently resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

TWO_PI = 2.0 * math.pi

# Relative scales used when no explicit tolerance is supplied.
REL_EPS_LENGTH = 1e-9
EPS_PARAM = 1e-12


class DegenerateInput(ValueError):
    """Raised when an operation cannot produce a meaningful result
    (e.g. a convex hull of collinear points)."""


class ValidationError(ValueError):
    """Raised when vertex data does not describe a simple polygon.

    Carries ``vertex_context`` (an index or index pair) so callers such as
    the shape loader can point at the offending input.
    """

    def __init__(self, message, vertex_context=None):
        super().__init__(message)
        self.vertex_context = vertex_context


class Location(IntEnum):
    OUTSIDE = 0
    INSIDE = 1
    ON_BOUNDARY = 2


class ContactKind(Enum):
    NONE = "none"
    PROPER = "proper"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SegmentContact:
    """Result of intersecting two segments.

    For a PROPER contact, ``point`` is the crossing location and ``t``/``u``
    are the parameters along the first and second segment. DEGENERATE marks
    endpoint touches, collinear overlaps and near-tangencies that a caller
    must treat as unresolvable at the current tolerance.
    """

    kind: ContactKind
    point: tuple[float, float] | None = None
    t: float | None = None
    u: float | None = None


NO_CONTACT = SegmentContact(ContactKind.NONE)
DEGENERATE_CONTACT = SegmentContact(ContactKind.DEGENERATE)


@dataclass(frozen=True)
class Tolerance:
    """Length and parameter tolerances for the geometric predicates.

    eps_length is an absolute length; eps_param is the floor for segment
    parameters on [0, 1].
    """

    eps_length: float
    eps_param: float = EPS_PARAM

    @classmethod
    def for_shapes(cls, *polygons: "SimplePolygon") -> "Tolerance":
        """Tolerance scaled to the diameter of the largest input shape."""
        diam = max(p.diameter for p in polygons)
        return cls(eps_length=REL_EPS_LENGTH * diam)


@dataclass(frozen=True)
class RigidMotion:
    """Rotation by ``theta`` about the origin followed by a translation.

    theta is normalized into [0, 2*pi).
    """

    theta: float
    tx: float
    ty: float

    def __post_init__(self):
        th = self.theta % TWO_PI
        object.__setattr__(self, "theta", th)

    def transform(self, points: np.ndarray) -> np.ndarray:
        """Apply the motion to an (n, 2) array of points."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        pts = np.asarray(points, dtype=np.float64)
        out = np.empty_like(pts)
        out[..., 0] = c * pts[..., 0] - s * pts[..., 1] + self.tx
        out[..., 1] = s * pts[..., 0] + c * pts[..., 1] + self.ty
        return out


def _signed_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _find_edge_conflict(verts: np.ndarray, eps: float):
    """Return (i, j) for the first pair of non-adjacent edges that touch or
    cross, or None when the chain is simple."""
    n = len(verts)
    a0 = verts
    a1 = np.roll(verts, -1, axis=0)
    d = a1 - a0
    lens = np.hypot(d[:, 0], d[:, 1])
    len2 = lens * lens

    # o1[i, j] = cross(d_i, a0_j - a0_i), o2[i, j] = cross(d_i, a1_j - a0_i):
    # orientations of edge j's endpoints relative to edge i's line. By the
    # role swap, cross(d_j, a0_i - a0_j) is o1.T and cross(d_j, a1_i - a0_j)
    # is o2.T, so a strict transversal crossing shows up as sign changes in
    # both the matrix and its transpose.
    rx0 = a0[None, :, 0] - a0[:, None, 0]
    ry0 = a0[None, :, 1] - a0[:, None, 1]
    rx1 = a1[None, :, 0] - a0[:, None, 0]
    ry1 = a1[None, :, 1] - a0[:, None, 1]
    o1 = d[:, None, 0] * ry0 - d[:, None, 1] * rx0
    o2 = d[:, None, 0] * ry1 - d[:, None, 1] * rx1
    opposite = o1 * o2 < 0
    proper = opposite & opposite.T

    # Touches: some endpoint of edge j lies on edge i (perpendicular distance
    # within eps and projection parameter within the segment span).
    proj0 = (rx0 * d[:, None, 0] + ry0 * d[:, None, 1]) / len2[:, None]
    proj1 = (rx1 * d[:, None, 0] + ry1 * d[:, None, 1]) / len2[:, None]
    pad = (eps / lens)[:, None]
    on0 = (np.abs(o1) <= eps * lens[:, None]) & (proj0 >= -pad) & (proj0 <= 1 + pad)
    on1 = (np.abs(o2) <= eps * lens[:, None]) & (proj1 >= -pad) & (proj1 <= 1 + pad)
    touch = on0 | on1
    bad = proper | touch | touch.T

    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    adjacent = (gap <= 1) | (gap == n - 1)
    bad &= ~adjacent
    if not bad.any():
        return None
    i, j = np.argwhere(bad)[0]
    return (int(min(i, j)), int(max(i, j)))


class SimplePolygon:
    """A simple polygon with at least 3 vertices, stored counterclockwise.

    Clockwise input is reversed silently. Vertex data that repeats
    consecutive points, collapses to zero area, or self-intersects raises
    ValidationError naming the offending vertices or edge pair.
    """

    __slots__ = ("vertices", "_area", "_perimeter", "_centroid", "_diameter")

    def __init__(self, vertices, validate: bool = True):
        verts = np.array(vertices, dtype=np.float64)
        if verts.ndim != 2 or verts.shape[1] != 2:
            raise ValidationError("vertex data must be an (n, 2) array")
        if validate:
            verts = self._validated(verts)
        verts.setflags(write=False)
        self.vertices = verts
        self._area = None
        self._perimeter = None
        self._centroid = None
        self._diameter = None

    @classmethod
    def _from_trusted(cls, verts: np.ndarray) -> "SimplePolygon":
        # Fast path for images of already-validated polygons under isometries
        # and positive scalings, which preserve simplicity.
        return cls(verts, validate=False)

    @staticmethod
    def _validated(verts: np.ndarray) -> np.ndarray:
        n = len(verts)
        if n < 3:
            raise ValidationError(f"need at least 3 vertices, got {n}")
        if not np.isfinite(verts).all():
            bad = int(np.flatnonzero(~np.isfinite(verts).all(axis=1))[0])
            raise ValidationError(
                f"vertex {bad} is not finite: {verts[bad].tolist()}",
                vertex_context=bad,
            )
        span = float(np.hypot(*(verts.max(axis=0) - verts.min(axis=0))))
        if span == 0.0:
            raise ValidationError("all vertices coincide")
        eps = REL_EPS_LENGTH * span
        seg = np.roll(verts, -1, axis=0) - verts
        seglen = np.hypot(seg[:, 0], seg[:, 1])
        if (seglen <= eps).any():
            i = int(np.flatnonzero(seglen <= eps)[0])
            raise ValidationError(
                f"vertices {i} and {(i + 1) % n} coincide", vertex_context=i
            )
        conflict = _find_edge_conflict(verts, eps)
        if conflict is not None:
            i, j = conflict
            raise ValidationError(
                f"not a simple polygon: edge {i} (vertex {i} -> {(i + 1) % n}) "
                f"intersects edge {j} (vertex {j} -> {(j + 1) % n})",
                vertex_context=(i, j),
            )
        area2 = _signed_area(verts)
        if abs(area2) <= 0.5 * eps * span:
            raise ValidationError("polygon has zero area")
        if area2 < 0.0:
            verts = verts[::-1].copy()
        # Fold-backs between adjacent edges (zero-width spikes).
        nxt = np.roll(verts, -1, axis=0) - verts
        prv = np.roll(nxt, 1, axis=0)
        cross = prv[:, 0] * nxt[:, 1] - prv[:, 1] * nxt[:, 0]
        dot = prv[:, 0] * nxt[:, 0] + prv[:, 1] * nxt[:, 1]
        prv_len = np.hypot(prv[:, 0], prv[:, 1])
        nxt_len = np.hypot(nxt[:, 0], nxt[:, 1])
        spikes = (np.abs(cross) <= eps * (prv_len + nxt_len)) & (dot < 0)
        if spikes.any():
            i = int(np.flatnonzero(spikes)[0])
            raise ValidationError(
                f"edges fold back at vertex {i}", vertex_context=i
            )
        return verts

    @property
    def area(self) -> float:
        if self._area is None:
            self._area = abs(_signed_area(self.vertices))
        return self._area

    @property
    def perimeter(self) -> float:
        if self._perimeter is None:
            seg = np.roll(self.vertices, -1, axis=0) - self.vertices
            self._perimeter = float(np.hypot(seg[:, 0], seg[:, 1]).sum())
        return self._perimeter

    @property
    def centroid(self) -> tuple[float, float]:
        """Area centroid."""
        if self._centroid is None:
            v = self.vertices
            w = np.roll(v, -1, axis=0)
            cr = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
            a6 = 3.0 * np.sum(cr)  # 6 * signed area, verts are CCW
            cx = float(np.sum((v[:, 0] + w[:, 0]) * cr) / a6)
            cy = float(np.sum((v[:, 1] + w[:, 1]) * cr) / a6)
            self._centroid = (cx, cy)
        return self._centroid

    @property
    def diameter(self) -> float:
        """Maximum pairwise vertex distance."""
        if self._diameter is None:
            v = self.vertices
            if len(v) > 64:
                v = convex_hull(v).vertices
            dx = v[:, None, 0] - v[None, :, 0]
            dy = v[:, None, 1] - v[None, :, 1]
            self._diameter = float(np.sqrt(dx * dx + dy * dy).max())
        return self._diameter

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax)."""
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    @property
    def is_convex(self) -> bool:
        """True when every turn is counterclockwise or collinear within
        tolerance."""
        v = self.vertices
        nxt = np.roll(v, -1, axis=0) - v
        prv = np.roll(nxt, 1, axis=0)
        cross = prv[:, 0] * nxt[:, 1] - prv[:, 1] * nxt[:, 0]
        prv_len = np.hypot(prv[:, 0], prv[:, 1])
        nxt_len = np.hypot(nxt[:, 0], nxt[:, 1])
        eps = REL_EPS_LENGTH * self.diameter
        return bool((cross >= -eps * (prv_len + nxt_len)).all())

    def __repr__(self):
        return f"SimplePolygon({len(self.vertices)} vertices)"


def convex_hull(points) -> SimplePolygon:
    """Convex hull of a point set via Andrew's monotone chain.

    Collinear points on the hull boundary are dropped. Raises
    DegenerateInput when the points do not span two dimensions.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DegenerateInput("expected an (n, 2) point array")
    pts = np.unique(pts, axis=0)
    if len(pts) < 3:
        raise DegenerateInput("hull needs at least 3 distinct points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(iterable):
        chain = []
        for p in iterable:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInput("points are collinear")
    return SimplePolygon._from_trusted(np.array(hull))


def point_in_polygon(point, polygon: SimplePolygon, tol: Tolerance | None = None) -> Location:
    """Classify a point against a polygon: INSIDE, OUTSIDE or ON_BOUNDARY.

    ON_BOUNDARY means within tol.eps_length of some edge.
    """
    if tol is None:
        tol = Tolerance.for_shapes(polygon)
    q = np.asarray(point, dtype=np.float64)
    codes = locate_points(q.reshape(1, 2), polygon.vertices, tol.eps_length)
    return Location(int(codes[0]))


def locate_points(points: np.ndarray, verts: np.ndarray, eps: float) -> np.ndarray:
    """Vectorized point classification; returns int8 codes matching Location.

    Uses the even-odd rule with half-open edges so that ray-through-vertex
    cases never double count; boundary proximity is decided first by exact
    distance to each edge.
    """
    pts = np.asarray(points, dtype=np.float64)
    a = verts
    b = np.roll(verts, -1, axis=0)
    d = b - a
    len2 = d[:, 0] ** 2 + d[:, 1] ** 2

    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]
    rx = px - a[None, :, 0]
    ry = py - a[None, :, 1]
    t = np.clip((rx * d[None, :, 0] + ry * d[None, :, 1]) / len2[None, :], 0.0, 1.0)
    fx = rx - t * d[None, :, 0]
    fy = ry - t * d[None, :, 1]
    on_edge = (fx * fx + fy * fy) <= eps * eps

    ay = a[None, :, 1]
    by = b[None, :, 1]
    straddles = (ay > py) != (by > py)
    # x coordinate of the edge at height py, guarded against the non-straddling
    # columns where the division is meaningless.
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = a[None, :, 0] + (py - ay) * d[None, :, 0] / d[None, :, 1]
    hits = straddles & (px < xs)
    inside = hits.sum(axis=1) % 2 == 1

    codes = np.where(inside, Location.INSIDE, Location.OUTSIDE).astype(np.int8)
    codes[on_edge.any(axis=1)] = Location.ON_BOUNDARY
    return codes


def segment_intersection(a0, a1, b0, b1, tol: Tolerance) -> SegmentContact:
    """Intersect segments a0a1 and b0b1.

    PROPER is reported only for a transversal crossing strictly interior to
    both segments. Endpoint touches, collinear overlaps and near-parallel
    contacts are DEGENERATE; anything else is NONE.
    """
    ax, ay = float(a0[0]), float(a0[1])
    dx1, dy1 = float(a1[0]) - ax, float(a1[1]) - ay
    bx, by = float(b0[0]), float(b0[1])
    dx2, dy2 = float(b1[0]) - bx, float(b1[1]) - by
    eps = tol.eps_length

    denom = dx1 * dy2 - dy1 * dx2
    len1 = math.hypot(dx1, dy1)
    len2 = math.hypot(dx2, dy2)
    qx, qy = bx - ax, by - ay

    if abs(denom) <= eps * (len1 + len2):
        # Effectively parallel. Anything close enough to touch (collinear
        # overlap, shallow-angle graze) is degenerate; separated parallels
        # are a clean miss.
        if _boxes_touch(a0, a1, b0, b1, eps) and _segments_close(a0, a1, b0, b1, eps):
            return DEGENERATE_CONTACT
        return NO_CONTACT

    t = (qx * dy2 - qy * dx2) / denom
    u = (qx * dy1 - qy * dx1) / denom
    dt = max(tol.eps_param, eps / len1 if len1 > 0 else tol.eps_param)
    du = max(tol.eps_param, eps / len2 if len2 > 0 else tol.eps_param)

    if t < -dt or t > 1.0 + dt or u < -du or u > 1.0 + du:
        return NO_CONTACT
    if dt < t < 1.0 - dt and du < u < 1.0 - du:
        return SegmentContact(
            ContactKind.PROPER,
            point=(ax + t * dx1, ay + t * dy1),
            t=t,
            u=u,
        )
    return DEGENERATE_CONTACT


def _boxes_touch(a0, a1, b0, b1, eps) -> bool:
    return (
        min(a0[0], a1[0]) <= max(b0[0], b1[0]) + eps
        and min(b0[0], b1[0]) <= max(a0[0], a1[0]) + eps
        and min(a0[1], a1[1]) <= max(b0[1], b1[1]) + eps
        and min(b0[1], b1[1]) <= max(a0[1], a1[1]) + eps
    )


def _segments_close(a0, a1, b0, b1, eps) -> bool:
    pts = np.array([a0, a1, b0, b1], dtype=np.float64)
    d1 = _point_segment_distance(pts[2], pts[0], pts[1])
    d2 = _point_segment_distance(pts[3], pts[0], pts[1])
    d3 = _point_segment_distance(pts[0], pts[2], pts[3])
    d4 = _point_segment_distance(pts[1], pts[2], pts[3])
    return min(d1, d2, d3, d4) <= eps


def _point_segment_distance(p, a, b) -> float:
    d = b - a
    len2 = float(d @ d)
    if len2 == 0.0:
        return float(np.hypot(*(p - a)))
    t = max(0.0, min(1.0, float((p - a) @ d) / len2))
    f = a + t * d
    return float(np.hypot(*(p - f)))


def apply_motion(polygon: SimplePolygon, motion: RigidMotion) -> SimplePolygon:
    """Rigidly move a polygon. Isometries preserve validity, so the result
    skips re-validation."""
    return SimplePolygon._from_trusted(motion.transform(polygon.vertices))


def circumradius_about(polygon: SimplePolygon, ref) -> float:
    """Largest distance from ``ref`` to any vertex of the polygon."""
    r = np.asarray(ref, dtype=np.float64)
    d = polygon.vertices - r[None, :]
    return float(np.hypot(d[:, 0], d[:, 1]).max())


def signed_distances(points, polygon: SimplePolygon) -> np.ndarray:
    """Distance from each point to the polygon boundary, positive inside."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    verts = polygon.vertices
    a = verts
    b = np.roll(verts, -1, axis=0)
    d = b - a
    len2 = d[:, 0] ** 2 + d[:, 1] ** 2
    rx = pts[:, 0][:, None] - a[None, :, 0]
    ry = pts[:, 1][:, None] - a[None, :, 1]
    t = np.clip((rx * d[None, :, 0] + ry * d[None, :, 1]) / len2[None, :], 0.0, 1.0)
    fx = rx - t * d[None, :, 0]
    fy = ry - t * d[None, :, 1]
    dist = np.sqrt((fx * fx + fy * fy).min(axis=1))
    codes = locate_points(pts, verts, 0.0)
    sign = np.where(codes == Location.INSIDE, 1.0, -1.0)
    return dist * sign
