"""Parametric shape catalog and polygon file I/O.

Every builder returns a validated SimplePolygon centered on its area
centroid. Curved outlines (circle, ellipse, keyhole) are discretized with
vertices placed on the curve; resolution defaults to 256 and must be at
least 16.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import SimplePolygon, ValidationError, convex_hull

DEFAULT_RESOLUTION = 256
MIN_RESOLUTION = 16


class InvalidSpec(ValueError):
    """Unknown shape kind, missing parameter, or out-of-range value."""


class InvalidScale(ValueError):
    """Scale factor must be finite and positive."""


class ParseError(ValueError):
    """Shape file is not readable as vertex JSON."""


@dataclass(frozen=True)
class ShapeSpec:
    """A shape kind plus its parameters, e.g. ShapeSpec("circle", {"r": 1})."""

    kind: str
    params: dict = field(default_factory=dict)

    def __str__(self):
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind}:{inner}"


def _centered(verts: np.ndarray) -> SimplePolygon:
    poly = SimplePolygon(verts)
    cx, cy = poly.centroid
    return SimplePolygon._from_trusted(poly.vertices - np.array([cx, cy]))


def _require(params, name, kind):
    if name not in params:
        raise InvalidSpec(f"{kind}: missing required parameter '{name}'")
    return params[name]


def _positive(value, name, kind) -> float:
    v = float(value)
    if not math.isfinite(v) or v <= 0:
        raise InvalidSpec(f"{kind}: '{name}' must be positive, got {value}")
    return v


def _resolution(params, kind) -> int:
    res = int(params.get("res", DEFAULT_RESOLUTION))
    if res < MIN_RESOLUTION:
        raise InvalidSpec(
            f"{kind}: resolution {res} below minimum {MIN_RESOLUTION}"
        )
    return res


def circle(r: float, res: int = DEFAULT_RESOLUTION) -> SimplePolygon:
    """Regular res-gon inscribed in the circle of radius r."""
    return ellipse(r, r, res)


def ellipse(a: float, b: float, res: int = DEFAULT_RESOLUTION) -> SimplePolygon:
    a = _positive(a, "a", "ellipse")
    b = _positive(b, "b", "ellipse")
    if res < MIN_RESOLUTION:
        raise InvalidSpec(f"ellipse: resolution {res} below minimum {MIN_RESOLUTION}")
    ang = np.linspace(0.0, 2.0 * math.pi, res, endpoint=False)
    verts = np.column_stack([a * np.cos(ang), b * np.sin(ang)])
    return SimplePolygon(verts)


def rectangle(w: float, h: float) -> SimplePolygon:
    w = _positive(w, "w", "rectangle")
    h = _positive(h, "h", "rectangle")
    x, y = 0.5 * w, 0.5 * h
    return SimplePolygon([(-x, -y), (x, -y), (x, y), (-x, y)])


def regular_polygon(n: int, r: float) -> SimplePolygon:
    n = int(n)
    if n < 3:
        raise InvalidSpec(f"regular: need n >= 3 sides, got {n}")
    r = _positive(r, "r", "regular")
    ang = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return SimplePolygon(np.column_stack([r * np.cos(ang), r * np.sin(ang)]))


def star(outer: float, inner: float, points: int = 5) -> SimplePolygon:
    """Star with 2*points vertices alternating between two radii."""
    points = int(points)
    if points < 3:
        raise InvalidSpec(f"star: need at least 3 points, got {points}")
    outer = _positive(outer, "outer", "star")
    inner = _positive(inner, "inner", "star")
    if inner >= outer:
        raise InvalidSpec(
            f"star: inner radius {inner} must be below outer radius {outer}"
        )
    ang = np.linspace(0.0, 2.0 * math.pi, 2 * points, endpoint=False)
    rad = np.where(np.arange(2 * points) % 2 == 0, outer, inner)
    return SimplePolygon(np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]))


def l_shape(size: float = 2.0, arm: float = 1.0) -> SimplePolygon:
    """Square of side ``size`` with the opposite quadrant removed, leaving
    two arms of width ``arm``."""
    size = _positive(size, "size", "lshape")
    arm = _positive(arm, "arm", "lshape")
    if arm >= size:
        raise InvalidSpec(f"lshape: arm width {arm} must be below size {size}")
    verts = [
        (0.0, 0.0),
        (size, 0.0),
        (size, arm),
        (arm, arm),
        (arm, size),
        (0.0, size),
    ]
    return _centered(np.array(verts))


def keyhole(
    r: float,
    width: float | None = None,
    depth: float | None = None,
    res: int = DEFAULT_RESOLUTION,
) -> SimplePolygon:
    """Disk of radius r with a radial slot cut in from the rim."""
    r = _positive(r, "r", "keyhole")
    width = 0.4 * r if width is None else _positive(width, "width", "keyhole")
    depth = 1.0 * r if depth is None else _positive(depth, "depth", "keyhole")
    if width >= r:
        raise InvalidSpec(f"keyhole: slot width {width} must be below radius {r}")
    if depth >= 1.8 * r:
        raise InvalidSpec(f"keyhole: slot depth {depth} too deep for radius {r}")
    if res < MIN_RESOLUTION:
        raise InvalidSpec(f"keyhole: resolution {res} below minimum {MIN_RESOLUTION}")
    alpha = math.asin(0.5 * width / r)
    ang = np.linspace(alpha, 2.0 * math.pi - alpha, res)
    rim = np.column_stack([r * np.cos(ang), r * np.sin(ang)])
    # The rim already starts on the slot's upper lip and ends on the lower
    # lip, so the slot contributes only its two inner corners; the loop
    # closes along the upper lip.
    slot = np.array(
        [
            (r - depth, -0.5 * width),
            (r - depth, 0.5 * width),
        ]
    )
    verts = np.vstack([rim, slot])
    return _centered(verts)


def comb(
    teeth: int = 3,
    tooth: float = 0.5,
    gap: float = 0.35,
    base: float = 0.5,
    height: float = 1.0,
) -> SimplePolygon:
    """Rectangular base with ``teeth`` upward teeth of width ``tooth``
    separated by ``gap``; teeth rise ``height`` above a base of thickness
    ``base``."""
    teeth = int(teeth)
    if teeth < 2:
        raise InvalidSpec(f"comb: need at least 2 teeth, got {teeth}")
    tooth = _positive(tooth, "tooth", "comb")
    gap = _positive(gap, "gap", "comb")
    base = _positive(base, "base", "comb")
    height = _positive(height, "height", "comb")
    width = teeth * tooth + (teeth - 1) * gap
    top = base + height
    verts = [(0.0, 0.0), (width, 0.0)]
    # Walk the toothed profile right to left.
    x = width
    for k in range(teeth):
        verts.append((x, top))
        verts.append((x - tooth, top))
        x -= tooth
        if k < teeth - 1:
            verts.append((x, base))
            verts.append((x - gap, base))
            x -= gap
    return _centered(np.array(verts))


def random_convex(n: int = 12, r: float = 1.0, seed: int = 0) -> SimplePolygon:
    """Convex hull of n points drawn uniformly from the disk of radius r."""
    n = int(n)
    if n < 3:
        raise InvalidSpec(f"randomconvex: need at least 3 points, got {n}")
    r = _positive(r, "r", "randomconvex")
    rng = np.random.default_rng(int(seed))
    for _ in range(32):
        rad = r * np.sqrt(rng.random(n))
        ang = rng.uniform(0.0, 2.0 * math.pi, n)
        pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        try:
            hull = convex_hull(pts)
        except ValueError:
            continue
        cx, cy = hull.centroid
        return SimplePolygon._from_trusted(hull.vertices - np.array([cx, cy]))
    raise InvalidSpec("randomconvex: could not draw a non-degenerate hull")


_BUILDERS = {
    "circle": lambda p: circle(_require(p, "r", "circle"), _resolution(p, "circle")),
    "ellipse": lambda p: ellipse(
        _require(p, "a", "ellipse"), _require(p, "b", "ellipse"), _resolution(p, "ellipse")
    ),
    "rectangle": lambda p: rectangle(
        _require(p, "w", "rectangle"), _require(p, "h", "rectangle")
    ),
    "regular": lambda p: regular_polygon(
        _require(p, "n", "regular"), _require(p, "r", "regular")
    ),
    "star": lambda p: star(
        _require(p, "outer", "star"), _require(p, "inner", "star"), p.get("points", 5)
    ),
    "lshape": lambda p: l_shape(p.get("size", 2.0), p.get("arm", 1.0)),
    "keyhole": lambda p: keyhole(
        _require(p, "r", "keyhole"),
        p.get("width"),
        p.get("depth"),
        _resolution(p, "keyhole"),
    ),
    "comb": lambda p: comb(
        p.get("teeth", 3),
        p.get("tooth", 0.5),
        p.get("gap", 0.35),
        p.get("base", 0.5),
        p.get("height", 1.0),
    ),
    "randomconvex": lambda p: random_convex(
        p.get("n", 12), p.get("r", 1.0), p.get("seed", 0)
    ),
    "file": lambda p: load_shape(_require(p, "path", "file")),
}

NONCONVEX_KINDS = ("star", "lshape", "keyhole", "comb")


def build(spec: ShapeSpec) -> SimplePolygon:
    """Build the polygon described by a ShapeSpec."""
    kind = spec.kind.lower()
    if kind not in _BUILDERS:
        known = ", ".join(sorted(_BUILDERS))
        raise InvalidSpec(f"unknown shape kind '{spec.kind}' (known: {known})")
    return _BUILDERS[kind](spec.params)


def parse_spec(text: str) -> ShapeSpec:
    """Parse the mini-syntax ``kind:key=value,key=value``.

    A bare token with no parameters is allowed for kinds whose parameters
    all have defaults. Values parse as numbers when possible, else strings.
    """
    text = text.strip()
    if not text:
        raise InvalidSpec("empty shape spec")
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    params: dict = {}
    if rest:
        if kind == "file":
            # Paths may contain anything; treat the remainder as the path
            # unless it is an explicit key=value form.
            if "=" not in rest:
                return ShapeSpec("file", {"path": rest})
        for item in rest.split(","):
            if not item:
                continue
            if "=" not in item:
                raise InvalidSpec(f"bad shape parameter '{item}' in '{text}'")
            key, _, value = item.partition("=")
            key = key.strip()
            value = value.strip()
            try:
                num = float(value)
                params[key] = int(num) if num == int(num) and "." not in value and "e" not in value.lower() else num
            except ValueError:
                params[key] = value
    return ShapeSpec(kind, params)


def scale(polygon: SimplePolygon, factor: float) -> SimplePolygon:
    """Scale a polygon about its area centroid."""
    f = float(factor)
    if not math.isfinite(f) or f <= 0.0:
        raise InvalidScale(f"scale factor must be positive, got {factor}")
    cx, cy = polygon.centroid
    c = np.array([cx, cy])
    return SimplePolygon._from_trusted(c + f * (polygon.vertices - c))


def centered_on_centroid(polygon: SimplePolygon) -> SimplePolygon:
    """Translate a polygon so its area centroid sits at the origin."""
    cx, cy = polygon.centroid
    return SimplePolygon._from_trusted(polygon.vertices - np.array([cx, cy]))


def save_shape(polygon: SimplePolygon, path) -> None:
    """Write vertices as JSON with full float precision (17 significant
    digits, implied closure)."""
    rows = ",\n    ".join(
        "[%.17g, %.17g]" % (x, y) for x, y in polygon.vertices
    )
    with open(path, "w") as fh:
        fh.write('{\n  "vertices": [\n    %s\n  ]\n}\n' % rows)


def load_shape(path) -> SimplePolygon:
    """Read a polygon from vertex JSON.

    Raises ParseError for malformed files (with line context from the JSON
    decoder where available) and ValidationError, annotated with the path,
    for vertex data that is not a simple polygon.
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise ParseError(f"{path}: expected an object with a 'vertices' key")
    raw = data["vertices"]
    if not isinstance(raw, list):
        raise ParseError(f"{path}: 'vertices' must be a list of [x, y] pairs")
    for i, row in enumerate(raw):
        if (
            not isinstance(row, (list, tuple))
            or len(row) != 2
            or not all(isinstance(v, (int, float)) for v in row)
        ):
            raise ParseError(f"{path}: vertex {i} is not an [x, y] pair: {row!r}")
        if not all(math.isfinite(float(v)) for v in row):
            raise ParseError(f"{path}: vertex {i} is not finite: {row!r}")
    try:
        return SimplePolygon(np.array(raw, dtype=np.float64))
    except ValidationError as exc:
        raise ValidationError(
            f"{path}: {exc}", vertex_context=exc.vertex_context
        ) from exc
