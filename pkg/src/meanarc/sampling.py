"""Sampling rigid motions uniformly from the translation-angle measure
dK = dx dy dtheta over a window that provably covers every placement able to
touch the domain.

Streams: a sample budget is split across independent Philox substreams so
that results are bit-identical for a fixed (seed, streams) pair no matter
how the streams are scheduled across workers. Degenerate placements are
redrawn from their own stream, which preserves determinism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arcs import ArcReport, clip_boundary
from .geometry import RigidMotion, SimplePolygon, Tolerance, circumradius_about

TWO_PI = 2.0 * math.pi

MAX_REDRAWS = 100
FLOOD_FRACTION = 1e-3


class DegenerateFlood(RuntimeError):
    """Too many placements stayed degenerate after the redraw cap; the
    configuration is pathological (e.g. axis-locked shapes sharing edges)."""

    def __init__(self, exhausted: int, total: int):
        super().__init__(
            f"{exhausted} of {total} placements still degenerate after "
            f"{MAX_REDRAWS} redraws each"
        )
        self.exhausted = exhausted
        self.total = total


@dataclass(frozen=True)
class SamplingWindow:
    """Axis-aligned translation box; the angle always spans [0, 2*pi)."""

    x_range: tuple[float, float]
    y_range: tuple[float, float]

    @property
    def measure(self) -> float:
        dx = self.x_range[1] - self.x_range[0]
        dy = self.y_range[1] - self.y_range[0]
        return dx * dy * TWO_PI

    def shrunk(self, factor: float) -> "SamplingWindow":
        """Window scaled about its center; useful as a negative control
        (an undersized window must bias every estimate)."""
        cx = 0.5 * (self.x_range[0] + self.x_range[1])
        cy = 0.5 * (self.y_range[0] + self.y_range[1])
        hx = 0.5 * (self.x_range[1] - self.x_range[0]) * factor
        hy = 0.5 * (self.y_range[1] - self.y_range[0]) * factor
        return SamplingWindow((cx - hx, cx + hx), (cy - hy, cy + hy))


@dataclass
class PlacementSample:
    motion: RigidMotion
    report: ArcReport
    resample_count: int = 0


def build_window(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    ref=None,
) -> SamplingWindow:
    """Smallest box of reference-point translations that can make the
    trajectory touch the domain: the domain bounding box inflated by the
    trajectory circumradius about ``ref`` (default: its area centroid).

    Motions are taken to place ``ref`` at (tx, ty); any placement with the
    reference point outside this window keeps the shapes disjoint.
    """
    if ref is None:
        ref = trajectory.centroid
    radius = circumradius_about(trajectory, ref)
    xmin, ymin, xmax, ymax = domain.bounds
    return SamplingWindow(
        (xmin - radius, xmax + radius), (ymin - radius, ymax + radius)
    )


def _stream_seeds(seed, streams: int):
    if isinstance(seed, np.random.SeedSequence):
        root = seed
    else:
        root = np.random.SeedSequence(seed)
    return root.spawn(streams)


def _stream_counts(count: int, streams: int) -> list[int]:
    base, extra = divmod(count, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


def _draw_motions(rng: np.random.Generator, window: SamplingWindow, n: int) -> np.ndarray:
    """(n, 3) array of (theta, tx, ty) rows from one uniform block draw."""
    u = rng.random((n, 3))
    out = np.empty((n, 3))
    out[:, 0] = u[:, 0] * TWO_PI
    out[:, 1] = window.x_range[0] + u[:, 1] * (window.x_range[1] - window.x_range[0])
    out[:, 2] = window.y_range[0] + u[:, 2] * (window.y_range[1] - window.y_range[0])
    return out


def motion_arrays(
    window: SamplingWindow, count: int, seed, streams: int = 1
) -> list[np.ndarray]:
    """Per-stream (n_i, 3) motion arrays; concatenation order is stream order
    regardless of which stream is generated first."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if streams < 1:
        raise ValueError("streams must be at least 1")
    seeds = _stream_seeds(seed, streams)
    counts = _stream_counts(count, streams)
    return [
        _draw_motions(np.random.Generator(np.random.Philox(s)), window, n)
        for s, n in zip(seeds, counts)
    ]


def sample_motions(
    window: SamplingWindow, count: int, seed, streams: int = 1
) -> list[RigidMotion]:
    """Draw i.i.d. uniform placements from the window measure."""
    rows = np.vstack(motion_arrays(window, count, seed, streams))
    return [RigidMotion(float(t), float(x), float(y)) for t, x, y in rows]


def resample_policy(report: ArcReport) -> bool:
    """True when a placement must be redrawn: unresolvable geometry or an
    odd crossing parity (both are tolerance artifacts of measure-zero
    configurations, so redrawing does not bias the estimators)."""
    return report.degenerate or report.crossing_count % 2 == 1


def sample_placements(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    count: int,
    seed,
    streams: int = 1,
    tol: Tolerance | None = None,
    window: SamplingWindow | None = None,
) -> list[PlacementSample]:
    """Draw placements, clip each one, and redraw the degenerate ones.

    The trajectory is used as given; callers who want the minimal window
    should pass a centroid-centered template (see shapes.centered_on_centroid).
    Raises DegenerateFlood when more than FLOOD_FRACTION of the slots stay
    degenerate after MAX_REDRAWS redraws.
    """
    if tol is None:
        tol = Tolerance.for_shapes(domain, trajectory)
    if window is None:
        window = build_window(domain, trajectory, ref=(0.0, 0.0))
    seeds = _stream_seeds(seed, streams)
    counts = _stream_counts(count, streams)

    samples: list[PlacementSample] = []
    exhausted = 0
    for s, n in zip(seeds, counts):
        rng = np.random.Generator(np.random.Philox(s))
        rows = _draw_motions(rng, window, n)
        for row in rows:
            motion = RigidMotion(*row)
            report = clip_boundary(domain, trajectory, motion, tol)
            redraws = 0
            while resample_policy(report) and redraws < MAX_REDRAWS:
                motion = RigidMotion(*_draw_motions(rng, window, 1)[0])
                report = clip_boundary(domain, trajectory, motion, tol)
                redraws += 1
            if resample_policy(report):
                exhausted += 1
            samples.append(PlacementSample(motion, report, redraws))
    if count > 0 and exhausted > FLOOD_FRACTION * count:
        raise DegenerateFlood(exhausted, count)
    return samples
