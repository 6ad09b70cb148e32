"""Closed-form kinematic-measure results for a (domain, trajectory) pair.

All functions take ShapeSummary values (area, perimeter, convexity flag) and
return exact expressions; nothing here samples. Subscript convention in the
docstrings: 1 is the explored domain, 2 the moving trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import SimplePolygon

TWO_PI = 2.0 * math.pi


class NegativeResult(ValueError):
    """Small-trajectory mean went negative: the summaries are outside the
    regime where that expression is meaningful. Carries ``value``."""

    def __init__(self, value: float):
        super().__init__(
            f"small-trajectory mean is negative ({value}); the trajectory "
            "perimeter is too large relative to the domain"
        )
        self.value = value


@dataclass(frozen=True)
class ShapeSummary:
    """Area, perimeter and convexity of one shape."""

    area: float
    perimeter: float
    convex: bool = True

    def __post_init__(self):
        if not (self.area > 0.0 and math.isfinite(self.area)):
            raise ValueError(f"area must be positive, got {self.area}")
        if not (self.perimeter > 0.0 and math.isfinite(self.perimeter)):
            raise ValueError(f"perimeter must be positive, got {self.perimeter}")
        # Isoperimetric sanity: P^2 >= 4*pi*A, with a whisker of slack for
        # rounding on near-circular polygons.
        if self.perimeter**2 < 4.0 * math.pi * self.area * (1.0 - 1e-12):
            raise ValueError(
                f"impossible summary: perimeter {self.perimeter} too short "
                f"for area {self.area}"
            )

    @classmethod
    def of(cls, polygon: SimplePolygon) -> "ShapeSummary":
        return cls(polygon.area, polygon.perimeter, polygon.is_convex)


def blaschke_arc_measure(domain: ShapeSummary, trajectory: ShapeSummary) -> float:
    """Kinematic measure of trajectory boundary length inside the domain:
    2*pi*A1*P2. Holds for any shapes."""
    return TWO_PI * domain.area * trajectory.perimeter


def poincare_crossing_measure(domain: ShapeSummary, trajectory: ShapeSummary) -> float:
    """Kinematic measure of boundary crossing count: 4*P1*P2. Holds for any
    shapes."""
    return 4.0 * domain.perimeter * trajectory.perimeter


def cauchy_mean(domain: ShapeSummary) -> float:
    """Mean arc length pi*A1/P1: the trajectory-independent plateau reached
    once no placement of the trajectory fits inside the domain."""
    return math.pi * domain.area / domain.perimeter


def santalo_total_measure(domain: ShapeSummary, trajectory: ShapeSummary) -> float:
    """Kinematic measure of placements whose interiors overlap:
    2*pi*(A1+A2) + P1*P2. Exact for convex pairs."""
    return TWO_PI * (domain.area + trajectory.area) + domain.perimeter * trajectory.perimeter


def containment_measure(domain: ShapeSummary, trajectory: ShapeSummary) -> float:
    """Kinematic measure of placements with the trajectory inside the domain:
    2*pi*(A1+A2) - P1*P2 for convex pairs whose crossings are pairwise
    (positive values certify that the trajectory fits)."""
    return TWO_PI * (domain.area + trajectory.area) - domain.perimeter * trajectory.perimeter


def small_trajectory_mean(domain: ShapeSummary, trajectory: ShapeSummary) -> float:
    """Mean arc length (P1*P2 - 2*pi*A2) / (2*P1) for convex trajectories
    small enough to fit inside the domain.

    Raises NegativeResult (carrying the value) when the expression goes
    negative, which signals summaries outside its regime.
    """
    value = (domain.perimeter * trajectory.perimeter - TWO_PI * trajectory.area) / (
        2.0 * domain.perimeter
    )
    if value < 0.0:
        raise NegativeResult(value)
    return value


def mazzolo_mean(domain: ShapeSummary, trajectory: ShapeSummary) -> float:
    """Mean arc length averaged over all overlapping placements (including
    full containments): 2*pi*A1*P2 / (2*pi*(A1+A2) + P1*P2)."""
    return blaschke_arc_measure(domain, trajectory) / santalo_total_measure(
        domain, trajectory
    )
