"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from meanarc import SimplePolygon, shapes

TWO_PI = 2.0 * math.pi


@pytest.fixture
def unit_square() -> SimplePolygon:
    return SimplePolygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


@pytest.fixture
def l_shape_corner() -> SimplePolygon:
    """L-shape with its corner at the origin (2x2 square minus the 1x1 notch)."""
    return SimplePolygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def unit_disk() -> SimplePolygon:
    return shapes.circle(1.0)


def regular_ngon_area(n: int, r: float) -> float:
    return 0.5 * n * r * r * math.sin(TWO_PI / n)


def regular_ngon_perimeter(n: int, r: float) -> float:
    return 2.0 * n * r * math.sin(math.pi / n)


def random_shape_pairs(seed: int = 0):
    """A small zoo of (domain, trajectory) pairs mixing convex and not."""
    return [
        (
            SimplePolygon([(0, 0), (1, 0), (1, 1), (0, 1)]),
            shapes.circle(0.35, res=64),
        ),
        (shapes.l_shape(2.0, 1.0), shapes.rectangle(0.8, 0.3)),
        (shapes.comb(3, 0.5, 0.35, 0.5, 1.0), shapes.rectangle(1.1, 0.2)),
        (shapes.star(1.0, 0.5, 5), shapes.regular_polygon(6, 0.4)),
        (shapes.random_convex(10, 1.0, seed=seed), shapes.ellipse(0.5, 0.25, res=48)),
        (shapes.keyhole(1.0, 0.3, 0.8, res=48), shapes.regular_polygon(3, 0.45)),
    ]
