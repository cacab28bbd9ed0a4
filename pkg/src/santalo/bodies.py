"""Body generators and closed-form volume references.

Random origin-symmetric polygons, regular polygons, unit balls of the p-norms
with their Gamma-function area, and the cube/cross-polytope/ball volumes used
by the higher-dimensional volume-sum checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateBody
from .polygons import SymmetricPolygon, make_symmetric_polygon

RANDOM_SHAPES = ("disk", "annulus", "box")


@dataclass(frozen=True)
class LpBallSpec:
    """Inscribed-polygon discretization request for the planar p-norm ball."""

    p: float
    n_vertices: int

    def __post_init__(self):
        if not self.p > 1.0:
            raise ValueError("p-norm exponent must exceed 1")
        if self.n_vertices < 8 or self.n_vertices % 2:
            raise ValueError("vertex count must be even and at least 8")


def lp_ball_area(p: float) -> float:
    """Area of {|x|^p + |y|^p <= 1}: 4*Gamma(1+1/p)^2 / Gamma(1+2/p)."""
    if p < 1.0:
        raise ValueError("exponent must be at least 1")
    return 4.0 * math.gamma(1.0 + 1.0 / p) ** 2 / math.gamma(1.0 + 2.0 / p)


def lp_ball_polygon(spec: LpBallSpec) -> SymmetricPolygon:
    """Inscribed polygon of the p-ball with vertices at equally spaced angles."""
    m = spec.n_vertices // 2
    theta = np.pi * np.arange(m) / m
    c, s = np.cos(theta), np.sin(theta)
    e = 2.0 / spec.p
    half = np.stack(
        [np.sign(c) * np.abs(c) ** e, np.sign(s) * np.abs(s) ** e], axis=1
    )
    return SymmetricPolygon(np.concatenate([half, -half]))


def random_symmetric_polygon(n_half: int, rng_seed, shape: str = "disk") -> SymmetricPolygon:
    """Hull of ``n_half`` sampled points and their antipodes, deterministic per seed.

    ``rng_seed`` may be anything ``numpy.random.default_rng`` accepts, including
    an existing Generator.  Degenerate samples are redrawn up to a retry cap.
    """
    if n_half < 2:
        raise DegenerateBody("need at least 2 half-vertices")
    if shape not in RANDOM_SHAPES:
        raise ValueError(f"shape must be one of {RANDOM_SHAPES}")
    rng = np.random.default_rng(rng_seed)
    for _ in range(50):
        if shape == "disk":
            phi = rng.uniform(0.0, 2.0 * np.pi, n_half)
            r = np.sqrt(rng.uniform(0.0, 1.0, n_half))
        elif shape == "annulus":
            phi = rng.uniform(0.0, 2.0 * np.pi, n_half)
            r = rng.uniform(0.5, 1.0, n_half)
        else:
            pts = rng.uniform(-1.0, 1.0, (n_half, 2))
            try:
                return make_symmetric_polygon(pts)
            except DegenerateBody:
                continue
        pts = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)
        try:
            return make_symmetric_polygon(pts)
        except DegenerateBody:
            continue
    raise DegenerateBody("random sampling kept collapsing to a degenerate hull")


class HighDimVolumes(NamedTuple):
    cube_vol: float
    cross_vol: float
    ball_vol: float
    sum_exceeds: bool


def highdim_counterexample(n: int) -> HighDimVolumes:
    """Volumes of [-1,1]^n, its polar cross-polytope, and the unit ball.

    ``sum_exceeds`` records whether cube + cross volume exceeds twice the ball
    volume, which kills any volume-sum analogue of the planar bound for n >= 3.
    """
    if n < 3:
        raise ValueError("dimension must be at least 3")
    cube = 2.0**n
    cross = 2.0**n / math.factorial(n)
    ball = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    return HighDimVolumes(cube, cross, ball, cube + cross > 2.0 * ball)


def regular_polygon(k: int, circumradius: float = 1.0):
    """Regular k-gon inscribed in the circle of the given radius.

    Even k yields a SymmetricPolygon; odd k yields a plain CCW vertex array
    (still usable with the plain-polygon polarity helpers).
    """
    if k < 3:
        raise ValueError("need at least 3 vertices")
    if circumradius <= 0.0:
        raise ValueError("circumradius must be positive")
    theta = 2.0 * np.pi * np.arange(k) / k
    if k % 2 == 0:
        half_theta = theta[: k // 2]
        half = circumradius * np.stack([np.cos(half_theta), np.sin(half_theta)], axis=1)
        return SymmetricPolygon(np.concatenate([half, -half]))
    return circumradius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
