"""Steiner symmetrization about lines through the origin.

The symmetral recenters every chord orthogonal to the axis; for polygons it is
again a polygon whose breakpoints are the axis-projections of the vertices.
Area is preserved and, for origin-symmetric bodies, the polar area never
decreases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBody
from .polygons import (
    SymmetricPolygon,
    convex_hull,
    polygon_diameter,
    rot90,
    vertices_of,
)


@dataclass(frozen=True)
class AxisLine:
    """A line through the origin, stored as a unit direction vector."""

    direction: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        if d.shape != (2,) or not np.all(np.isfinite(d)):
            raise DegenerateBody("axis direction must be a finite 2-vector")
        norm = float(np.hypot(*d))
        if norm < 1e-150:
            raise DegenerateBody("axis direction must be nonzero")
        d = d / norm
        d.setflags(write=False)
        object.__setattr__(self, "direction", d)


def _slice_bounds(V: np.ndarray, u: np.ndarray, w: np.ndarray, t: float):
    """Min and max of the transverse coordinate over the slice {<x,d> = t}."""
    u2 = np.roll(u, -1)
    w2 = np.roll(w, -1)
    mask = ((u - t) * (u2 - t) <= 0.0) & (u != u2)
    if not np.any(mask):
        return 0.0, 0.0
    frac = (t - u[mask]) / (u2[mask] - u[mask])
    ws = w[mask] + frac * (w2[mask] - w[mask])
    return float(ws.min()), float(ws.max())


def _symmetral_vertices(V: np.ndarray, d: np.ndarray) -> np.ndarray:
    dp = rot90(d)
    u = V @ d
    w = V @ dp
    order = np.argsort(u, kind="stable")
    tol = 1e-12 * polygon_diameter(V)
    # merge coincident breakpoints into their run means
    def run_mean(r):
        b = float(np.mean(r))
        return 0.0 if abs(b) <= tol else b  # keep zero-straddling runs exactly centered

    breaks = []
    run = [u[order[0]]]
    for idx in order[1:]:
        if u[idx] - run[-1] <= tol:
            run.append(u[idx])
        else:
            breaks.append(run_mean(run))
            run = [u[idx]]
    breaks.append(run_mean(run))
    pts = []
    for t in breaks:
        lo, hi = _slice_bounds(V, u, w, t)
        width = max(hi - lo, 0.0)
        pts.append((t, -0.5 * width))
        pts.append((t, 0.5 * width))
    pts = np.array(pts)
    return pts[:, 0:1] * d[None, :] + pts[:, 1:2] * dp[None, :]


def steiner_symmetral(P, axis: AxisLine):
    """Steiner symmetral of a convex polygon about the axis.

    Accepts a SymmetricPolygon (returns one) or a plain CCW vertex array
    (returns the hull array of the symmetral).  Area is preserved up to
    rounding; the output is reflection-symmetric about the axis.
    """
    V = vertices_of(P)
    pts = _symmetral_vertices(V, axis.direction)
    hull = convex_hull(pts)
    if isinstance(P, SymmetricPolygon):
        return SymmetricPolygon(hull)
    return hull


def reflect(P, axis: AxisLine):
    """Mirror image through the axis line; an involution up to rounding."""
    d = axis.direction
    # reflection matrix 2 d d^T - I applied row-wise
    c, s = d
    R = np.array([[c * c - s * s, 2.0 * c * s], [2.0 * c * s, s * s - c * c]])
    V = vertices_of(P)
    W = V @ R.T
    W = W[::-1]  # restore CCW orientation
    if isinstance(P, SymmetricPolygon):
        return SymmetricPolygon(W)
    return W
