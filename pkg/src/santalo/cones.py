"""Sector machinery: deltoids, cone-restricted bodies, and relative polarity.

For unit vectors p, q spanning an angle in (0, pi/2], the deltoid is the
quadrilateral [o, p, r, q] where r is the intersection of the unit-circle
tangents at p and q.  Bodies in the family live inside the deltoid and contain
o, p, q; the relative polar intersects the ordinary polar of the symmetrized
body with the cone spanned by p and q, and the area-sum |M| + |M°| is bounded
by the cone angle, with the quarter-disk as the equality case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    AlreadyOrthogonal,
    DegenerateBody,
    DomainError,
    PointNotInterior,
)
from .polygons import (
    area,
    clip_halfplane,
    convex_hull,
    cross2,
    make_symmetric_polygon,
    polar_dual,
    rot90,
    vertices_of,
)
from .steiner import AxisLine

ANCHOR_SNAP = 1e-9     # vertices this close to o, p or q are snapped onto them
CONTAINMENT_TOL = 1e-10  # allowed signed distance outside the deltoid

_ORIGIN = np.zeros(2)


@dataclass(frozen=True)
class SectorFrame:
    """Unit vectors p, q with q counterclockwise from p, angle in (0, pi/2]."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).copy()
        q = np.asarray(self.q, dtype=float).copy()
        for v in (p, q):
            if v.shape != (2,) or abs(np.hypot(*v) - 1.0) > 1e-12:
                raise DegenerateBody("frame vectors must be unit length")
        if cross2(p, q) <= 1e-12:
            raise DegenerateBody("q must lie strictly counterclockwise from p")
        if float(p @ q) < -1e-9:
            raise DegenerateBody("frame angle must not exceed pi/2")
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_angle(cls, angle: float, phi0: float = 0.0) -> "SectorFrame":
        if not 0.0 < angle <= math.pi / 2 + 1e-12:
            raise DegenerateBody("angle must lie in (0, pi/2]")
        p = np.array([math.cos(phi0), math.sin(phi0)])
        q = np.array([math.cos(phi0 + angle), math.sin(phi0 + angle)])
        return cls(p, q)

    @cached_property
    def angle(self) -> float:
        return math.atan2(float(cross2(self.p, self.q)), float(self.p @ self.q))

    @cached_property
    def r(self) -> np.ndarray:
        """Intersection of the unit-circle tangent lines at p and q."""
        d = self.q - self.p
        return np.array([d[1], -d[0]]) / float(cross2(self.p, self.q))

    @cached_property
    def axis(self) -> AxisLine:
        """Symmetry axis of the deltoid, through o and (p+q)/2."""
        return AxisLine(self.p + self.q)

    @cached_property
    def deltoid_vertices(self) -> np.ndarray:
        V = np.array([_ORIGIN, self.p, self.r, self.q])
        V.setflags(write=False)
        return V

    def contains(self, pts, tol: float = CONTAINMENT_TOL) -> np.ndarray:
        """Which points lie in the deltoid, fattened by distance ``tol``."""
        V = self.deltoid_vertices
        P = np.atleast_2d(np.asarray(pts, dtype=float))
        E = np.roll(V, -1, axis=0) - V
        lengths = np.hypot(E[:, 0], E[:, 1])
        d = P[:, None, :] - V[None, :, :]
        cr = (E[None, :, 0] * d[..., 1] - E[None, :, 1] * d[..., 0]) / lengths[None, :]
        return np.all(cr >= -tol, axis=1)

    def interior_distance(self, pts) -> np.ndarray:
        """Signed distance of points to the deltoid boundary (positive inside)."""
        V = self.deltoid_vertices
        P = np.atleast_2d(np.asarray(pts, dtype=float))
        E = np.roll(V, -1, axis=0) - V
        lengths = np.hypot(E[:, 0], E[:, 1])
        d = P[:, None, :] - V[None, :, :]
        cr = (E[None, :, 0] * d[..., 1] - E[None, :, 1] * d[..., 0]) / lengths[None, :]
        return np.min(cr, axis=1)


class ConeBody:
    """Convex polygon inside a deltoid, containing o, p and q as vertices."""

    __slots__ = ("frame", "vertices")

    def __init__(self, frame: SectorFrame, vertices, *, canonical=False, validate=True):
        if canonical:
            V = np.array(vertices_of(vertices))
        else:
            V = convex_hull(vertices_of(vertices))
            V = np.roll(V, -int(np.argmin(np.hypot(V[:, 0], V[:, 1]))), axis=0)
            for anchor in (_ORIGIN, frame.p, frame.q):
                dist = np.hypot(*(V - anchor).T)
                j = int(np.argmin(dist))
                if dist[j] <= ANCHOR_SNAP:
                    V[j] = anchor
        if validate:
            if np.any(V[0] != 0.0):
                raise DegenerateBody("cone body must contain the origin as a vertex")
            for name, anchor in (("p", frame.p), ("q", frame.q)):
                if not np.any(np.all(V == anchor, axis=1)):
                    raise DegenerateBody(f"cone body must contain {name} as a vertex")
            if not bool(np.all(frame.contains(V))):
                raise DegenerateBody("cone body leaves the deltoid")
        V.setflags(write=False)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "vertices", V)

    def __setattr__(self, name, value):
        raise AttributeError("ConeBody is immutable")

    @property
    def area(self) -> float:
        return area(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConeBody({len(self.vertices)} vertices, angle={self.frame.angle:.4f})"


def deltoid(frame: SectorFrame) -> ConeBody:
    """The deltoid [o, p, r, q] itself, the largest member of the family."""
    return ConeBody(frame, frame.deltoid_vertices)


def relative_polar(M: ConeBody) -> ConeBody:
    """Polar of the symmetrized body, clipped back to the cone of p and q.

    An involution on the family: applying it twice returns the original body
    up to rounding.
    """
    f = M.frame
    K = make_symmetric_polygon(M.vertices)
    W = vertices_of(polar_dual(K))
    W = clip_halfplane(W, -rot90(f.p), 0.0)
    W = clip_halfplane(W, rot90(f.q), 0.0)
    return ConeBody(f, W)


def area_sum(M: ConeBody) -> float:
    """|M| + |M°|, bounded above by the frame angle."""
    return M.area + relative_polar(M).area


def circular_sector_body(frame: SectorFrame, arc_n: int = 512) -> ConeBody:
    """Unit-disk sector between p and q, discretized with ``arc_n`` arc vertices."""
    if arc_n < 2:
        raise ValueError("need at least 2 arc vertices")
    phi0 = math.atan2(frame.p[1], frame.p[0])
    phi = phi0 + frame.angle * np.arange(arc_n) / (arc_n - 1)
    arc = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    arc[0] = frame.p
    arc[-1] = frame.q
    return ConeBody(frame, np.vstack([_ORIGIN, arc]))


def truncated_deltoid(frame: SectorFrame, t: float) -> ConeBody:
    """Pentagon obtained by cutting the deltoid corner r at depth ``t``.

    The cut line is {<x, r> = <r, r> - t}; for small t this pentagon strictly
    beats the deltoid in area-sum.
    """
    r = frame.r
    rr = float(r @ r)
    if not 0.0 < t < rr - 1.0:
        raise DomainError("truncation depth must keep p and q on the body")
    W = clip_halfplane(frame.deltoid_vertices, r, rr - t)
    return ConeBody(frame, W)


def random_cone_body(frame: SectorFrame, n_points: int, rng) -> ConeBody:
    """Hull of uniform points in the deltoid together with o, p and q."""
    rng = np.random.default_rng(rng)
    o, p, r, q = frame.deltoid_vertices
    for _ in range(20):
        u = rng.uniform(0.0, 1.0, n_points)
        v = rng.uniform(0.0, 1.0, n_points)
        su = np.sqrt(u)
        pick = rng.integers(0, 2, n_points)  # the two triangles have equal area
        B = np.where(pick[:, None] == 0, p[None, :], q[None, :])
        pts = (1.0 - su)[:, None] * o + (su * (1.0 - v))[:, None] * B + (su * v)[:, None] * r
        try:
            return ConeBody(frame, np.vstack([pts, [o, p, q]]))
        except DegenerateBody:
            continue
    raise DegenerateBody("random cone-body sampling kept degenerating")


def radial_cone_body(frame: SectorFrame, n_arc: int, rng, r_min: float = 0.55) -> ConeBody:
    """Vertex-rich random body: radial samples at sorted angles between p and q.

    Most samples land in convex position, so the hull keeps the vertex budget;
    useful as a rich starting point for the area-sum local search.
    """
    rng = np.random.default_rng(rng)
    phi0 = math.atan2(frame.p[1], frame.p[0])
    for _ in range(20):
        theta = phi0 + frame.angle * np.sort(rng.uniform(0.02, 0.98, n_arc))
        radii = rng.uniform(r_min, 1.0, n_arc)
        pts = radii[:, None] * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        try:
            return ConeBody(frame, np.vstack([pts, frame.deltoid_vertices[[0, 1, 3]]]))
        except DegenerateBody:
            continue
    raise DegenerateBody("radial cone-body sampling kept degenerating")


def orthogonalize(M: ConeBody, arc_n: int = 512) -> ConeBody:
    """Widen the frame to a right angle by gluing the disk sector between q and q'.

    The area-sum grows by exactly (pi/2 - angle), up to the O(1/arc_n^2) arc
    discretization error.
    """
    f = M.frame
    if f.angle >= math.pi / 2 - 1e-12:
        raise AlreadyOrthogonal("frame angle is already pi/2")
    q2 = rot90(f.p)
    phi0 = math.atan2(f.p[1], f.p[0])
    phi = phi0 + f.angle + (math.pi / 2 - f.angle) * np.arange(arc_n + 1) / arc_n
    arc = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    arc[0] = f.q
    arc[-1] = q2
    new_frame = SectorFrame(f.p, q2)
    return ConeBody(new_frame, np.vstack([M.vertices, arc]))


@dataclass(frozen=True)
class CutChord:
    """Chord of a cone through a fixed interior point, with the cut-off area."""

    b1: np.ndarray
    b2: np.ndarray
    midpoint: np.ndarray
    cut_area: float


def minimal_cut_line(apex, dir1, dir2, m) -> CutChord:
    """Line through m minimizing the triangle cut from the cone at ``apex``.

    The minimizer is the unique chord with midpoint m: each endpoint is the
    intersection of one boundary ray with the reflection of the other through
    m.  Raises PointNotInterior when m is not strictly inside the cone.
    """
    apex = np.asarray(apex, dtype=float)
    d1 = np.asarray(dir1, dtype=float)
    d2 = np.asarray(dir2, dtype=float)
    m = np.asarray(m, dtype=float)
    den = float(cross2(d1, d2))
    if abs(den) <= 1e-14 * float(np.hypot(*d1) * np.hypot(*d2)):
        raise DegenerateBody("cone rays must not be collinear")
    w = m - apex
    alpha = float(cross2(w, d2)) / den
    beta = float(cross2(d1, w)) / den
    if alpha <= 0.0 or beta <= 0.0:
        raise PointNotInterior("point must be strictly inside the cone")
    b1 = apex + 2.0 * alpha * d1
    b2 = apex + 2.0 * beta * d2
    return CutChord(b1, b2, m.copy(), 2.0 * alpha * beta * abs(den))


def extremal_sector_value(t: float) -> float:
    """Area-sum of the extremal ellipse-sector profile at parameter t in [0, 1).

    Value pi/2 at t = 0 (the quarter disk), strictly decreasing, with limit
    3/2 as t -> 1 (the triangle/deltoid pair).
    """
    if not 0.0 <= t < 1.0:
        raise DomainError("parameter must lie in [0, 1)")
    if t == 0.0:
        return math.pi / 2
    return t + (2.0 - t * t) / math.sqrt(1.0 - t * t) * math.atan(
        math.sqrt((1.0 - t) / (1.0 + t))
    )


def ellipse_sector_body(t: float, frame: SectorFrame, n: int = 512) -> ConeBody:
    """Intersection of the extremal ellipse at parameter t with the deltoid.

    Requires an orthogonal frame.  The ellipse has half-axes a <= 1 <= b along
    the deltoid axis and across it, chosen so that p and q lie on the boundary
    and the arc spans parameter angle beta with cos(beta) = t.
    """
    if not 0.0 <= t < 1.0:
        raise DomainError("parameter must lie in [0, 1)")
    if abs(float(frame.p @ frame.q)) > 1e-9:
        raise DomainError("ellipse sector bodies need an orthogonal frame")
    if n < 3:
        raise ValueError("need at least 3 arc vertices")
    beta = math.acos(t)
    a = 1.0 / (math.sqrt(2.0) * math.cos(beta / 2.0))
    b = 1.0 / (math.sqrt(2.0) * math.sin(beta / 2.0))
    u = frame.axis.direction
    w = rot90(u)
    psi = beta * (np.arange(n) / (n - 1) - 0.5)
    arc = (a * np.cos(psi))[:, None] * u[None, :] + (b * np.sin(psi))[:, None] * w[None, :]
    arc[0] = frame.p
    arc[-1] = frame.q
    return ConeBody(frame, np.vstack([_ORIGIN, arc]))
