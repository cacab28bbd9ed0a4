"""Primitives for planar convex polygons, centered (origin-symmetric) and plain.

Vertices are float64 arrays of shape (n, 2) in counterclockwise order.  An
origin-symmetric polygon stores the full vertex list and keeps the antipodal
pairing ``vertices[i + n//2] == -vertices[i]`` bit-exact, which makes polarity
and symmetrization closed operations without drift.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBody, NumericallySingularEdge, SingularMatrix

# Vertices closer than this fraction of the diameter are merged.
VERTEX_MERGE_REL = 1e-12
# Cross-product floor (fraction of diameter^2) below which a vertex triple
# counts as collinear; construction fails rather than silently merging.
CONVEXITY_REL = 1e-14
# Frobenius condition-number cap for the 2x2 edge systems in polar duality.
EDGE_COND_LIMIT = 1e12


def rot90(v):
    """Counterclockwise quarter turn of one vector or an array of vectors."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def cross2(a, b):
    """z-component of the cross product, broadcast over trailing axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def vertices_of(poly) -> np.ndarray:
    """Vertex array of a polygon-like object ((n,2) array or .vertices holder)."""
    v = getattr(poly, "vertices", poly)
    arr = np.asarray(v, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected an (n, 2) vertex array")
    return arr


def polygon_diameter(V) -> float:
    V = vertices_of(V)
    if len(V) == 0:
        return 0.0
    return float(np.ptp(V[:, 0]) + np.ptp(V[:, 1]))


def area(poly) -> float:
    """Shoelace area of a convex polygon (0 for fewer than 3 vertices)."""
    V = vertices_of(poly)
    if len(V) < 3:
        return 0.0
    x, y = V[:, 0], V[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def convex_hull(points, strict_eps=None) -> np.ndarray:
    """Strictly convex hull (CCW) of a point cloud, collinear points pruned.

    Monotone chain with a relative cross-product threshold.  For an input set
    that is exactly centrally symmetric the output vertex list is exactly
    antipodally paired, because every orientation test sees bit-identical
    values on the mirrored chain.
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) < 3:
        raise DegenerateBody("hull needs at least 3 distinct points")
    if strict_eps is None:
        strict_eps = CONVEXITY_REL * polygon_diameter(pts) ** 2
    rows = [(float(x), float(y)) for x, y in pts]

    def chain(P):
        out = []
        for x, y in P:
            while len(out) >= 2:
                bx, by = out[-1]
                ax, ay = out[-2]
                if (bx - ax) * (y - by) - (by - ay) * (x - bx) > strict_eps:
                    break
                out.pop()
            out.append((x, y))
        return out

    lower = chain(rows)
    upper = chain(rows[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3 or area(hull) <= strict_eps:
        raise DegenerateBody("hull has empty interior")
    return hull


class SymmetricPolygon:
    """Origin-symmetric strictly convex polygon.

    ``vertices`` is an (2m, 2) CCW array with ``vertices[i+m] == -vertices[i]``
    exactly; the origin is strictly interior.  Instances are immutable.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or not np.all(np.isfinite(V)):
            raise DegenerateBody("vertices must be a finite (n, 2) array")
        n = len(V)
        if n < 4 or n % 2:
            raise DegenerateBody("need an even vertex count of at least 4")
        m = n // 2
        diam = 2.0 * float(np.max(np.hypot(V[:, 0], V[:, 1])))
        if diam == 0.0:
            raise DegenerateBody("zero-size polygon")
        if np.max(np.abs(V[:m] + V[m:])) > 1e-9 * diam:
            raise DegenerateBody("vertices are not antipodally paired")
        half = 0.5 * (V[:m] - V[m:])  # exactifies the pairing
        V = np.concatenate([half, -half])
        edges = np.roll(V, -1, axis=0) - V
        turns = cross2(edges, np.roll(edges, -1, axis=0))
        if np.min(turns) <= CONVEXITY_REL * diam * diam:
            raise DegenerateBody("vertices not in strictly convex CCW position")
        if np.min(cross2(V, np.roll(V, -1, axis=0))) <= 0.0:
            raise DegenerateBody("origin is not strictly interior")
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("SymmetricPolygon is immutable")

    @property
    def half(self) -> np.ndarray:
        """First half of the vertex list (one representative per antipodal pair)."""
        return self.vertices[: len(self.vertices) // 2]

    @property
    def diameter(self) -> float:
        return 2.0 * float(np.max(np.hypot(self.vertices[:, 0], self.vertices[:, 1])))

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"SymmetricPolygon({len(self.vertices)} vertices, area={area(self):.6g})"


def make_symmetric_polygon(half_vertices) -> SymmetricPolygon:
    """Convex hull of the given points together with their negatives.

    Collinear intermediate points are removed; raises DegenerateBody when the
    hull has empty interior.
    """
    H = np.asarray(half_vertices, dtype=float)
    if H.ndim != 2 or H.shape[1] != 2 or len(H) < 2:
        raise DegenerateBody("need at least 2 half-vertices")
    hull = convex_hull(np.concatenate([H, -H]))
    return SymmetricPolygon(hull)


def _merge_close_cyclic(V: np.ndarray, tol: float) -> np.ndarray:
    """Merge cyclic runs of vertices closer than ``tol`` into their means.

    Antipodal runs merge to exactly negated means, so pairing survives.
    """
    n = len(V)
    gaps = np.hypot(*(np.roll(V, -1, axis=0) - V).T)
    if np.all(gaps > tol):
        return V
    if np.all(gaps <= tol):
        raise DegenerateBody("all polar vertices coincide")
    # rotate so index 0 starts a run (its predecessor is far away)
    start = int(np.argmax(gaps > tol)) + 1
    W = np.roll(V, -start, axis=0)
    g = np.roll(gaps, -start)
    out, run = [], [W[0]]
    for i in range(1, n):
        if g[i - 1] <= tol:
            run.append(W[i])
        else:
            out.append(np.mean(run, axis=0))
            run = [W[i]]
    out.append(np.mean(run, axis=0))
    return np.array(out)


def _edge_duals(V: np.ndarray) -> np.ndarray:
    """Vertex w of the polar for each edge [v_i, v_{i+1}]: <w,v_i>=<w,v_{i+1}>=1."""
    B = np.roll(V, -1, axis=0)
    D = cross2(V, B)
    if np.min(D) <= 0.0:
        raise DegenerateBody("origin must be strictly interior for polarity")
    cond = (np.sum(V * V, axis=1) + np.sum(B * B, axis=1)) / D
    if np.max(cond) > EDGE_COND_LIMIT:
        raise NumericallySingularEdge(
            f"edge system condition {np.max(cond):.3g} exceeds {EDGE_COND_LIMIT:.3g}"
        )
    d = B - V
    return np.stack([d[:, 1], -d[:, 0]], axis=1) / D[:, None]


def polar_dual_vertices(V) -> np.ndarray:
    """Polar dual of a plain convex CCW polygon with the origin interior."""
    V = vertices_of(V)
    if len(V) < 3:
        raise DegenerateBody("polygon needs at least 3 vertices")
    W = _edge_duals(V)
    return _merge_close_cyclic(W, VERTEX_MERGE_REL * polygon_diameter(W))


def polar_dual(P: SymmetricPolygon) -> SymmetricPolygon:
    """Polar body: edges and vertices exchange, vertex count is preserved."""
    W = _edge_duals(P.vertices)
    W = _merge_close_cyclic(W, VERTEX_MERGE_REL * polygon_diameter(W))
    return SymmetricPolygon(W)


def linear_image(P: SymmetricPolygon, Phi) -> SymmetricPolygon:
    """Image polygon Phi @ P, re-oriented CCW when det(Phi) < 0."""
    Phi = np.asarray(Phi, dtype=float)
    det = Phi[0, 0] * Phi[1, 1] - Phi[0, 1] * Phi[1, 0]
    if abs(det) < 1e-300:
        raise SingularMatrix("linear image needs det(Phi) != 0")
    W = P.vertices @ Phi.T
    if det < 0.0:
        W = W[::-1]
    return SymmetricPolygon(W)


def clip_halfplane(poly, normal, offset=1.0) -> np.ndarray:
    """Intersect a convex polygon with the closed half-plane <x, normal> <= offset.

    Returns a plain vertex array; empty intersection is an empty array.
    """
    V = vertices_of(poly)
    n = len(V)
    if n == 0:
        return V
    s = V @ np.asarray(normal, dtype=float) - offset
    if np.all(s <= 0.0):
        return V.copy()
    if np.all(s > 0.0):
        return np.empty((0, 2))
    nxt = np.roll(np.arange(n), -1)
    s2 = s[nxt]
    keep = s <= 0.0
    crossing = (s * s2) < 0.0
    t = np.zeros(n)
    np.divide(s, s - s2, out=t, where=crossing)
    cuts = V + t[:, None] * (V[nxt] - V)
    out = np.empty((2 * n, 2))
    mask = np.zeros(2 * n, dtype=bool)
    out[0::2] = V
    mask[0::2] = keep
    out[1::2] = cuts
    mask[1::2] = crossing
    return out[mask]


def intersect_convex(p, q) -> np.ndarray:
    """Vertices of the intersection of two convex polygons (possibly empty)."""
    P, Q = vertices_of(p), vertices_of(q)
    if len(Q) > len(P):
        P, Q = Q, P  # clip the richer polygon by the simpler one
    out = P
    m = len(Q)
    if m < 3:
        return np.empty((0, 2))
    for i in range(m):
        a = Q[i]
        e = Q[(i + 1) % m] - a
        nrm = -rot90(e)
        out = clip_halfplane(out, nrm, float(nrm @ a))
        if len(out) == 0:
            break
    return out


def symmetric_difference_area(p, q) -> float:
    """|P \\ Q| + |Q \\ P| for convex polygons, via the intersection area."""
    return area(p) + area(q) - 2.0 * area(intersect_convex(p, q))


def contains_points(poly, pts, tol=0.0) -> np.ndarray:
    """Boolean mask: which points lie in the polygon fattened by distance ``tol``."""
    V = vertices_of(poly)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    E = np.roll(V, -1, axis=0) - V
    lengths = np.maximum(np.hypot(E[:, 0], E[:, 1]), 1e-300)
    d = pts[:, None, :] - V[None, :, :]
    cr = (E[None, :, 0] * d[..., 1] - E[None, :, 1] * d[..., 0]) / lengths[None, :]
    return np.all(cr >= -tol, axis=1)


def _directed_hausdorff(V: np.ndarray, W: np.ndarray) -> float:
    a = W
    e = np.roll(W, -1, axis=0) - W
    diff = V[:, None, :] - a[None, :, :]
    cr = e[None, :, 0] * diff[..., 1] - e[None, :, 1] * diff[..., 0]
    inside = np.all(cr >= 0.0, axis=1)
    L2 = np.maximum(np.sum(e * e, axis=1), 1e-300)
    t = np.clip(np.sum(diff * e[None, :, :], axis=2) / L2, 0.0, 1.0)
    proj = a[None, :, :] + t[..., None] * e[None, :, :]
    dist = np.min(np.linalg.norm(V[:, None, :] - proj, axis=2), axis=1)
    dist[inside] = 0.0
    return float(np.max(dist)) if len(dist) else 0.0


def hausdorff_distance(p, q) -> float:
    """Hausdorff distance between convex polygons (attained at vertices)."""
    V, W = vertices_of(p), vertices_of(q)
    return max(_directed_hausdorff(V, W), _directed_hausdorff(W, V))


def line_intersection(a, b, c, d, eps=1e-14):
    """Intersection of lines aff{a,b} and aff{c,d}; None when near-parallel."""
    a, b, c, d = (np.asarray(x, dtype=float) for x in (a, b, c, d))
    u = b - a
    v = d - c
    den = cross2(u, v)
    scale = max(np.hypot(*u) * np.hypot(*v), 1e-300)
    if abs(den) <= eps * scale:
        return None
    t = cross2(c - a, v) / den
    return a + t * u


@dataclass(frozen=True)
class LineNotThroughOrigin:
    """The line {x : <x, normal> = 1}; its polar point is ``normal`` itself."""

    normal: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        if n.shape != (2,) or not np.all(np.isfinite(n)) or np.hypot(*n) == 0.0:
            raise SingularMatrix("line normal must be a finite nonzero 2-vector")
        n = n.copy()
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)

    @classmethod
    def through_points(cls, a, b) -> "LineNotThroughOrigin":
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        den = cross2(a, b)
        if abs(den) <= 1e-14 * max(np.hypot(*a) * np.hypot(*b), 1e-300):
            raise SingularMatrix("line passes through the origin")
        d = b - a
        return cls(np.array([d[1], -d[0]]) / den)

    def polar_point(self) -> np.ndarray:
        return self.normal.copy()

    def point_on(self) -> np.ndarray:
        n = self.normal
        return n / float(n @ n)


def save_polygon(path, P: SymmetricPolygon, comment: str | None = None) -> None:
    """Write the full CCW antipodal vertex list, one "x y" pair per line."""
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for x, y in vertices_of(P):
            fh.write(f"{x!r} {y!r}\n")


def load_polygon(path) -> SymmetricPolygon:
    """Read a polygon in the text format written by :func:`save_polygon`."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"malformed vertex line: {line!r}")
            rows.append([float(parts[0]), float(parts[1])])
    return SymmetricPolygon(np.array(rows))
