"""Area-sum-increasing vertex variations and hill climbing over cone bodies.

A proper vertex is an endpoint of a polygon side that crosses the deltoid's
interior.  Moving such a vertex parallel to the chord of its neighbors, so
that the ray from the origin meets the chord strictly between its current
intersection and the chord midpoint, strictly increases |M| + |M°| while
keeping |M| fixed.  The local search drives random bodies toward the
quarter-disk profile with a decaying step size, interleaving symmetrization
about the deltoid axis, which never loses area-sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cones import ConeBody, area_sum, relative_polar
from .errors import (
    DegenerateBody,
    GeometryError,
    HypothesisViolated,
    NumericallySingularEdge,
    ParallelSupportLines,
)
from .polygons import area, cross2, line_intersection
from .steiner import steiner_symmetral

PROPER_SIDE_TOL = 1e-9   # a side is proper when its midpoint is this far inside
PARALLEL_TOL = 1e-12     # angular tolerance for "displacement parallel to chord"
MIN_GAIN = 1e-14         # smallest accepted area-sum improvement


@dataclass(frozen=True)
class VariationMove:
    """One vertex displacement parallel to the chord of its two neighbors."""

    vertex_index: int
    displacement: np.ndarray
    context: tuple[int, int]


def proper_vertex_chain(P: ConeBody) -> list[int]:
    """Indices of proper vertices, in CCW order from the p side to the q side."""
    V = P.vertices
    n = len(V)
    mids = 0.5 * (V + np.roll(V, -1, axis=0))
    interior = P.frame.interior_distance(mids) > PROPER_SIDE_TOL
    proper = sorted({i for i in range(n) if interior[i]} | {(i + 1) % n for i in range(n) if interior[i]})
    return [i for i in proper if i != 0]  # the origin vertex is never proper


def equilibrium_residuals(P: ConeBody):
    """Collinearity residuals characterizing numerically extremal bodies.

    Returns (chord_residuals, support_residuals): for each interior proper
    vertex x_i the normalized cross of x_i with the neighbor-chord midpoint,
    and for each admissible i the same for the support-line intersection
    eta_i against the side midpoint.  Raises ParallelSupportLines when eta_i
    does not exist.
    """
    V = P.vertices
    chain = proper_vertex_chain(P)
    if len(chain) < 3:
        raise DegenerateBody("need at least 3 proper vertices")
    X = V[chain]
    k = len(X) - 1

    def ncross(a, b):
        s = float(np.hypot(*a) * np.hypot(*b))
        return float(cross2(a, b)) / s if s > 0.0 else 0.0

    chord = np.array(
        [ncross(X[i], 0.5 * (X[i - 1] + X[i + 1])) for i in range(1, k)]
    )
    support = []
    for i in range(2, k):
        eta = line_intersection(X[i - 1], X[i - 2], X[i], X[i + 1])
        if eta is None:
            raise ParallelSupportLines(f"support lines around side {i} are parallel")
        support.append(ncross(eta, 0.5 * (X[i - 1] + X[i])))
    return chord, np.array(support)


def apply_variation(P: ConeBody, mv: VariationMove) -> ConeBody:
    """Apply one chord-parallel vertex move after checking its preconditions.

    Checks, in order: the context names the cyclic neighbors; the moved vertex
    is not an anchor (o, p, q); the displacement is parallel to the neighbor
    chord; the moved vertex stays strictly inside the deltoid; the origin ray
    through the moved vertex meets the chord strictly between the current
    intersection and the chord midpoint; convexity survives so both neighbors
    stay vertices.  Area is preserved to rounding; the area-sum strictly
    increases whenever the checks pass.
    """
    V = P.vertices
    n = len(V)
    if n < 5:
        raise HypothesisViolated("variation needs a polygon with at least 5 vertices")
    i = int(mv.vertex_index) % n
    ip, iw = (i - 1) % n, (i + 1) % n
    if set(mv.context) != {ip, iw}:
        raise HypothesisViolated("context must name the two cyclic neighbors")
    f = P.frame
    for anchor in (np.zeros(2), f.p, f.q):
        if np.all(V[i] == anchor):
            raise HypothesisViolated("the o, p, q anchor vertices cannot move")
    u, v, w = V[ip], V[i], V[iw]
    chord = w - u
    L = float(np.hypot(*chord))
    disp = np.asarray(mv.displacement, dtype=float)
    dnorm = float(np.hypot(*disp))
    if abs(float(cross2(disp, chord))) > PARALLEL_TOL * max(dnorm * L, 1e-300):
        raise HypothesisViolated("displacement is not parallel to the neighbor chord")
    v2 = v + disp
    if float(f.interior_distance(v2)[0]) <= 1e-12:
        raise HypothesisViolated("moved vertex leaves the deltoid interior")
    s = line_intersection(np.zeros(2), v, u, w)
    s2 = line_intersection(np.zeros(2), v2, u, w)
    if s is None or s2 is None:
        raise HypothesisViolated("origin ray does not meet the neighbor chord")
    ts = float((s - u) @ chord) / (L * L)
    t2 = float((s2 - u) @ chord) / (L * L)
    if not (ts < t2 < 0.5 or ts > t2 > 0.5):
        raise HypothesisViolated(
            "ray-chord point must move strictly toward the chord midpoint"
        )
    W = np.array(V)
    W[i] = v2
    scale = float(np.max(np.abs(W))) ** 2
    for j in (ip, i, iw):
        a, b, c = W[(j - 1) % n], W[j], W[(j + 1) % n]
        if float(cross2(b - a, c - b)) <= 1e-14 * scale:
            raise HypothesisViolated("move destroys strict convexity at a neighbor")
    new = ConeBody(P.frame, W, canonical=True, validate=False)
    if abs(new.area - P.area) > 1e-12 * max(P.area, 1e-300):
        raise HypothesisViolated("chord-parallel move failed to preserve area")
    return new


def conic_fit_residual(points) -> float:
    """RMS residual of the best centered conic x^T A x = 1 through the points."""
    X = np.atleast_2d(np.asarray(points, dtype=float))
    if len(X) < 3:
        return 0.0
    D = np.stack([X[:, 0] ** 2, 2.0 * X[:, 0] * X[:, 1], X[:, 1] ** 2], axis=1)
    coef, *_ = np.linalg.lstsq(D, np.ones(len(X)), rcond=None)
    return float(np.sqrt(np.mean((D @ coef - 1.0) ** 2)))


@dataclass
class SearchResult:
    """Converged body with its improvement trace.

    ``trace`` rows are (iteration, area, polar_area, area_sum, max_residual),
    one per adopted state; area_sum is nondecreasing by construction.
    """

    body: ConeBody
    trace: np.ndarray
    final_step: float

    @property
    def area_sums(self) -> np.ndarray:
        return self.trace[:, 3]


def _trace_row(it: int, body: ConeBody, asum: float):
    a = body.area
    try:
        chord, _ = equilibrium_residuals(body)
        res = float(np.max(np.abs(chord))) if len(chord) else 0.0
    except (DegenerateBody, ParallelSupportLines):
        res = 0.0
    return [float(it), a, asum - a, asum, res]


def local_search(
    seed: ConeBody,
    step: float = 0.05,
    iters: int = 4000,
    rng_seed=0,
    min_step: float = 1e-10,
    sym_every: int = 100,
    decay_after: int = 20,
    min_gain: float = MIN_GAIN,
) -> SearchResult:
    """Hill-climb the area-sum by admissible vertex moves with a decaying step.

    Returns the best body found; stalls are not an error.  The trace is
    nondecreasing because only improving states are adopted.
    """
    rng = np.random.default_rng(rng_seed)
    body = seed
    asum = area_sum(body)
    trace = [_trace_row(0, body, asum)]
    rejects = 0
    for it in range(1, iters + 1):
        if step < min_step:
            break
        if sym_every and it % sym_every == 0:
            try:
                sym = ConeBody(body.frame, steiner_symmetral(body.vertices, body.frame.axis))
                s_sum = area_sum(sym)
                if s_sum >= asum:
                    body, asum = sym, s_sum
                    trace.append(_trace_row(it, body, asum))
            except (GeometryError, ValueError):
                pass
            continue
        chain = proper_vertex_chain(body)
        movable = [
            j
            for j in chain
            if not (
                np.all(body.vertices[j] == body.frame.p)
                or np.all(body.vertices[j] == body.frame.q)
            )
        ]
        if not movable:
            rejects += 1
        else:
            i = int(rng.choice(movable))
            n = len(body.vertices)
            ip, iw = (i - 1) % n, (i + 1) % n
            v = body.vertices[i]
            u, w = body.vertices[ip], body.vertices[iw]
            chord = w - u
            L = float(np.hypot(*chord))
            s = line_intersection(np.zeros(2), v, u, w)
            accepted = False
            if s is not None and L > 0.0:
                ts = float((s - u) @ chord) / (L * L)
                # aim 80% of the way to the chord midpoint; the ray-chord point
                # moves slower than the vertex by the ratio of the two distances
                # from the origin to the parallel lines through s and v
                h_c = abs(float(cross2(u, w))) / L
                h_v = abs(float(cross2(chord, v))) / L
                clearance = float(body.frame.interior_distance(v)[0])
                if h_c > 0.0 and clearance > 0.0:
                    xi = 0.8 * (0.5 - ts) * L * (h_v / h_c)
                    cap = min(step, 0.9 * clearance)
                    xi = math.copysign(min(abs(xi), cap), xi)
                    disp = (xi / L) * chord
                    try:
                        cand = apply_variation(body, VariationMove(i, disp, (ip, iw)))
                        c_sum = area_sum(cand)
                        if c_sum - asum >= min_gain:
                            body, asum = cand, c_sum
                            trace.append(_trace_row(it, body, asum))
                            accepted = True
                    except (
                        HypothesisViolated,
                        DegenerateBody,
                        NumericallySingularEdge,
                    ):
                        pass
            if accepted:
                rejects = 0
            else:
                rejects += 1
        if rejects >= decay_after:
            step *= 0.5
            rejects = 0
    return SearchResult(body=body, trace=np.array(trace), final_step=step)
