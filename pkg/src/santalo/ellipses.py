"""Centered John and Loewner ellipse fitting for origin-symmetric polygons.

The Loewner (minimum-area enclosing) ellipse of a centered polygon is the
solution of the centered D-optimal design problem over its vertices: maximize
log det sum_i lam_i v_i v_i^T over the weight simplex.  At the optimum
max_j v_j^T M^{-1} v_j = 2 and the ellipse form is A = (2 M)^{-1}.  We run
Frank-Wolfe ascent with away/drop steps, which converges linearly and leaves
the dual weights as an optimality certificate.  The John (maximum-area
inscribed) ellipse is obtained by polarity: its form is the inverse of the
Loewner form of the polar body.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBody, NoConvergence
from .polygons import SymmetricPolygon, linear_image, polar_dual

DEFAULT_TOL = 1e-7
MAX_ITER = 10**6
ASPECT_LIMIT = 1e6  # bodies more elongated than this are rejected
CONTACT_WEIGHT_REL = 1e-6  # dual weights below this fraction of the max are noise


def _inv2(M: np.ndarray) -> np.ndarray:
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if det <= 0.0:
        raise DegenerateBody("design matrix is not positive definite")
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / det


def _sqrtm_spd(A: np.ndarray) -> np.ndarray:
    w, Q = np.linalg.eigh(A)
    if w[0] <= 0.0:
        raise DegenerateBody("matrix is not positive definite")
    return (Q * np.sqrt(w)) @ Q.T


@dataclass(frozen=True)
class CenteredEllipse:
    """Origin-centered ellipse {x : x^T A x <= 1} given by its SPD form A."""

    form: np.ndarray

    def __post_init__(self):
        A = np.array(self.form, dtype=float)
        if A.shape != (2, 2) or not np.all(np.isfinite(A)):
            raise DegenerateBody("ellipse form must be a finite 2x2 matrix")
        scale = float(np.max(np.abs(A)))
        if abs(A[0, 1] - A[1, 0]) > 1e-12 * max(scale, 1e-300):
            raise DegenerateBody("ellipse form must be symmetric")
        A = 0.5 * (A + A.T)
        if np.linalg.eigvalsh(A)[0] <= 0.0:
            raise DegenerateBody("ellipse form must be positive definite")
        A.setflags(write=False)
        object.__setattr__(self, "form", A)

    @property
    def area(self) -> float:
        return math.pi / math.sqrt(float(np.linalg.det(self.form)))

    def polar(self) -> "CenteredEllipse":
        """Polar ellipse: the form inverts."""
        return CenteredEllipse(np.linalg.inv(self.form))

    def disk_map(self) -> np.ndarray:
        """Symmetric Phi with E = Phi B^2, i.e. Phi = A^(-1/2)."""
        return _sqrtm_spd(np.linalg.inv(self.form))

    def quad(self, pts) -> np.ndarray:
        """Quadratic form values x^T A x for an array of points."""
        P = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.einsum("ij,jk,ik->i", P, self.form, P)

    def support(self, normals) -> np.ndarray:
        """Support function h_E(n) = sqrt(n^T A^{-1} n)."""
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        Ainv = np.linalg.inv(self.form)
        return np.sqrt(np.einsum("ij,jk,ik->i", N, Ainv, N))

    def to_json(self) -> str:
        A = self.form
        return json.dumps(
            {"a11": A[0, 0], "a12": A[0, 1], "a22": A[1, 1]}, sort_keys=True
        )

    @classmethod
    def from_json(cls, text: str) -> "CenteredEllipse":
        d = json.loads(text)
        return cls(np.array([[d["a11"], d["a12"]], [d["a12"], d["a22"]]]))


@dataclass(frozen=True)
class JohnCertificate:
    """Contact points and weights witnessing ellipse optimality.

    ``contact_points`` is the full antipodal set of unit vectors (in the frame
    where the fitted ellipse is the unit disk); ``residual`` is the Frobenius
    norm of sum_i c_i u_i u_i^T - I.
    """

    contact_points: np.ndarray
    weights: np.ndarray
    residual: float

    @property
    def contact_count(self) -> int:
        return len(self.contact_points)


def _design_weights(V: np.ndarray, tol: float, max_iter: int):
    """Frank-Wolfe ascent with away/drop steps on the centered design problem."""
    m = len(V)
    lam = np.full(m, 1.0 / m)
    M = (V * lam[:, None]).T @ V
    for it in range(max_iter):
        Minv = _inv2(M)
        g = np.einsum("ij,jk,ik->i", V, Minv, V)
        jp = int(np.argmax(g))
        gp = float(g[jp])
        g_sup = np.where(lam > 0.0, g, np.inf)
        jm = int(np.argmin(g_sup))
        gm = float(g[jm])
        eps_plus = 0.5 * gp - 1.0
        eps_minus = 1.0 - 0.5 * gm
        if eps_plus <= tol and eps_minus <= tol:
            return lam, M
        if eps_plus >= eps_minus:
            j, gj = jp, gp
            alpha = (gj - 2.0) / (2.0 * (gj - 1.0))
        else:
            j, gj = jm, gm
            if lam[j] >= 1.0:
                # sole support point cannot be reduced; push mass elsewhere
                j, gj = jp, gp
                alpha = (gj - 2.0) / (2.0 * (gj - 1.0))
            else:
                drop = -lam[j] / (1.0 - lam[j])
                alpha = (gj - 2.0) / (2.0 * (gj - 1.0)) if gj > 1.0 else drop
                alpha = max(alpha, drop)
        lam *= 1.0 - alpha
        lam[j] += alpha
        if lam[j] < 0.0:
            lam[j] = 0.0
        vj = V[j]
        M = (1.0 - alpha) * M + alpha * np.outer(vj, vj)
        if (it + 1) % 256 == 0:
            lam /= lam.sum()
            M = (V * lam[:, None]).T @ V
    raise NoConvergence(f"design ascent did not reach tol={tol} in {max_iter} iterations")


def _certificate(V: np.ndarray, lam: np.ndarray, A: np.ndarray) -> JohnCertificate:
    keep = lam > CONTACT_WEIGHT_REL * float(lam.max())
    U = V[keep] @ _sqrtm_spd(A)
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    c0 = 2.0 * lam[keep]
    # refit the weights so sum c u u^T best-matches the identity
    D = np.stack([U[:, 0] ** 2, U[:, 1] ** 2, np.sqrt(2.0) * U[:, 0] * U[:, 1]], axis=1)
    target = np.array([1.0, 1.0, 0.0])
    c, *_ = np.linalg.lstsq(D.T, target, rcond=None)
    if np.any(c <= 0.0):
        S = (U * c0[:, None]).T @ U
        scale = (S[0, 0] + S[1, 1]) / max(float(np.sum(S * S)), 1e-300)
        c = scale * c0
    residual = float(np.linalg.norm(D.T @ c - target))
    return JohnCertificate(
        contact_points=np.concatenate([U, -U]),
        weights=np.concatenate([c, c]) / 2.0,
        residual=residual,
    )


def lowner_ellipse(
    P: SymmetricPolygon, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER
) -> tuple[CenteredEllipse, JohnCertificate]:
    """Minimum-area centered ellipse containing the polygon, with certificate.

    The returned form is rescaled so the farthest vertex sits exactly on the
    boundary: containment is exact and the area exceeds the optimum by at most
    a factor (1 + tol).
    """
    if not 0.0 < tol <= 1e-2:
        raise ValueError("tol must lie in (0, 1e-2]")
    V = P.half
    lam, M = _design_weights(V, tol, max_iter)
    A = _inv2(2.0 * M)
    q = np.einsum("ij,jk,ik->i", V, A, V)
    A = A / float(q.max())
    w = np.linalg.eigvalsh(A)
    if w[1] / w[0] > ASPECT_LIMIT**2:
        raise DegenerateBody(
            f"body aspect ratio exceeds {ASPECT_LIMIT:g}; fit too ill-conditioned"
        )
    return CenteredEllipse(A), _certificate(V, lam, A)


def john_ellipse(
    P: SymmetricPolygon, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER
) -> tuple[CenteredEllipse, JohnCertificate]:
    """Maximum-area centered ellipse inside the polygon.

    Computed by polarity: the John form of P is the inverse of the Loewner
    form of the polar body, and in the normalized frame the two fits share
    the same contact certificate.
    """
    E_dual, cert = lowner_ellipse(polar_dual(P), tol, max_iter)
    A = np.linalg.inv(E_dual.form)
    return CenteredEllipse(0.5 * (A + A.T)), cert


def normalize(
    P: SymmetricPolygon, which: str = "john", tol: float = DEFAULT_TOL
) -> tuple[SymmetricPolygon, np.ndarray]:
    """Map the polygon so its chosen ellipse becomes the unit disk.

    Returns (Phi^{-1} P, Phi) where the John or Loewner ellipse is Phi B^2.
    """
    if which == "john":
        E, _ = john_ellipse(P, tol)
    elif which == "lowner":
        E, _ = lowner_ellipse(P, tol)
    else:
        raise ValueError("which must be 'john' or 'lowner'")
    phi_inv = _sqrtm_spd(E.form)  # inverse of disk_map, computed directly
    return linear_image(P, phi_inv), E.disk_map()


def ellipse_polygon(E: CenteredEllipse, n: int) -> SymmetricPolygon:
    """Inscribed polygon with vertices at equally spaced parameter angles."""
    if n < 4 or n % 2:
        raise ValueError("vertex count must be even and at least 4")
    Phi = E.disk_map()
    theta = 2.0 * np.pi * np.arange(n // 2) / n
    half = np.stack([np.cos(theta), np.sin(theta)], axis=1) @ Phi.T
    return SymmetricPolygon(np.concatenate([half, -half]))


def unit_disk_polygon(n: int) -> SymmetricPolygon:
    """Inscribed regular n-gon of the unit disk."""
    return ellipse_polygon(CenteredEllipse(np.eye(2)), n)
