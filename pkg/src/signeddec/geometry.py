"""Coordinate-level primitives: circumcenters, volumes, half-space signs.

Everything here works on raw point arrays in R^N and knows nothing about
complexes. Points within a call are rows of float arrays; a k-simplex is a
(k+1, N) array of affinely independent rows.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import tolerance
from .errors import AffineHullError, DegeneracyError

__all__ = [
    "Circumdata",
    "FlattenedPair",
    "circumcenter",
    "simplex_volume",
    "halfspace_sign",
    "flatten_pair",
]


@dataclass(frozen=True)
class Circumdata:
    """Circumcenter and circumradius of a simplex.

    The center is equidistant from all vertices and lies in their affine
    hull; the radius is that common distance.
    """

    center: np.ndarray
    radius: float


@dataclass(frozen=True)
class FlattenedPair:
    """Two n-simplices sharing a facet, laid out isometrically in R^n.

    The shared facet spans the hyperplane {x_n = 0}; apex_left has negative
    last coordinate, apex_right positive. Row i of ``facet`` is the image of
    the i-th input facet point.
    """

    facet: np.ndarray
    apex_left: np.ndarray
    apex_right: np.ndarray


def _as_points(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError(f"expected a 2-d point array, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    return pts


def simplex_volume(points):
    """Unsigned k-volume of the simplex spanned by the given k+1 points.

    Valid in any ambient dimension N >= k. The low dimensions use direct
    determinant/cross-product formulas and the general case the R diagonal
    of a QR factorization of the edge matrix; both keep absolute accuracy
    ~eps * scale^k on nearly degenerate simplices, where a Gram-determinant
    route would bottom out at sqrt(eps). A single point has 0-volume 1 by
    convention; degenerate input yields (near) zero rather than an error.
    """
    pts = _as_points(points)
    k = len(pts) - 1
    if k == 0:
        return 1.0
    ambient = pts.shape[1]
    if k > ambient:
        return 0.0
    edges = pts[1:] - pts[0]
    if k == 1:
        return float(np.linalg.norm(edges[0]))
    if k == 2 and ambient == 2:
        (ax, ay), (bx, by) = edges
        return abs(ax * by - ay * bx) / 2.0
    if k == 2 and ambient == 3:
        (ax, ay, az), (bx, by, bz) = edges
        cx = ay * bz - az * by
        cy = az * bx - ax * bz
        cz = ax * by - ay * bx
        return math.sqrt(cx * cx + cy * cy + cz * cz) / 2.0
    if k == 3 and ambient == 3:
        a, b, c = edges
        triple = (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
        return abs(triple) / 6.0
    r = np.linalg.qr(edges.T, mode="r")
    return float(abs(np.prod(np.diag(r))) / math.factorial(k))


def batched_volumes(pts):
    """Unsigned volumes of a (M, k+1, N) stack of simplices.

    Vectorized twin of :func:`simplex_volume`, used to fill per-complex
    geometry caches in one pass.
    """
    m, kp1, ambient = pts.shape
    k = kp1 - 1
    if k == 0:
        return np.ones(m)
    if k > ambient:
        return np.zeros(m)
    edges = pts[:, 1:, :] - pts[:, :1, :]
    if k == 1:
        return np.linalg.norm(edges[:, 0, :], axis=1)
    if k == 2 and ambient == 2:
        return (
            np.abs(
                edges[:, 0, 0] * edges[:, 1, 1]
                - edges[:, 0, 1] * edges[:, 1, 0]
            )
            / 2.0
        )
    if k == 2 and ambient == 3:
        a, b = edges[:, 0, :], edges[:, 1, :]
        cx = a[:, 1] * b[:, 2] - a[:, 2] * b[:, 1]
        cy = a[:, 2] * b[:, 0] - a[:, 0] * b[:, 2]
        cz = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        return np.sqrt(cx * cx + cy * cy + cz * cz) / 2.0
    if k == 3 and ambient == 3:
        a, b, c = edges[:, 0, :], edges[:, 1, :], edges[:, 2, :]
        triple = (
            a[:, 0] * (b[:, 1] * c[:, 2] - b[:, 2] * c[:, 1])
            - a[:, 1] * (b[:, 0] * c[:, 2] - b[:, 2] * c[:, 0])
            + a[:, 2] * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
        )
        return np.abs(triple) / 6.0
    return np.array([simplex_volume(p) for p in pts])


def batched_circumcenters(pts, tol=None):
    """Circumcenters and radii of a (M, k+1, N) stack of simplices.

    Vectorized twin of :func:`circumcenter`. Returns (centers, radii), or
    None when any member is degenerate or ill-conditioned; callers then
    take the scalar route for its per-simplex diagnostics.
    """
    eps = tolerance(tol)
    m, kp1, ambient = pts.shape
    k = kp1 - 1
    if k == 0:
        return pts[:, 0, :].copy(), np.zeros(m)
    edges = pts[:, 1:, :] - pts[:, :1, :]
    gram = edges @ edges.transpose(0, 2, 1)
    rhs = 0.5 * np.einsum("mii->mi", gram)
    try:
        coeff = np.linalg.solve(gram, rhs[:, :, None])[:, :, 0]
    except np.linalg.LinAlgError:
        return None
    centers = pts[:, 0, :] + np.einsum("mk,mkn->mn", coeff, edges)
    dists = np.linalg.norm(pts - centers[:, None, :], axis=2)
    radii = dists.mean(axis=1)
    spread = dists.max(axis=1) - dists.min(axis=1)
    if np.any(radii == 0.0) or np.any(spread > max(eps, 1e-9) * radii):
        return None
    return centers, radii


def circumcenter(points, tol=None):
    """Circumcenter and circumradius of a k-simplex in R^N.

    Solves the Gram system 2 (p_i - p_0) . (c - p_0) = |p_i - p_0|^2, which
    keeps the center inside the affine hull of the vertices. Raises
    DegeneracyError when the vertices are (nearly) affinely dependent; the
    returned center is verified equidistant to relative tolerance.
    """
    eps = tolerance(tol)
    pts = _as_points(points)
    k = len(pts) - 1
    if k == 0:
        return Circumdata(pts[0].copy(), 0.0)
    edges = pts[1:] - pts[0]
    gram = edges @ edges.T
    rhs = 0.5 * np.diag(gram)
    try:
        coeff = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError(
            f"affinely dependent vertices, no circumcenter: {pts.tolist()}"
        ) from exc
    center = pts[0] + coeff @ edges
    dists = np.linalg.norm(pts - center, axis=1)
    radius = float(dists.mean())
    if radius == 0.0 or (dists.max() - dists.min()) > max(eps, 1e-9) * radius:
        raise DegeneracyError(
            "circumcenter ill-conditioned: equidistance violated "
            f"(spread {dists.max() - dists.min():.3e}, radius {radius:.3e})"
        )
    return Circumdata(center, radius)


def _orthonormal_basis(directions, eps):
    """Orthonormal column basis of span(rows), with a rank check.

    ``directions`` has shape (m, N); returns (N, m). Raises DegeneracyError
    if the rows are (nearly) linearly dependent.
    """
    m = len(directions)
    if m == 0:
        return np.zeros((0, 0))
    mat = np.asarray(directions, dtype=float).T
    q, r = np.linalg.qr(mat)
    diag = np.abs(np.diag(r))
    scale = np.linalg.norm(mat, axis=0).max()
    if scale == 0.0 or diag.min() <= eps * scale:
        raise DegeneracyError("facet vertices are (nearly) affinely dependent")
    return q


def halfspace_sign(facet_points, apex, query, tol=None):
    """Side of ``query`` relative to the hyperplane of ``facet_points``,
    within the affine hull of facet + apex. +1 means the apex side, -1 the
    opposite side, 0 on the hyperplane within tolerance.

    ``facet_points`` spans a (k-1)-dimensional hull (k rows); apex must be
    affinely independent of it (else DegeneracyError), and query must lie
    in the combined affine hull within tolerance (else AffineHullError).
    """
    eps = tolerance(tol)
    facet = _as_points(facet_points)
    apex = np.asarray(apex, dtype=float)
    query = np.asarray(query, dtype=float)
    origin = facet[0]
    basis = _orthonormal_basis(facet[1:] - origin, eps)

    def perp(vec):
        if basis.size == 0:
            return vec
        return vec - basis @ (basis.T @ vec)

    apex_vec = apex - origin
    query_vec = query - origin
    scale = max(
        float(np.linalg.norm(apex_vec)),
        float(np.linalg.norm(query_vec)),
        float(np.linalg.norm(facet[1:] - origin, axis=1).max()) if len(facet) > 1 else 0.0,
    )
    if scale == 0.0:
        raise DegeneracyError("all points coincide")
    apex_perp = perp(apex_vec)
    height = float(np.linalg.norm(apex_perp))
    if height <= eps * scale:
        raise DegeneracyError("apex is affinely dependent on the facet")
    normal = apex_perp / height
    query_perp = perp(query_vec)
    offset = float(query_perp @ normal)
    residual = float(np.linalg.norm(query_perp - offset * normal))
    if residual > max(eps, 1e-9) * scale:
        raise AffineHullError(
            f"query off the facet+apex affine hull by {residual:.3e} (scale {scale:.3e})"
        )
    if abs(offset) <= eps * scale:
        return 0
    return 1 if offset > 0 else -1


def flatten_pair(facet_points, apex_left, apex_right, tol=None):
    """Lay out two n-simplices sharing an (n-1)-facet isometrically in R^n.

    The facet (n rows in R^N) maps into {x_n = 0}; each apex keeps its
    tangential coordinates and moves to signed height -h (left) or +h
    (right), where h is its distance to the facet's affine hull. Each
    simplex is mapped isometrically, so volumes, circumcenters and
    circumradii are preserved; the two apexes end up in opposite open
    half-spaces.
    """
    eps = tolerance(tol)
    facet = _as_points(facet_points)
    n = len(facet)
    origin = facet[0]
    basis = _orthonormal_basis(facet[1:] - origin, eps)

    flat_facet = np.zeros((n, n))
    if n > 1:
        flat_facet[1:, : n - 1] = (facet[1:] - origin) @ basis

    def place(apex, side):
        vec = np.asarray(apex, dtype=float) - origin
        tang = basis.T @ vec if basis.size else np.zeros(0)
        perp = vec - basis @ tang if basis.size else vec
        height = float(np.linalg.norm(perp))
        if height <= eps * max(float(np.linalg.norm(vec)), 1.0e-300):
            raise DegeneracyError("apex lies in the facet's affine hull")
        out = np.zeros(n)
        out[: n - 1] = tang
        out[n - 1] = side * height
        return out

    return FlattenedPair(
        facet=flat_facet,
        apex_left=place(apex_left, -1.0),
        apex_right=place(apex_right, +1.0),
    )
