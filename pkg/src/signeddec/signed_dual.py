"""Signed circumcentric duals of simplices in an embedded complex.

The dual of a p-simplex is assembled from elementary pieces, one per
ascending chain of cofaces up to the top dimension n. Each piece is the
simplex spanned by the circumcenters along the chain; its sign is the
product of one step sign per chain link. The step sign at a link compares,
within the affine hull of the larger simplex, the side of the larger
simplex's circumcenter against the side of the vertex that extends the
smaller simplex: +1 same side, -1 opposite, 0 on the dividing hyperplane
(such a piece is marginal and contributes zero).
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import tolerance
from .errors import DegeneracyError
from .geometry import circumcenter, halfspace_sign, simplex_volume

__all__ = [
    "ElementaryDual",
    "DualCell",
    "step_sign",
    "elementary_duals",
    "signed_dual_volume",
    "dual_volumes",
    "orientation_sign_via_determinant",
    "regular_simplex",
]


@dataclass(frozen=True)
class ElementaryDual:
    """One piece of the dual of a p-simplex.

    ``chain`` holds simplex indices at dimensions base_dim+1 .. n;
    ``vertices`` stacks the circumcenters of base simplex and chain, in
    chain order; ``step_signs`` has one entry per link (n - base_dim of
    them) and ``sign`` is their product, or 0 if any step is marginal.
    """

    base_dim: int
    base_index: int
    chain: tuple
    vertices: np.ndarray
    step_signs: tuple
    sign: int
    unsigned_volume: float

    @property
    def top_index(self):
        """Index of the top simplex this piece lies in."""
        return self.chain[-1] if self.chain else self.base_index

    @property
    def signed_volume(self):
        return self.sign * self.unsigned_volume


@dataclass
class DualCell:
    """All elementary dual pieces of one p-simplex."""

    base_dim: int
    base_index: int
    pieces: list

    @property
    def signed_volume(self):
        return float(sum(p.sign * p.unsigned_volume for p in self.pieces))

    @property
    def unsigned_volume(self):
        return float(sum(p.unsigned_volume for p in self.pieces))

    @property
    def num_negative_pieces(self):
        return sum(1 for p in self.pieces if p.sign < 0)

    @property
    def has_marginal_piece(self):
        return any(p.sign == 0 for p in self.pieces)

    def restricted_signed_volume(self, top_index):
        """Signed volume of the pieces inside one top simplex."""
        return float(
            sum(
                p.sign * p.unsigned_volume
                for p in self.pieces
                if p.top_index == top_index
            )
        )


def step_sign(complex_, dim, face_index, coface_index, tol=None):
    """Sign of one chain link: side of the coface's circumcenter relative
    to the face's affine hull, measured against the extending vertex.

    Returns +1 (circumcenter on the extending vertex's side), -1
    (opposite side), or 0 (on the hull within tolerance).

    Both circumcenters project onto the face's hull at the same point, so
    the half-space test reduces to one dot product against cached centers.
    """
    eps = tolerance(tol)
    apex = complex_.points[complex_.apex_vertex(dim, face_index, coface_index)]
    face_center = complex_.circumcenter_of(dim, face_index).center
    coface_center = complex_.circumcenter_of(dim + 1, coface_index).center
    across = coface_center - face_center
    toward = apex - face_center
    value = float(np.dot(across, toward))
    scale = float(np.linalg.norm(across) * np.linalg.norm(toward))
    if abs(value) <= max(eps, 1e-14) * scale or scale == 0.0:
        return 0
    return 1 if value > 0.0 else -1


def elementary_duals(complex_, dim, index, tol=None):
    """All elementary dual pieces of the given p-simplex.

    Enumerates ascending coface chains depth-first in index order, so the
    result is deterministic. For a top simplex the single piece is its
    circumcenter with 0-volume 1 and empty chain.
    """
    n = complex_.n
    base_center = complex_.circumcenters(dim)[index]
    if dim == n:
        vertices = base_center[np.newaxis].copy()
        return [
            ElementaryDual(
                base_dim=dim, base_index=index, chain=(), vertices=vertices,
                step_signs=(), sign=1, unsigned_volume=1.0,
            )
        ]

    # hot path: work on the raw cached arrays, tolerance resolved once
    eps = max(tolerance(tol), 1e-14)
    points = complex_.points
    simplices = complex_.simplices
    cofaces = complex_.cofaces
    centers = [
        complex_.circumcenters(d) if d >= dim else None for d in range(n + 1)
    ]

    pieces = []

    def extend(cur_dim, cur_index, chain, signs):
        face = set(simplices[cur_dim][cur_index])
        c_face = centers[cur_dim][cur_index]
        for coface_index, _ in cofaces[cur_dim][cur_index]:
            apex = next(
                int(v)
                for v in simplices[cur_dim + 1][coface_index]
                if int(v) not in face
            )
            across = centers[cur_dim + 1][coface_index] - c_face
            toward = points[apex] - c_face
            value = float(across @ toward)
            scale = math.sqrt(float(across @ across)) * math.sqrt(
                float(toward @ toward)
            )
            if scale == 0.0 or abs(value) <= eps * scale:
                sign = 0
            else:
                sign = 1 if value > 0.0 else -1
            next_chain = chain + (coface_index,)
            next_signs = signs + (sign,)
            if cur_dim + 1 == n:
                rows = [base_center]
                rows.extend(
                    centers[dim + 1 + k][ci] for k, ci in enumerate(next_chain)
                )
                vertices = np.vstack(rows)
                total = 0 if 0 in next_signs else math.prod(next_signs)
                pieces.append(
                    ElementaryDual(
                        base_dim=dim, base_index=index, chain=next_chain,
                        vertices=vertices, step_signs=next_signs, sign=total,
                        unsigned_volume=simplex_volume(vertices),
                    )
                )
            else:
                extend(cur_dim + 1, coface_index, next_chain, next_signs)

    extend(dim, index, (), ())
    return pieces


def signed_dual_volume(complex_, dim, index, tol=None):
    """The dual cell of a p-simplex with its signed volume."""
    return DualCell(
        base_dim=dim, base_index=index,
        pieces=elementary_duals(complex_, dim, index, tol=tol),
    )


def dual_volumes(complex_, dim, tol=None):
    """Signed and unsigned dual volumes for every p-simplex.

    Returns a pair of arrays (signed, unsigned), indexed like the
    p-simplices. For p = n both are all ones (point measure). Results are
    memoized on the complex per (dim, resolved tolerance); the geometry
    is immutable so the cache never goes stale.
    """
    cache = getattr(complex_, "_dual_volume_cache", None)
    if cache is None:
        cache = {}
        complex_._dual_volume_cache = cache
    key = (dim, tolerance(tol))
    if key not in cache:
        count = complex_.num_simplices(dim)
        signed = np.empty(count)
        unsigned = np.empty(count)
        for i in range(count):
            cell = signed_dual_volume(complex_, dim, i, tol=tol)
            signed[i] = cell.signed_volume
            unsigned[i] = cell.unsigned_volume
        signed.setflags(write=False)
        unsigned.setflags(write=False)
        cache[key] = (signed, unsigned)
    return cache[key]


def regular_simplex(n):
    """Vertices of a regular n-simplex in R^n (edge length sqrt(2)).

    Isometric image of the standard-basis simplex in R^(n+1); regular, so
    every face of every dimension contains its circumcenter.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    corners = np.eye(n + 1)
    edges = (corners[1:] - corners[0]).T
    basis, _ = np.linalg.qr(edges)
    flat = np.vstack([np.zeros(n), edges.T @ basis])
    return flat


def _edge_frame(points):
    pts = np.asarray(points, dtype=float)
    return pts[1:] - pts[0]


def _sign_of_det(matrix):
    det = np.linalg.det(matrix)
    if det == 0.0:
        return 0
    return 1 if det > 0 else -1


def orientation_sign_via_determinant(complex_, piece, reference_points=None, tol=None):
    """Recompute an elementary dual's sign by determinant comparison.

    Builds the n-frame [base-simplex edges, successive circumcenter
    differences] for the piece, builds the same frame for a well-centered
    reference simplex under the vertex bijection given by sorted vertex
    order, and returns the product of the two determinant signs. Requires a
    full-dimensional complex (N == n). With the default reference (a
    regular simplex, reflected if needed so the bijection preserves
    orientation) this equals the piece's step-sign product whenever no step
    is marginal.
    """
    n = complex_.n
    if complex_.N != n:
        raise ValueError(
            "determinant orientation check needs a full-dimensional complex "
            f"(N == n), got N={complex_.N}, n={n}"
        )
    top_cell = complex_.simplex_vertices(n, piece.top_index)
    top_points = complex_.points[list(top_cell)]
    det_top = _sign_of_det(_edge_frame(top_points))
    if det_top == 0:
        raise DegeneracyError("top simplex of the piece is degenerate")

    if reference_points is None:
        reference = regular_simplex(n)
        if _sign_of_det(_edge_frame(reference)) != det_top:
            reference = reference[list(range(n - 1)) + [n, n - 1]]
    else:
        reference = np.asarray(reference_points, dtype=float)
        if reference.shape != (n + 1, n):
            raise ValueError(
                f"reference must have shape {(n + 1, n)}, got {reference.shape}"
            )
        if _sign_of_det(_edge_frame(reference)) != det_top:
            raise ValueError(
                "vertex bijection to the reference does not preserve orientation"
            )

    position = {v: k for k, v in enumerate(top_cell)}

    def mapped(dim_, simplex_index):
        cell = complex_.simplex_vertices(dim_, simplex_index)
        return reference[[position[v] for v in cell]]

    # Circumcenters of the mapped base and chain simplices; verify the
    # reference is well-centered along this chain (all step signs +1).
    ref_cells = [(piece.base_dim, piece.base_index)]
    ref_cells.extend(
        (piece.base_dim + 1 + k, ci) for k, ci in enumerate(piece.chain)
    )
    ref_centers = []
    for dim_, ci in ref_cells:
        ref_centers.append(circumcenter(mapped(dim_, ci)).center)
    for (dim_, ci), (next_dim, next_ci), center in zip(
        ref_cells, ref_cells[1:], ref_centers[1:]
    ):
        face_pts = mapped(dim_, ci)
        face_set = set(complex_.simplex_vertices(dim_, ci))
        apex = next(
            v for v in complex_.simplex_vertices(next_dim, next_ci)
            if v not in face_set
        )
        if halfspace_sign(face_pts, reference[position[apex]], center, tol=tol) <= 0:
            raise ValueError("reference simplex is not well-centered")

    base_cell = complex_.simplex_vertices(piece.base_dim, piece.base_index)
    base_points = complex_.points[list(base_cell)]
    ref_base = reference[[position[v] for v in base_cell]]

    test_rows = [base_points[k] - base_points[0] for k in range(1, len(base_cell))]
    test_rows.extend(np.diff(piece.vertices, axis=0))
    ref_rows = [ref_base[k] - ref_base[0] for k in range(1, len(base_cell))]
    ref_rows.extend(np.diff(np.vstack(ref_centers), axis=0))

    return _sign_of_det(np.vstack(test_rows)) * _sign_of_det(np.vstack(ref_rows))
