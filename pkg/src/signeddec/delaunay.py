"""Pairwise-Delaunay and one-sided-boundary predicates, mesh classification.

A pair of top simplices sharing a facet is tested after flattening the two
simplices isometrically into R^n: the pair is Delaunay when each apex lies
strictly outside the other simplex's circumsphere. A boundary facet is
one-sided when its coface's circumcenter lies strictly on the apex side of
the facet's hyperplane. A mesh whose internal pairs are all strict and
whose boundary facets are all one-sided is "qualifying": its signed dual
volumes are positive in every dimension.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import AffineHullError, DegeneracyError
from .config import tolerance
from .geometry import circumcenter, flatten_pair, halfspace_sign
from .signed_dual import dual_volumes, step_sign

__all__ = [
    "PAIR_STRICT",
    "PAIR_DEGENERATE",
    "PAIR_VIOLATED",
    "SIDE_YES",
    "SIDE_MARGINAL",
    "SIDE_NO",
    "CircumcenterOrder",
    "MeshReport",
    "pair_status_points",
    "one_sided_status_points",
    "circumcenter_order_points",
    "is_delaunay_pair",
    "is_one_sided",
    "circumcenter_order",
    "classify_complex",
]

PAIR_STRICT = "strict"
PAIR_DEGENERATE = "degenerate"
PAIR_VIOLATED = "violated"

SIDE_YES = "yes"
SIDE_MARGINAL = "marginal"
SIDE_NO = "no"


@dataclass(frozen=True)
class CircumcenterOrder:
    """Positions along the facet-normal axis for a flattened pair.

    All offsets are coordinates along the line through the shared facet's
    circumcenter, perpendicular to the facet within the flattening plane,
    oriented by ``positive_toward`` ("right" or "left" apex).
    center_offset_left/right locate the two simplices' circumcenters,
    apex_offset locates the right apex, apex_radial_distance is that apex's
    distance to the axis, facet_radius is the facet's circumradius.
    """

    center_offset_left: float
    center_offset_right: float
    apex_offset: float
    apex_radial_distance: float
    facet_radius: float
    positive_toward: str


def pair_status_points(facet_points, apex_left, apex_right, tol=None):
    """Delaunay status of a shared-facet pair given raw coordinates.

    Flattens the pair into R^n and compares each apex against the other
    simplex's circumsphere: "strict" if outside beyond relative tolerance,
    "violated" if inside beyond tolerance, "degenerate" near the sphere.
    """
    eps = tolerance(tol)
    flat = flatten_pair(facet_points, apex_left, apex_right, tol=tol)
    left = circumcenter(np.vstack([flat.facet, flat.apex_left]), tol=tol)
    right = circumcenter(np.vstack([flat.facet, flat.apex_right]), tol=tol)
    margin_left = (
        float(np.linalg.norm(flat.apex_right - left.center)) - left.radius
    ) / left.radius
    margin_right = (
        float(np.linalg.norm(flat.apex_left - right.center)) - right.radius
    ) / right.radius
    if min(margin_left, margin_right) > eps:
        return PAIR_STRICT
    if max(margin_left, margin_right) < -eps:
        return PAIR_VIOLATED
    return PAIR_DEGENERATE


def one_sided_status_points(facet_points, apex, tol=None):
    """One-sidedness of a boundary facet given raw coordinates: is the
    circumcenter of facet+apex strictly on the apex side of the facet?
    """
    full = np.vstack([np.asarray(facet_points, dtype=float), np.asarray(apex, dtype=float)])
    center = circumcenter(full, tol=tol).center
    side = halfspace_sign(facet_points, apex, center, tol=tol)
    return {1: SIDE_YES, 0: SIDE_MARGINAL, -1: SIDE_NO}[side]


def circumcenter_order_points(
    facet_points, apex_left, apex_right, positive_toward="right", tol=None
):
    """Axis offsets of the two circumcenters for a flattened pair, plus
    whether they are correctly ordered (each center strictly toward its
    own simplex's side of the other).

    Returns (CircumcenterOrder, order_correct). Correct order means the
    right simplex's center offset exceeds the left one's when the positive
    axis direction points toward the right apex, and the reverse for
    "left"; the boolean is the same either way.
    """
    if positive_toward not in ("right", "left"):
        raise ValueError(f"positive_toward must be 'right' or 'left', got {positive_toward!r}")
    flat = flatten_pair(facet_points, apex_left, apex_right, tol=tol)
    n = flat.facet.shape[1]
    axis = np.zeros(n)
    axis[n - 1] = 1.0 if positive_toward == "right" else -1.0

    facet_circ = circumcenter(flat.facet, tol=tol)
    left = circumcenter(np.vstack([flat.facet, flat.apex_left]), tol=tol)
    right = circumcenter(np.vstack([flat.facet, flat.apex_right]), tol=tol)

    offset_left = float((left.center - facet_circ.center) @ axis)
    offset_right = float((right.center - facet_circ.center) @ axis)
    apex_vec = flat.apex_right - facet_circ.center
    apex_offset = float(apex_vec @ axis)
    apex_radial = float(np.linalg.norm(apex_vec - apex_offset * axis))

    data = CircumcenterOrder(
        center_offset_left=offset_left,
        center_offset_right=offset_right,
        apex_offset=apex_offset,
        apex_radial_distance=apex_radial,
        facet_radius=facet_circ.radius,
        positive_toward=positive_toward,
    )
    if positive_toward == "right":
        order_correct = offset_right > offset_left
    else:
        order_correct = offset_right < offset_left
    return data, order_correct


def _pair_apexes(complex_, left_top, right_top, facet_index):
    facet = set(complex_.simplex_vertices(complex_.n - 1, facet_index))
    cofaces = [c for c, _ in complex_.cofaces[complex_.n - 1][facet_index]]
    if left_top not in cofaces or right_top not in cofaces or left_top == right_top:
        raise ValueError(
            f"simplices {left_top}, {right_top} do not share facet {facet_index}"
        )
    apex_left = complex_.apex_vertex(complex_.n - 1, facet_index, left_top)
    apex_right = complex_.apex_vertex(complex_.n - 1, facet_index, right_top)
    return (
        complex_.simplex_points(complex_.n - 1, facet_index),
        complex_.points[apex_left],
        complex_.points[apex_right],
    )


def is_delaunay_pair(complex_, left_top, right_top, facet_index, tol=None):
    """Delaunay status of the pair of top simplices sharing a facet."""
    facet_pts, left_apex, right_apex = _pair_apexes(
        complex_, left_top, right_top, facet_index
    )
    if complex_.N == complex_.n:
        # Full-dimensional pair: flattening is rigid, so the empty-sphere
        # test can use the cached ambient circumspheres directly.
        eps = tolerance(tol)
        margins = []
        for top, apex in ((left_top, right_apex), (right_top, left_apex)):
            data = complex_.circumcenter_of(complex_.n, top)
            margins.append(
                (np.linalg.norm(apex - data.center) - data.radius) / data.radius
            )
        worst = min(margins)
        if worst > eps:
            return PAIR_STRICT
        if worst < -eps:
            return PAIR_VIOLATED
        return PAIR_DEGENERATE
    return pair_status_points(facet_pts, left_apex, right_apex, tol=tol)


def circumcenter_order(
    complex_, left_top, right_top, facet_index, positive_toward="right", tol=None
):
    """CircumcenterOrder data for an internal facet of the complex."""
    facet_pts, left_apex, right_apex = _pair_apexes(
        complex_, left_top, right_top, facet_index
    )
    return circumcenter_order_points(
        facet_pts, left_apex, right_apex, positive_toward=positive_toward, tol=tol
    )


def is_one_sided(complex_, top_index, facet_index, tol=None):
    """One-sidedness status of a boundary facet against its coface.

    Identical to the chain step sign of facet -> coface, so the dual length
    of the facet is positive exactly for SIDE_YES.
    """
    side = step_sign(complex_, complex_.n - 1, facet_index, top_index, tol=tol)
    return {1: SIDE_YES, 0: SIDE_MARGINAL, -1: SIDE_NO}[side]


@dataclass
class MeshReport:
    """Classification of a complex: pair statuses over internal facets,
    one-sidedness over boundary facets, nonpositive signed dual volumes
    over all dimensions, and the overall verdict.
    """

    pair_statuses: list = field(default_factory=list)       # (facet, (left, right), status)
    boundary_statuses: list = field(default_factory=list)   # (facet, top, status)
    nonpositive_duals: list = field(default_factory=list)   # (dim, index, signed volume)
    verdict: str = "not qualifying"

    @property
    def is_qualifying(self):
        return self.verdict == "qualifying"

    @property
    def violated_pairs(self):
        return [row for row in self.pair_statuses if row[2] == PAIR_VIOLATED]

    @property
    def degenerate_pairs(self):
        return [row for row in self.pair_statuses if row[2] == PAIR_DEGENERATE]

    @property
    def non_one_sided(self):
        return [row for row in self.boundary_statuses if row[2] == SIDE_NO]

    @property
    def marginal_boundary(self):
        return [row for row in self.boundary_statuses if row[2] == SIDE_MARGINAL]

    def as_dict(self):
        """Plain JSON-ready dict."""
        return {
            "verdict": self.verdict,
            "pairwise_delaunay": [
                {"facet": f, "tops": list(tops), "status": status}
                for f, tops, status in self.pair_statuses
            ],
            "one_sided": [
                {"facet": f, "top": top, "status": status}
                for f, top, status in self.boundary_statuses
            ],
            "nonpositive_duals": [
                {"dim": d, "index": i, "signed_volume": v}
                for d, i, v in self.nonpositive_duals
            ],
        }


def classify_complex(complex_, tol=None, check_duals=True):
    """Classify every internal facet, boundary facet and (optionally)
    every signed dual volume; never raises on predicate degeneracies,
    which are recorded as "degenerate"/"marginal" statuses.

    The verdict is "qualifying" exactly when all internal pairs are strict
    and all boundary facets one-sided; positive dual volumes in every
    dimension are then a theorem, and any nonpositive ones found are
    reported for diagnosis.
    """
    report = MeshReport()
    for facet_index, (left, right) in complex_.internal_faces():
        try:
            status = is_delaunay_pair(complex_, left, right, facet_index, tol=tol)
        except (DegeneracyError, AffineHullError):
            status = PAIR_DEGENERATE
        report.pair_statuses.append((facet_index, (left, right), status))
    for facet_index, top in complex_.boundary_faces():
        try:
            status = is_one_sided(complex_, top, facet_index, tol=tol)
        except (DegeneracyError, AffineHullError):
            status = SIDE_MARGINAL
        report.boundary_statuses.append((facet_index, top, status))
    if check_duals:
        for dim in range(complex_.n + 1):
            signed, _ = dual_volumes(complex_, dim, tol=tol)
            for i in np.nonzero(signed <= 0.0)[0]:
                report.nonpositive_duals.append((dim, int(i), float(signed[i])))
    ok_pairs = all(s == PAIR_STRICT for _, _, s in report.pair_statuses)
    ok_boundary = all(s == SIDE_YES for _, _, s in report.boundary_statuses)
    report.verdict = "qualifying" if ok_pairs and ok_boundary else "not qualifying"
    return report
