"""Coordinate-level primitives: circumcenters, volumes, side tests,
pair flattening."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cayley_menger_volume, random_rotation
from signeddec.errors import AffineHullError, DegeneracyError
from signeddec.geometry import (
    circumcenter,
    flatten_pair,
    halfspace_sign,
    simplex_volume,
)


@st.composite
def random_simplex(draw, max_k=3):
    seed = draw(st.integers(0, 2**31 - 1))
    k = draw(st.integers(1, max_k))
    ambient = draw(st.integers(k, 3))
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-2.0, 2.0, size=(k + 1, ambient))
    # reject flat draws; the predicates under test are meant for the
    # generic case, degeneracy is tested separately
    if cayley_menger_volume(pts) < 1e-3:
        pts = None
    return pts, rng


def test_circumcenter_known_triangle():
    data = circumcenter(np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 0.5]]))
    assert np.allclose(data.center, [2.0, -3.75])
    assert np.isclose(data.radius, 4.25)


def test_circumcenter_segment_is_midpoint():
    data = circumcenter(np.array([[1.0, 1.0, 0.0], [3.0, 1.0, 0.0]]))
    assert np.allclose(data.center, [2.0, 1.0, 0.0])
    assert np.isclose(data.radius, 1.0)


def test_circumcenter_point():
    data = circumcenter(np.array([[2.0, 7.0]]))
    assert np.allclose(data.center, [2.0, 7.0])
    assert data.radius == 0.0


def test_circumcenter_colinear_raises():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(DegeneracyError):
        circumcenter(pts)


@settings(max_examples=100, deadline=None)
@given(random_simplex())
def test_circumcenter_equidistant_in_hull(data):
    pts, _ = data
    if pts is None:
        return
    circ = circumcenter(pts)
    dists = np.linalg.norm(pts - circ.center, axis=1)
    assert np.allclose(dists, circ.radius, rtol=1e-9)
    # center lies in the affine hull of the vertices
    edges = (pts[1:] - pts[0]).T
    coeff, residual, *_ = np.linalg.lstsq(edges, circ.center - pts[0], rcond=None)
    rebuilt = pts[0] + edges @ coeff
    assert np.allclose(rebuilt, circ.center, atol=1e-9 * max(circ.radius, 1.0))


def test_volume_unit_right_triangle():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert np.isclose(simplex_volume(pts), 0.5)


def test_volume_regular_tet_edge_one():
    pts = np.array([
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, np.sqrt(3.0) / 2.0, 0.0],
        [0.5, np.sqrt(3.0) / 6.0, np.sqrt(2.0 / 3.0)],
    ])
    assert np.isclose(simplex_volume(pts), np.sqrt(2.0) / 12.0, rtol=1e-12)


def test_volume_single_point_convention():
    assert simplex_volume(np.array([[3.0, 4.0]])) == 1.0


@settings(max_examples=100, deadline=None)
@given(random_simplex())
def test_volume_matches_cayley_menger(data):
    pts, _ = data
    if pts is None:
        return
    assert np.isclose(simplex_volume(pts), cayley_menger_volume(pts), rtol=1e-8)


@settings(max_examples=50, deadline=None)
@given(random_simplex())
def test_rigid_motion_equivariance(data):
    pts, rng = data
    if pts is None:
        return
    rot = random_rotation(rng, pts.shape[1])
    shift = rng.uniform(-5.0, 5.0, pts.shape[1])
    moved = pts @ rot.T + shift
    before = circumcenter(pts)
    after = circumcenter(moved)
    assert np.isclose(after.radius, before.radius, rtol=1e-9)
    assert np.allclose(after.center, before.center @ rot.T + shift, atol=1e-9)
    assert np.isclose(simplex_volume(moved), simplex_volume(pts), rtol=1e-9)


def test_halfspace_sign_square_cases():
    facet = np.array([[0.0, 0.0], [1.0, 0.0]])
    apex = np.array([0.0, 1.0])
    assert halfspace_sign(facet, apex, np.array([0.5, 2.0])) == 1
    assert halfspace_sign(facet, apex, np.array([0.5, -1.0])) == -1
    assert halfspace_sign(facet, apex, np.array([0.3, 0.0])) == 0


def test_halfspace_sign_degenerate_apex():
    facet = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(DegeneracyError):
        halfspace_sign(facet, np.array([2.0, 0.0]), np.array([0.5, 1.0]))


def test_halfspace_sign_query_off_hull():
    # in R^3 the facet+apex plane is z = 0; a query off that plane is an
    # error, not a sign
    facet = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    apex = np.array([0.0, 1.0, 0.0])
    with pytest.raises(AffineHullError):
        halfspace_sign(facet, apex, np.array([0.5, 0.5, 1.0]))


def test_flatten_pair_folded_equilateral():
    # two unit equilateral triangles sharing an edge, folded to a 90
    # degree dihedral: apexes sit sqrt(3/2) apart in space, sqrt(3) once
    # both heights are laid out flat
    h = np.sqrt(3.0) / 2.0
    facet = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    apex_left = np.array([0.5, h, 0.0])
    apex_right = np.array([0.5, 0.0, h])
    assert np.isclose(np.linalg.norm(apex_left - apex_right), np.sqrt(1.5))
    flat = flatten_pair(facet, apex_left, apex_right)
    assert flat.facet.shape == (2, 2)
    assert np.allclose(flat.facet[:, 1], 0.0)
    assert flat.apex_left[1] < 0.0 < flat.apex_right[1]
    assert np.isclose(
        np.linalg.norm(flat.apex_left - flat.apex_right), np.sqrt(3.0), rtol=1e-12
    )


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 3))
def test_flatten_pair_is_isometric_per_simplex(seed, n):
    rng = np.random.default_rng(seed)
    facet = rng.uniform(-1.0, 1.0, size=(n, n))
    left = rng.uniform(-1.0, 1.0, n)
    right = rng.uniform(-1.0, 1.0, n)
    if cayley_menger_volume(np.vstack([facet, left])) < 1e-3:
        return
    if cayley_menger_volume(np.vstack([facet, right])) < 1e-3:
        return
    # apexes must land on opposite sides of the shared facet for the
    # layout to make sense as a pair
    if halfspace_sign(facet, left, right) != -1:
        return
    flat = flatten_pair(facet, left, right)
    for apex, image in ((left, flat.apex_left), (right, flat.apex_right)):
        original = np.vstack([facet, apex])
        mapped = np.vstack([flat.facet, image])
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                assert np.isclose(
                    np.linalg.norm(mapped[i] - mapped[j]),
                    np.linalg.norm(original[i] - original[j]),
                    rtol=1e-9,
                )
