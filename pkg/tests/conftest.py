"""Shared oracle helpers for the test suite.

These deliberately recompute geometry through routes independent of the
package internals (Cayley-Menger determinants, explicit in-circle
determinants, per-angle cotangent sums) so tests compare two derivations
rather than an implementation with itself.
"""

import itertools
import math

import numpy as np
import pytest

from signeddec.complexes import build_complex


def cayley_menger_volume(points):
    """k-volume of a simplex from squared distances only."""
    points = np.asarray(points, dtype=float)
    k = len(points) - 1
    if k == 0:
        return 0.0
    m = np.zeros((k + 2, k + 2))
    m[0, 1:] = 1.0
    m[1:, 0] = 1.0
    for i in range(k + 1):
        for j in range(k + 1):
            diff = points[i] - points[j]
            m[i + 1, j + 1] = np.dot(diff, diff)
    det = np.linalg.det(m)
    vol2 = (-1.0) ** (k + 1) / (2.0 ** k * math.factorial(k) ** 2) * det
    return float(np.sqrt(max(vol2, 0.0)))


def incircle_sign(a, b, c, d):
    """Classic in-circle determinant, +1 if d is inside the circle
    through a, b, c taken counterclockwise, -1 outside, 0 on it."""
    rows = []
    for p in (a, b, c):
        dx, dy = p[0] - d[0], p[1] - d[1]
        rows.append([dx, dy, dx * dx + dy * dy])
    det = np.linalg.det(np.array(rows))
    orient = np.linalg.det(np.array([[b[0] - a[0], b[1] - a[1]],
                                     [c[0] - a[0], c[1] - a[1]]]))
    value = det * np.sign(orient)
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def cotan_weights(points, triangles):
    """Per-edge sum of half-cotangents of the opposite angles.

    Returns a dict {(i, j): weight} with i < j. This is the standard
    finite element assembly, no circumcenters involved.
    """
    weights = {}
    for tri in triangles:
        for k in range(3):
            apex = tri[k]
            i, j = sorted((tri[(k + 1) % 3], tri[(k + 2) % 3]))
            u = points[i] - points[apex]
            v = points[j] - points[apex]
            # |u||v| sin(angle) via the Gram identity, any ambient dim
            sine_area = math.sqrt(
                max(np.dot(u, u) * np.dot(v, v) - np.dot(u, v) ** 2, 0.0)
            )
            cot = np.dot(u, v) / sine_area
            weights[(i, j)] = weights.get((i, j), 0.0) + 0.5 * cot
    return weights


def brute_face_count(tops, dim):
    """Number of distinct dim-faces of a set of top simplices, counted
    with plain itertools instead of the complex builder."""
    faces = set()
    for top in tops:
        for combo in itertools.combinations(sorted(top), dim + 1):
            faces.add(combo)
    return len(faces)


def random_rotation(rng, n):
    """Haar-ish random rotation via QR with positive diagonal."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@pytest.fixture(scope="session")
def obtuse_triangle():
    """Single triangle whose circumcenter falls outside, with simple
    closed-form dual values used as frozen references."""
    points = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 0.5]])
    return build_complex(points, [(0, 1, 2)])


@pytest.fixture(scope="session")
def split_square():
    """Unit square cut along a diagonal: the shared edge is exactly
    cocircular, so its dual length is zero."""
    points = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return build_complex(points, [(0, 1, 2), (0, 2, 3)])


@pytest.fixture(scope="session")
def single_tet():
    points = np.array([
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
    ])
    return build_complex(points, [(0, 1, 2, 3)])
