"""Complex construction, face closure, incidence and boundary operators."""

import numpy as np
import pytest

from conftest import brute_face_count
from signeddec.complexes import boundary_operator, build_complex
from signeddec.errors import ComplexError, DegeneracyError, NonManifoldError


def _two_tets():
    points = np.array([
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.3, 0.3, 1.0],
        [0.3, 0.3, -1.0],
    ])
    return build_complex(points, [(0, 1, 2, 3), (0, 1, 2, 4)])


def _square():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return build_complex(points, [(0, 1, 2), (0, 2, 3)])


def test_two_tets_counts():
    complex_ = _two_tets()
    tops = [(0, 1, 2, 3), (0, 1, 2, 4)]
    for dim in range(4):
        assert complex_.num_simplices(dim) == brute_face_count(tops, dim)
    assert [complex_.num_simplices(d) for d in range(4)] == [5, 9, 7, 2]


def test_faces_closed_and_sorted():
    complex_ = _two_tets()
    for dim in range(1, complex_.n + 1):
        for i in range(complex_.num_simplices(dim)):
            cell = complex_.simplex_vertices(dim, i)
            assert cell == tuple(sorted(cell))
            for k in range(dim + 1):
                face = cell[:k] + cell[k + 1:]
                complex_.simplex_index(dim - 1, face)  # must exist


def test_simplex_index_roundtrip_and_miss():
    complex_ = _square()
    idx = complex_.simplex_index(1, (2, 0))
    assert complex_.simplex_vertices(1, idx) == (0, 2)
    with pytest.raises(ComplexError):
        complex_.simplex_index(1, (1, 3))


def test_apex_vertex():
    complex_ = _square()
    diag = complex_.simplex_index(1, (0, 2))
    cofs = [c for c, _ in complex_.cofaces[1][diag]]
    apexes = {complex_.apex_vertex(1, diag, c) for c in cofs}
    assert apexes == {1, 3}


def test_boundary_and_internal_faces():
    complex_ = _square()
    boundary = {complex_.simplex_vertices(1, f) for f, _ in complex_.boundary_faces()}
    assert boundary == {(0, 1), (1, 2), (2, 3), (0, 3)}
    internal = complex_.internal_faces()
    assert len(internal) == 1
    facet, tops = internal[0]
    assert complex_.simplex_vertices(1, facet) == (0, 2)
    assert set(tops) == {0, 1}


def test_two_tets_boundary_triangles():
    complex_ = _two_tets()
    boundary = complex_.boundary_faces()
    assert len(boundary) == 6
    shared = complex_.simplex_index(2, (0, 1, 2))
    assert shared not in {f for f, _ in boundary}


def test_boundary_operator_edge():
    points = np.array([[0.0, 0.0], [1.0, 0.0]])
    complex_ = build_complex(points, [(0, 1)])
    d = boundary_operator(complex_, 1).toarray()
    assert d.shape == (2, 1)
    assert d[0, 0] == -1 and d[1, 0] == 1


def test_boundary_operator_shared_edge_signs():
    # consistently oriented triangles put opposite signs in the shared
    # edge's row
    complex_ = _square()
    d2 = boundary_operator(complex_, 2).toarray()
    row = d2[complex_.simplex_index(1, (0, 2))]
    assert sorted(row.tolist()) == [-1, 1]


def test_boundary_of_boundary_is_zero():
    for complex_ in (_square(), _two_tets()):
        for dim in range(2, complex_.n + 1):
            product = boundary_operator(complex_, dim - 1) @ boundary_operator(
                complex_, dim
            )
            assert product.nnz == 0 or np.all(product.toarray() == 0)


def test_total_volume():
    assert np.isclose(_square().total_volume, 1.0)
    assert np.isclose(_two_tets().total_volume, 1.0 / 3.0)


def test_rejects_nonmanifold():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [1.5, 1.0]])
    with pytest.raises(NonManifoldError):
        build_complex(points, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])


def test_rejects_degenerate_top():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(DegeneracyError):
        build_complex(points, [(0, 1, 2)])


def test_rejects_duplicate_top():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ComplexError):
        build_complex(points, [(0, 1, 2), (2, 1, 0)])


def test_rejects_bad_vertex_references():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ComplexError):
        build_complex(points, [(0, 1, 7)])
    with pytest.raises(ComplexError):
        build_complex(points, [(0, 1, 1)])


def test_rejects_mixed_dimension_tops():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    with pytest.raises(ComplexError):
        build_complex(points, [(0, 1, 2), (2, 3)])


def test_points_are_frozen():
    complex_ = _square()
    with pytest.raises(ValueError):
        complex_.points[0, 0] = 9.0
