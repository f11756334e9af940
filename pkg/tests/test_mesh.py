import numpy as np
import pytest

from curvhess import (DegenerateFace, InvalidIndex, NonManifoldEdge,
                      build_mesh, geometry, triangle_regularity)
from curvhess.meshgen import (equilateral_triangle, icosphere, square_grid,
                              tetrahedron)


def test_single_triangle():
    mesh = build_mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    assert mesh.n_vertices == 3
    assert mesh.n_faces == 1
    assert mesh.n_edges == 3
    assert mesh.boundary_edges.all()
    assert mesh.boundary_vertices.all()


def test_tetrahedron_topology():
    mesh = tetrahedron()
    assert mesh.n_edges == 6
    assert not mesh.boundary_edges.any()
    assert mesh.euler_characteristic == 2
    assert not mesh.has_boundary


def test_two_triangles_shared_edge():
    # hand enumeration: verts 0-3, faces (0,1,2) and (1,0,3)
    mesh = build_mesh([[0, 0, 0], [1, 0, 0], [0.5, 1, 0], [0.5, -1, 0]],
                      [[0, 1, 2], [1, 0, 3]])
    assert mesh.n_edges == 5
    assert mesh.boundary_edges.sum() == 4
    shared = np.flatnonzero(~mesh.boundary_edges)
    assert len(shared) == 1
    assert tuple(mesh.edges[shared[0]]) == (0, 1)
    # the shared edge appears with opposite local signs in its two faces
    signs = []
    for f in range(2):
        for a in range(3):
            if mesh.face_edges[f, a] == shared[0]:
                signs.append(int(mesh.face_edge_signs[f, a]))
    assert sorted(signs) == [-1, 1]


def test_edge_enumeration_deterministic():
    m1 = square_grid(5, jitter=0.2, seed=1)
    m2 = build_mesh(m1.vertices, m1.faces)
    assert np.array_equal(m1.edges, m2.edges)
    assert np.array_equal(m1.face_edges, m2.face_edges)
    assert np.array_equal(m1.face_edge_signs, m2.face_edge_signs)
    # global orientation is always low -> high
    assert (m1.edges[:, 0] < m1.edges[:, 1]).all()


def test_interior_edge_signs_cancel(jittered_grid):
    mesh = jittered_grid
    sums = np.bincount(mesh.face_edges.ravel(),
                       weights=mesh.face_edge_signs.ravel(),
                       minlength=mesh.n_edges)
    assert (sums[~mesh.boundary_edges] == 0).all()
    assert (np.abs(sums[mesh.boundary_edges]) == 1).all()


def test_errors():
    quad = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0.5, 0.5, 1]]
    with pytest.raises(InvalidIndex):
        build_mesh(quad[:3], [[0, 1, 5]])
    with pytest.raises(DegenerateFace):
        build_mesh([[0, 0, 0], [1, 0, 0], [2, 0, 0]], [[0, 1, 2]])
    with pytest.raises(DegenerateFace):
        build_mesh(quad[:3], [[0, 1, 1]])
    # three faces on one edge
    with pytest.raises(NonManifoldEdge):
        build_mesh(quad, [[0, 1, 2], [1, 0, 3], [0, 1, 4]])
    # two faces traversing the shared edge in the same direction
    with pytest.raises(NonManifoldEdge):
        build_mesh(quad[:4], [[0, 1, 2], [0, 1, 3]])


def test_equilateral_geometry():
    mesh = equilateral_triangle()
    geom = geometry(mesh)
    assert np.allclose(geom.corner_angles, np.pi / 3, atol=1e-12)
    assert abs(geom.double_areas[0] - np.sqrt(3) / 2) < 1e-12
    assert np.allclose(geom.edge_lengths, 1.0, atol=1e-12)


def test_right_triangle_geometry():
    mesh = build_mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    geom = geometry(mesh)
    assert abs(geom.double_areas[0] - 1.0) < 1e-12
    assert sorted(geom.corner_angles[0]) == pytest.approx(
        [np.pi / 4, np.pi / 4, np.pi / 2], abs=1e-12)


def test_face_angle_sums_are_pi(jittered_grid, sphere3):
    for mesh in (jittered_grid, sphere3):
        geom = geometry(mesh)
        sums = geom.corner_angles.sum(axis=1)
        assert np.abs(sums - np.pi).max() < 1e-9


def test_tetrahedron_vertex_angle_sum():
    geom = geometry(tetrahedron())
    assert np.allclose(geom.vertex_angle_sums, np.pi, atol=1e-12)


def test_heron_matches_cross_product(jittered_grid, saddle):
    for mesh in (jittered_grid, saddle):
        geom = geometry(mesh)
        v = mesh.vertices[mesh.faces]
        cross = np.linalg.norm(np.cross(v[:, 1] - v[:, 0],
                                        v[:, 2] - v[:, 0]), axis=1)
        rel = np.abs(geom.double_areas - cross) / cross
        assert rel.max() < 1e-9


def test_regularity_equilateral():
    reg = triangle_regularity(equilateral_triangle())
    assert abs(reg.ratios[0] - 2.0) < 1e-12


def test_regularity_right_isoceles():
    # independent evaluation: R = abc/(4 area), r = area/s
    mesh = build_mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    a, b, c = 1.0, 1.0, np.sqrt(2.0)
    area = 0.5
    big_r = a * b * c / (4 * area)
    small_r = area / ((a + b + c) / 2)
    reg = triangle_regularity(mesh)
    assert abs(reg.ratios[0] - big_r / small_r) < 1e-12
    assert abs(reg.ratios[0] - (1 + np.sqrt(2.0))) < 1e-12


def test_regularity_euler_inequality():
    rng = np.random.default_rng(17)
    for _ in range(200):
        pts = rng.uniform(-1, 1, size=(3, 2))
        u, v = pts[1] - pts[0], pts[2] - pts[0]
        area2 = u[0] * v[1] - u[1] * v[0]
        if abs(area2) < 1e-3:
            continue
        verts = np.hstack([pts, np.zeros((3, 1))])
        faces = [[0, 1, 2]] if area2 > 0 else [[0, 2, 1]]
        reg = triangle_regularity(build_mesh(verts, faces))
        assert reg.ratios[0] >= 2.0 - 1e-12


def test_mesh_is_immutable(sphere3):
    with pytest.raises(ValueError):
        sphere3.vertices[0, 0] = 5.0
    with pytest.raises(ValueError):
        sphere3.faces[0, 0] = 1
