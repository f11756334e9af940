import numpy as np
import pytest

from curvhess import (angle_defects, assemble_K, build_mesh, crof_dof_map,
                      geometry)
from curvhess.meshgen import (cone_fan, icosahedron, icosphere, open_fan,
                              square_grid, tetrahedron, torus)

from oracles import curvature_matrix_oracle


def _defects(mesh):
    geom = geometry(mesh)
    return geom, angle_defects(mesh, geom)


def test_flat_mesh_zero_defects(jittered_grid):
    geom, d = _defects(jittered_grid)
    assert np.abs(d.defects).max() < 1e-12
    K = assemble_K(jittered_grid, geom, d, crof_dof_map(jittered_grid))
    hmin = geom.edge_lengths.min()
    assert np.abs(K.toarray()).max() < 1e-12 / hmin ** 2


def test_tetrahedron_defects():
    geom, d = _defects(tetrahedron())
    assert np.allclose(d.defects, np.pi, atol=1e-12)
    assert abs(d.defects.sum() - 4 * np.pi) < 1e-12


def test_icosahedron_defects():
    geom, d = _defects(icosahedron())
    assert np.allclose(d.defects, np.pi / 3.0, atol=1e-12)
    assert abs(d.defects.sum() - 4 * np.pi) < 1e-12


def test_torus_gauss_bonnet():
    mesh = torus()
    geom, d = _defects(mesh)
    assert mesh.euler_characteristic == 0
    assert abs(d.defects.sum()) < 1e-9


def test_boundary_defects_zero(small_annulus):
    geom, d = _defects(small_annulus)
    assert (d.defects[small_annulus.boundary_vertices] == 0.0).all()


def test_tip_angle_weights_partition_of_unity(sphere3):
    mesh = sphere3
    geom = geometry(mesh)
    w = geom.corner_angles / geom.vertex_angle_sums[mesh.faces]
    sums = np.bincount(mesh.faces.ravel(), weights=w.ravel(),
                       minlength=mesh.n_vertices)
    assert np.abs(sums - 1.0).max() < 1e-12


def test_boundary_only_curvature_gives_zero_K():
    # every vertex of an open fan is on the boundary, so all defects
    # are zeroed and K vanishes identically
    mesh = open_fan(4, np.pi / 3)
    geom, d = _defects(mesh)
    assert (d.defects == 0.0).all()
    K = assemble_K(mesh, geom, d, crof_dof_map(mesh))
    assert np.abs(K.toarray()).max() == 0.0


def test_cone_fan_apex_defect():
    mesh = cone_fan(6, np.pi / 4)
    geom, d = _defects(mesh)
    assert abs(d.defects[0] - np.pi / 2.0) < 1e-12
    assert abs(d.angle_sums[0] - 3.0 * np.pi / 2.0) < 1e-12
    assert (d.defects[1:] == 0.0).all()


def test_cone_fan_K_hand_values():
    mesh = cone_fan(6, np.pi / 4)
    geom, d = _defects(mesh)
    K = assemble_K(mesh, geom, d, crof_dof_map(mesh)).toarray()
    # apex weight per face: (pi/4) * (pi/2) / (3 pi/2) = pi/12
    per_face = (np.pi / 4.0) * (np.pi / 2.0) / (1.5 * np.pi)
    outer_len_sq = 2.0 - np.sqrt(2.0)  # (2 sin(pi/8))^2
    for e in range(mesh.n_edges):
        u, v = mesh.edges[e]
        if u == 0:  # radial edge, two incident faces, unit length
            expect = 2.0 * per_face
        else:       # outer ring edge, one face
            expect = per_face / outer_len_sq
        assert abs(K[2 * e, 2 * e] - expect) < 1e-12
        assert abs(K[2 * e + 1, 2 * e + 1] - expect) < 1e-12
        assert K[2 * e, 2 * e + 1] == 0.0


@pytest.mark.parametrize("mesh_fn", [
    lambda: cone_fan(6, np.pi / 4),
    lambda: tetrahedron(),
    lambda: icosphere(1),
])
def test_K_matches_pointwise_oracle(mesh_fn):
    mesh = mesh_fn()
    geom, d = _defects(mesh)
    K = assemble_K(mesh, geom, d, crof_dof_map(mesh)).toarray()
    Ko = curvature_matrix_oracle(mesh, geom, d)
    scale = max(np.abs(Ko).max(), 1e-30)
    assert np.abs(K - Ko).max() <= 1e-9 * scale
    assert np.abs(K - K.T).max() == 0.0
