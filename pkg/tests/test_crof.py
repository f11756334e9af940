import numpy as np
import pytest

from curvhess import (assemble_B, assemble_cotan, assemble_D, assemble_L,
                      assemble_M, build_mesh, crof_dof_map, geometry)
from curvhess.meshgen import (equilateral_pair, equilateral_triangle,
                              square_grid, tetrahedron)
from curvhess.reference import (FlatPair, evaluate_crof_form,
                                quadrature_oracle_flat_pair,
                                triangle_quadrature)


def _assembled(mesh):
    geom = geometry(mesh)
    dm = crof_dof_map(mesh)
    return geom, dm


def test_dof_map_interleaves():
    mesh = equilateral_triangle()
    dm = crof_dof_map(mesh)
    assert dm.n_dofs == 6
    assert dm.parallel(2) == 4
    assert dm.perpendicular(2) == 5


def test_L_equilateral_entries():
    mesh = equilateral_triangle()
    geom, dm = _assembled(mesh)
    L = assemble_L(mesh, geom, dm).toarray()
    diag = 4.0 / np.sqrt(3.0)
    assert np.allclose(np.diag(L), diag, atol=1e-12)
    # parallel/parallel cross terms: (4/sqrt(3)) cos^2(pi/3) = 1/sqrt(3),
    # up to the orientation sign of the pair
    for e in range(3):
        for f in range(e + 1, 3):
            assert abs(abs(L[2 * e, 2 * f]) - 1.0 / np.sqrt(3.0)) < 1e-12
    # parallel and perpendicular of one edge never couple
    for e in range(3):
        assert L[2 * e, 2 * e + 1] == 0.0


def test_M_equilateral():
    mesh = equilateral_triangle()
    geom, dm = _assembled(mesh)
    M = assemble_M(mesh, geom, dm)
    assert np.allclose(M.diagonal(), np.sqrt(3.0) / 12.0, atol=1e-12)
    assert (M - M.T).nnz == 0


def test_M_interior_edge_two_faces():
    mesh = equilateral_pair()
    geom, dm = _assembled(mesh)
    M = assemble_M(mesh, geom, dm)
    shared = int(np.flatnonzero(~mesh.boundary_edges)[0])
    diag = M.diagonal()
    assert abs(diag[2 * shared] - np.sqrt(3.0) / 6.0) < 1e-12
    assert diag.min() > 0.0


def test_D_equilateral_perpendicular_entries():
    mesh = equilateral_triangle()
    geom, dm = _assembled(mesh)
    D = assemble_D(mesh, geom, dm).toarray()
    # edge (0,1) runs 0 -> 1 in face (0,1,2): opposite vertex 2 gets 1/6,
    # tail vertex 0 gets -(l_jk/(6 l_ij)) cos(pi/3) = -1/12
    e01 = int(np.flatnonzero((mesh.edges == (0, 1)).all(axis=1))[0])
    assert abs(D[2 * e01 + 1, 2] - 1.0 / 6.0) < 1e-12
    assert abs(D[2 * e01 + 1, 0] + 1.0 / 12.0) < 1e-12


def test_D_annihilates_constants(jittered_grid, sphere3, saddle):
    for mesh in (jittered_grid, sphere3, saddle):
        geom, dm = _assembled(mesh)
        D = assemble_D(mesh, geom, dm)
        r = np.abs(D @ np.ones(mesh.n_vertices))
        # parallel rows cancel identically; perpendicular rows are zero
        # to double precision of the entry scale
        assert r[0::2].max() == 0.0
        assert r.max() <= 1e-15 * np.abs(D.data).max()


def test_B_equilateral_and_total_mass(jittered_grid):
    mesh = equilateral_triangle()
    geom = geometry(mesh)
    B = assemble_B(mesh, geom)
    assert np.allclose(B.diagonal(), np.sqrt(3.0) / 12.0, atol=1e-12)

    tet = tetrahedron()
    gt = geometry(tet)
    Bt = assemble_B(tet, gt)
    # unit tet: three incident faces x (sqrt(3)/4)/3 each
    assert np.allclose(Bt.diagonal(), np.sqrt(3.0) / 4.0, atol=1e-12)
    assert abs(Bt.diagonal().sum() - gt.double_areas.sum() / 2.0) < 1e-12

    gg = geometry(jittered_grid)
    Bg = assemble_B(jittered_grid, gg)
    assert abs(Bg.diagonal().sum() - gg.double_areas.sum() / 2.0) < 1e-10


def test_cotan_equilateral_and_nullspace(jittered_grid):
    mesh = equilateral_triangle()
    C = assemble_cotan(mesh, geometry(mesh)).toarray()
    off = -1.0 / (2.0 * np.sqrt(3.0))
    for i in range(3):
        for j in range(3):
            if i != j:
                assert abs(C[i, j] - off) < 1e-12
    Cg = assemble_cotan(jittered_grid, geometry(jittered_grid))
    ones = np.ones(jittered_grid.n_vertices)
    assert np.abs(Cg @ ones).max() < 1e-12 * np.abs(Cg.data).max()


def test_cotan_five_point_stencil():
    mesh = square_grid(4)  # uniform, spacing 0.5
    C = assemble_cotan(mesh, geometry(mesh)).tocsr()
    interior = np.flatnonzero(~mesh.boundary_vertices)
    v = int(interior[0])
    row = C[v].toarray().ravel()
    assert abs(row[v] - 4.0) < 1e-12
    nbrs = np.flatnonzero(np.abs(row) > 1e-12)
    nbrs = nbrs[nbrs != v]
    assert len(nbrs) == 4
    assert np.allclose(row[nbrs], -1.0, atol=1e-12)


def test_L_positive_semidefinite(jittered_grid, sphere3, saddle):
    rng = np.random.default_rng(5)
    for mesh in (jittered_grid, sphere3, saddle):
        geom, dm = _assembled(mesh)
        L = assemble_L(mesh, geom, dm)
        assert (L - L.T).nnz == 0
        for _ in range(1000):
            x = rng.standard_normal(dm.n_dofs)
            assert x @ (L @ x) >= -1e-10 * (x @ x)


def test_assembly_matches_quadrature_oracle():
    rng = np.random.default_rng(1234)
    for _ in range(10):
        pair = FlatPair.random(rng)
        mesh = build_mesh(pair.embed3d(), pair.faces)
        assert [tuple(e) for e in mesh.edges] == pair.edges()
        geom, dm = _assembled(mesh)
        Lo, Mo, Do = quadrature_oracle_flat_pair(pair)
        for got, want in ((assemble_L(mesh, geom, dm), Lo),
                          (assemble_M(mesh, geom, dm), Mo),
                          (assemble_D(mesh, geom, dm), Do)):
            scale = np.abs(want).max()
            assert np.abs(got.toarray() - want).max() <= 1e-9 * scale


def test_constant_form_reproduction(jittered_grid):
    # u = x: w = M^-1 D u is the constant form dx on a flat mesh, so it
    # lies in the kernel of L and evaluates to dx pointwise
    mesh = jittered_grid
    geom, dm = _assembled(mesh)
    L = assemble_L(mesh, geom, dm)
    M = assemble_M(mesh, geom, dm)
    D = assemble_D(mesh, geom, dm)
    w = (D @ mesh.vertices[:, 0]) / M.diagonal()
    lw = np.abs(L @ w).max()
    assert lw <= 1e-10 * np.abs(L.data).max() * np.abs(w).max()

    _, bary = triangle_quadrature(4)
    vals = evaluate_crof_form(mesh.vertices[:, :2], mesh.faces, mesh.edges,
                              w, bary)
    assert np.abs(vals[..., 0] - 1.0).max() < 1e-10
    assert np.abs(vals[..., 1]).max() < 1e-10


def test_assembly_bit_reproducible(saddle):
    geom, dm = _assembled(saddle)
    A1 = assemble_L(saddle, geom, dm)
    A2 = assemble_L(saddle, geom, dm)
    assert np.array_equal(A1.data, A2.data)
    assert np.array_equal(A1.indices, A2.indices)
