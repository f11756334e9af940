import numpy as np
import pytest

from curvhess import (ProjectionDiverged, build_mesh, geometry,
                      loop_subdivide, loop_subdivision_operator,
                      parse_surface, project_to_surface,
                      triangle_regularity)
from curvhess.meshgen import (icosahedron, icosphere, single_triangle,
                              square_grid, tetrahedron)
from curvhess.refine import (FIXED, SMOOTH_BOUNDARY, Ellipsoid, MongePatch,
                             Sphere)
from curvhess.poly import Polynomial2D


def test_single_triangle_split():
    sub = loop_subdivide(single_triangle())
    assert sub.n_faces == 4
    assert sub.n_vertices == 6
    assert sub.n_edges == 9


def test_closed_mesh_counts_and_euler():
    for mesh in (tetrahedron(), icosahedron()):
        sub = loop_subdivide(mesh)
        assert sub.n_vertices == mesh.n_vertices + mesh.n_edges
        assert sub.n_faces == 4 * mesh.n_faces
        assert sub.euler_characteristic == mesh.euler_characteristic


def test_flat_mesh_stays_flat(jittered_grid):
    sub = loop_subdivide(jittered_grid)
    assert np.abs(sub.vertices[:, 2]).max() == 0.0


def test_fixed_boundary_rule(jittered_grid):
    mesh = jittered_grid
    sub = loop_subdivide(mesh, boundary_rule=FIXED)
    bdry = np.flatnonzero(mesh.boundary_vertices)
    assert np.array_equal(sub.vertices[bdry], mesh.vertices[bdry])
    # new boundary-edge vertices sit at the midpoints
    for e in np.flatnonzero(mesh.boundary_edges)[:5]:
        u, v = mesh.edges[e]
        mid = 0.5 * (mesh.vertices[u] + mesh.vertices[v])
        assert np.allclose(sub.vertices[mesh.n_vertices + e], mid)


def test_smooth_boundary_rule(small_annulus):
    mesh = small_annulus
    P, _ = loop_subdivision_operator(mesh, boundary_rule=SMOOTH_BOUNDARY)
    v = int(np.flatnonzero(mesh.boundary_vertices)[0])
    row = P[v].toarray().ravel()
    nz = np.flatnonzero(row)
    assert v in nz and len(nz) == 3
    assert abs(row[v] - 0.75) < 1e-15
    assert np.allclose(sorted(row[nz]), [0.125, 0.125, 0.75])


def test_interior_vertex_uses_loop_beta():
    mesh = icosphere(1)  # interior vertices of valence 5 and 6
    P, _ = loop_subdivision_operator(mesh)
    v = 0
    k = int((mesh.edges == v).any(axis=1).sum())
    c = 3.0 / 8.0 + 0.25 * np.cos(2.0 * np.pi / k)
    beta = (5.0 / 8.0 - c * c) / k
    row = P[v].toarray().ravel()
    assert abs(row[v] - (1 - k * beta)) < 1e-14
    others = np.flatnonzero(row)
    others = others[others != v]
    assert len(others) == k
    assert np.allclose(row[others], beta)


def test_prolongation_shape_and_positions(sphere3):
    P, faces = loop_subdivision_operator(sphere3)
    assert P.shape == (sphere3.n_vertices + sphere3.n_edges,
                       sphere3.n_vertices)
    sub = loop_subdivide(sphere3)
    assert np.allclose(P @ sphere3.vertices, sub.vertices)
    # rows are affine combinations
    assert np.abs(np.asarray(P.sum(axis=1)).ravel() - 1.0).max() < 1e-14


def test_regularity_bounded_on_structured_families():
    mesh = square_grid(8)
    prev = triangle_regularity(mesh).max_ratio
    for _ in range(3):
        mesh = loop_subdivide(mesh)
        cur = triangle_regularity(mesh).max_ratio
        assert cur <= 1.01 * prev
        prev = cur
    sph = Sphere(radius=1.0)
    mesh = icosphere(2)
    prev = triangle_regularity(mesh).max_ratio
    for _ in range(3):
        mesh = project_to_surface(loop_subdivide(mesh), sph)
        cur = triangle_regularity(mesh).max_ratio
        assert cur <= 1.01 * prev
        prev = cur


def test_sphere_projection_idempotent_and_inscribed():
    sph = Sphere(radius=1.0)
    mesh = icosphere(1)
    for _ in range(3):
        mesh = project_to_surface(loop_subdivide(mesh), sph)
        r = np.linalg.norm(mesh.vertices, axis=1)
        assert np.abs(r - 1.0).max() <= 1e-10
    again = sph.project(mesh.vertices)
    assert np.abs(again - mesh.vertices).max() <= 1e-12


def test_monge_projection():
    surf = MongePatch.from_polynomial(Polynomial2D.parse("x^2"))
    out = surf.project(np.array([[0.5, 0.0, 0.1]]))
    assert np.allclose(out, [[0.5, 0.0, 0.25]])
    assert np.allclose(surf.project(out), out)


def test_monge_partial_self_check():
    surf = MongePatch.from_polynomial(Polynomial2D.parse("x^2 + 0.5*x*y"))
    rng = np.random.default_rng(3)
    x, y = rng.uniform(-1, 1, size=(2, 50))
    assert surf.self_check(x, y)


def test_ellipsoid_projection():
    ell = Ellipsoid(semi_axes=(2.0, 1.0, 0.5))
    rng = np.random.default_rng(4)
    pts = rng.uniform(-3, 3, size=(200, 3))
    proj = ell.project(pts)
    a2 = np.array(ell.semi_axes) ** 2
    resid = np.abs((proj ** 2 / a2).sum(axis=1) - 1.0)
    assert resid.max() <= 1e-10
    # idempotent, and points on the surface stay put
    assert np.abs(ell.project(proj) - proj).max() <= 1e-9
    on_surf = np.array([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert np.abs(ell.project(on_surf) - on_surf).max() <= 1e-12


def test_sphere_center_rejected():
    with pytest.raises(ProjectionDiverged):
        Sphere().project(np.zeros((1, 3)))


def test_parse_surface():
    s = parse_surface("sphere:2.5")
    assert isinstance(s, Sphere) and s.radius == 2.5
    e = parse_surface("ellipsoid:1,2,3")
    assert isinstance(e, Ellipsoid) and e.semi_axes == (1.0, 2.0, 3.0)
    m = parse_surface("monge:x^2+y^2")
    assert isinstance(m, MongePatch)
    assert m.z(1.0, 2.0) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        parse_surface("torus:1")
