"""Parametric test meshes: grids, disks, annuli, spheres, tori, cones.

These generators back the convergence harness and the test suite; the
CLI works on user meshes loaded from files.
"""

import numpy as np

from .mesh import build_mesh

GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0


def single_triangle():
    return build_mesh([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
                      [[0, 1, 2]])


def equilateral_triangle(side=1.0):
    h = side * np.sqrt(3.0) / 2.0
    return build_mesh([[0.0, 0.0, 0.0], [side, 0.0, 0.0],
                       [side / 2.0, h, 0.0]], [[0, 1, 2]])


def equilateral_pair(side=1.0):
    """Two congruent equilateral triangles glued along one edge."""
    h = side * np.sqrt(3.0) / 2.0
    verts = [[0.0, 0.0, 0.0], [side, 0.0, 0.0],
             [side / 2.0, h, 0.0], [side / 2.0, -h, 0.0]]
    return build_mesh(verts, [[0, 1, 2], [1, 0, 3]])


def tetrahedron(edge=1.0):
    """Regular tetrahedron with the given edge length."""
    v = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0],
                  [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
    v *= edge / np.sqrt(8.0)
    faces = [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]
    return build_mesh(v, faces)


def icosahedron(radius=1.0):
    """Regular icosahedron inscribed in a sphere of the given radius."""
    a, b = 1.0, GOLDEN
    v = np.array([
        [-a, b, 0], [a, b, 0], [-a, -b, 0], [a, -b, 0],
        [0, -a, b], [0, a, b], [0, -a, -b], [0, a, -b],
        [b, 0, -a], [b, 0, a], [-b, 0, -a], [-b, 0, a],
    ], dtype=float)
    v *= radius / np.linalg.norm(v[0])
    faces = [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
    return build_mesh(v, faces)


def icosphere(level, radius=1.0):
    """Icosahedral sphere mesh: `level` midpoint subdivisions, every
    vertex pushed onto the sphere (vertices inscribed at all levels)."""
    mesh = icosahedron(radius)
    verts = np.array(mesh.vertices)
    faces = np.array(mesh.faces)
    for _ in range(level):
        verts, faces = _midpoint_subdivide(verts, faces)
        verts *= radius / np.linalg.norm(verts, axis=1)[:, None]
    return build_mesh(verts, faces)


def _midpoint_subdivide(verts, faces):
    n = len(verts)
    pairs = np.sort(np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]],
                                    faces[:, [2, 0]]]), axis=1)
    codes = pairs[:, 0] * n + pairs[:, 1]
    uniq, inv = np.unique(codes, return_inverse=True)
    mids = 0.5 * (verts[uniq // n] + verts[uniq % n])
    new_verts = np.vstack([verts, mids])
    eid = inv.reshape(3, -1).T + n  # columns: mid(01), mid(12), mid(20)
    i, j, k = faces[:, 0], faces[:, 1], faces[:, 2]
    m01, m12, m20 = eid[:, 0], eid[:, 1], eid[:, 2]
    new_faces = np.concatenate([
        np.column_stack([i, m01, m20]),
        np.column_stack([j, m12, m01]),
        np.column_stack([k, m20, m12]),
        np.column_stack([m01, m12, m20]),
    ])
    return new_verts, new_faces


def square_grid(divisions, extent=1.0, jitter=0.0, seed=0):
    """Uniform triangulated grid on [-extent, extent]^2 (z = 0).

    With jitter > 0, interior vertices are displaced in-plane by a
    seeded uniform perturbation of at most `jitter` times the spacing,
    producing a non-uniform but valid flat triangulation.
    """
    m = divisions + 1
    xs = np.linspace(-extent, extent, m)
    xx, yy = np.meshgrid(xs, xs, indexing="ij")
    verts = np.column_stack([xx.ravel(), yy.ravel(), np.zeros(m * m)])
    if jitter > 0.0:
        rng = np.random.default_rng(seed)
        spacing = 2.0 * extent / divisions
        interior = ((xx.ravel() > xs[0]) & (xx.ravel() < xs[-1])
                    & (yy.ravel() > xs[0]) & (yy.ravel() < xs[-1]))
        delta = rng.uniform(-jitter, jitter, size=(m * m, 2)) * spacing
        verts[interior, 0] += delta[interior, 0]
        verts[interior, 1] += delta[interior, 1]
    faces = []
    for i in range(divisions):
        for j in range(divisions):
            v00 = i * m + j
            v10 = (i + 1) * m + j
            v01 = i * m + j + 1
            v11 = (i + 1) * m + j + 1
            faces.append([v00, v10, v11])
            faces.append([v00, v11, v01])
    return build_mesh(verts, faces)


def _ring_band_faces(inner, outer, offset=0.0):
    """Triangulate the band between two concentric vertex rings.

    inner/outer are index arrays ordered counterclockwise; the band is
    stitched by always advancing the ring whose next vertex comes first
    in angle.  `offset` rotates the notion of angle for the inner ring.
    """
    ni, no = len(inner), len(outer)
    faces = []
    ai = np.arange(ni + 1) / ni * 2.0 * np.pi + offset
    ao = np.arange(no + 1) / no * 2.0 * np.pi
    ii = io = 0
    while ii < ni or io < no:
        take_outer = io < no and (ii == ni or ao[io + 1] <= ai[ii + 1])
        if take_outer:
            faces.append([outer[io % no], outer[(io + 1) % no],
                          inner[ii % ni]])
            io += 1
        else:
            faces.append([inner[ii % ni], outer[io % no],
                          inner[(ii + 1) % ni]])
            ii += 1
    return faces


def polar_disk(rings, radius=1.0):
    """Flat disk from concentric rings (ring j holds 6j vertices).

    rings = 25 gives ~1950 vertices with near-equilateral triangles.
    """
    verts = [[0.0, 0.0, 0.0]]
    ring_idx = [[0]]
    for j in range(1, rings + 1):
        nj = 6 * j
        ang = np.arange(nj) / nj * 2.0 * np.pi
        r = radius * j / rings
        start = len(verts)
        verts.extend(np.column_stack([r * np.cos(ang), r * np.sin(ang),
                                      np.zeros(nj)]).tolist())
        ring_idx.append(list(range(start, start + nj)))
    faces = []
    for k in range(6):
        faces.append([0, ring_idx[1][k], ring_idx[1][(k + 1) % 6]])
    for j in range(1, rings):
        faces.extend(_ring_band_faces(ring_idx[j], ring_idx[j + 1]))
    return build_mesh(verts, faces)


def annulus(inner_rings, outer_rings, ring_step=None, z=0.0):
    """Flat annulus between radii inner_rings*step and outer_rings*step.

    Ring j (inner_rings <= j <= outer_rings) holds 6j vertices at radius
    j*step, which keeps triangles near-equilateral across the band.
    """
    if ring_step is None:
        ring_step = 1.0 / outer_rings
    verts = []
    ring_idx = []
    for j in range(inner_rings, outer_rings + 1):
        nj = 6 * j
        ang = np.arange(nj) / nj * 2.0 * np.pi
        r = ring_step * j
        start = len(verts)
        verts.extend(np.column_stack([r * np.cos(ang), r * np.sin(ang),
                                      np.full(nj, z)]).tolist())
        ring_idx.append(list(range(start, start + nj)))
    faces = []
    for b in range(len(ring_idx) - 1):
        faces.extend(_ring_band_faces(ring_idx[b], ring_idx[b + 1]))
    return build_mesh(verts, faces)


def torus(major_segments=48, minor_segments=24, major_radius=1.0,
          minor_radius=0.35):
    """Torus of revolution, consistently oriented, genus 1."""
    u = np.arange(major_segments) / major_segments * 2.0 * np.pi
    v = np.arange(minor_segments) / minor_segments * 2.0 * np.pi
    uu, vv = np.meshgrid(u, v, indexing="ij")
    r = major_radius + minor_radius * np.cos(vv)
    verts = np.column_stack([(r * np.cos(uu)).ravel(),
                             (r * np.sin(uu)).ravel(),
                             (minor_radius * np.sin(vv)).ravel()])
    faces = []
    for i in range(major_segments):
        for j in range(minor_segments):
            a = i * minor_segments + j
            b = ((i + 1) % major_segments) * minor_segments + j
            a1 = i * minor_segments + (j + 1) % minor_segments
            b1 = ((i + 1) % major_segments) * minor_segments \
                + (j + 1) % minor_segments
            faces.append([a, b, b1])
            faces.append([a, b1, a1])
    return build_mesh(verts, faces)


def cone_fan(n_triangles=6, tip_angle=np.pi / 4):
    """Closed umbrella: unit radial edges around an interior apex, each
    triangle subtending `tip_angle` at the apex.  The apex angle sum is
    n_triangles * tip_angle, so the apex carries all the curvature."""
    chord = 2.0 * np.sin(tip_angle / 2.0)
    rho = chord / (2.0 * np.sin(np.pi / n_triangles))
    if rho >= 1.0:
        raise ValueError("fan cannot close with unit radial edges")
    h = np.sqrt(1.0 - rho * rho)
    ang = np.arange(n_triangles) / n_triangles * 2.0 * np.pi
    verts = [[0.0, 0.0, 0.0]]
    verts.extend(np.column_stack([rho * np.cos(ang), rho * np.sin(ang),
                                  np.full(n_triangles, h)]).tolist())
    faces = [[0, 1 + k, 1 + (k + 1) % n_triangles]
             for k in range(n_triangles)]
    return build_mesh(verts, faces)


def open_fan(n_triangles=4, tip_angle=np.pi / 3):
    """Open (non-closing) fan of unit isoceles triangles; every vertex
    lies on the boundary, so all angle defects are zeroed."""
    chord = 2.0 * np.sin(tip_angle / 2.0)
    rho = min(0.95, chord / (2.0 * np.sin(np.pi / (n_triangles + 2))))
    h = np.sqrt(max(1.0 - rho * rho, 0.0))
    span = 2.0 * np.arcsin(chord / (2.0 * rho))
    ang = np.arange(n_triangles + 1) * span
    verts = [[0.0, 0.0, 0.0]]
    verts.extend(np.column_stack([rho * np.cos(ang), rho * np.sin(ang),
                                  np.full(n_triangles + 1, h)]).tolist())
    faces = [[0, 1 + k, 2 + k] for k in range(n_triangles)]
    return build_mesh(verts, faces)


def monge_grid(z_func, divisions, extent=1.0, jitter=0.0, seed=0):
    """Grid over [-extent, extent]^2 lifted onto the graph z = z(x, y)."""
    flat = square_grid(divisions, extent=extent, jitter=jitter, seed=seed)
    verts = np.array(flat.vertices)
    verts[:, 2] = z_func(verts[:, 0], verts[:, 1])
    return build_mesh(verts, flat.faces)
