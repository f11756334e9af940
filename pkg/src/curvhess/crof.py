"""Sparse assembly of the Crouzeix-Raviart one-form matrices.

Every edge carries two degrees of freedom: a form parallel to the edge
and one perpendicular to it, each modulated by the scalar
Crouzeix-Raviart hat of the edge.  The basis is tied to the global edge
orientation (low vertex index to high); inside a face whose traversal
runs against that orientation both forms flip sign, which surfaces as
the -1 factors on the reversed edge's entries below.

Assembly loops over faces in index order and accumulates triplets, so
matrices are reproducible bit for bit.  Mirror entries of symmetric
matrices are emitted from the same arithmetic, making A == A.T exact.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse


@dataclass(frozen=True)
class CrofDofMap:
    """Edge -> (parallel, perpendicular) DOF indices.

    DOFs interleave: parallel DOFs are even, perpendicular odd, so edge
    e owns indices 2e and 2e+1 and the total count is 2 * n_edges.
    """

    n_edges: int

    @property
    def n_dofs(self):
        return 2 * self.n_edges

    def parallel(self, e):
        return 2 * e

    def perpendicular(self, e):
        return 2 * e + 1


def crof_dof_map(mesh):
    return CrofDofMap(n_edges=mesh.n_edges)


def _face_local_arrays(mesh, geom):
    """Per-face quantities indexed by local edge / corner."""
    fe = mesh.face_edges
    fs = mesh.face_edge_signs.astype(np.float64)
    l = geom.face_corner_lengths
    ang = geom.corner_angles
    A = geom.double_areas
    return fe, fs, l, ang, A


def _pair_cross_triplets(fe, fs, pp, xval, c):
    """Triplet block for the edge pair meeting at corner c.

    e leaves corner c (local edge c), f enters it (local edge c+2).
    pp goes to the par/par and perp/perp slots, +xval to (e_perp, f_par)
    and -xval to (e_par, f_perp); mirror entries reuse the same values,
    which keeps the assembled matrix exactly symmetric.
    """
    e = fe[:, c]
    f = fe[:, (c + 2) % 3]
    s = fs[:, c] * fs[:, (c + 2) % 3]
    pp = pp * s
    xval = xval * s
    ep, eq = 2 * e, 2 * e + 1
    fp, fq = 2 * f, 2 * f + 1
    rows = np.concatenate([ep, fp, eq, fq, eq, fp, ep, fq])
    cols = np.concatenate([fp, ep, fq, eq, fp, eq, fq, ep])
    vals = np.concatenate([pp, pp, pp, pp, xval, xval, -xval, -xval])
    return rows, cols, vals


def assemble_L(mesh, geom, dofmap):
    """Covariant one-form Dirichlet matrix (m x m, symmetric PSD).

    Per face with double area A: each edge contributes 2/A on both of
    its diagonal DOFs; an edge pair meeting at a corner with angle t
    contributes (2/A) cos^2 t to the parallel/parallel and perp/perp
    couplings and 2 cos(t) / (l_e l_f) to the mixed ones.
    """
    fe, fs, l, ang, A = _face_local_arrays(mesh, geom)
    rows, cols, vals = [], [], []
    diag_val = 2.0 / A
    for a in range(3):
        dof = 2 * fe[:, a]
        rows.extend([dof, dof + 1])
        cols.extend([dof, dof + 1])
        vals.extend([diag_val, diag_val])
    for c in range(3):
        cosv = np.cos(ang[:, c])
        le = l[:, c]
        lf = l[:, (c + 2) % 3]
        pp = diag_val * cosv * cosv
        xval = 2.0 * cosv / (le * lf)
        r, cc, v = _pair_cross_triplets(fe, fs, pp, xval, c)
        rows.append(r)
        cols.append(cc)
        vals.append(v)
    m = dofmap.n_dofs
    return sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(m, m)).tocsr()


def assemble_M(mesh, geom, dofmap):
    """Diagonal one-form mass matrix: A / (6 l^2) per incident face,
    identically for the parallel and perpendicular DOF of each edge."""
    fe, fs, l, ang, A = _face_local_arrays(mesh, geom)
    diag = np.zeros(dofmap.n_dofs)
    for a in range(3):
        val = A / (6.0 * l[:, a] ** 2)
        np.add.at(diag, 2 * fe[:, a], val)
        np.add.at(diag, 2 * fe[:, a] + 1, val)
    return sparse.dia_matrix((diag[None, :], [0]),
                             shape=(dofmap.n_dofs, dofmap.n_dofs)).tocsr()


def assemble_D(mesh, geom, dofmap):
    """Differential matrix (m x n): pairs each one-form basis function
    with the exterior derivative of each vertex hat function.

    For the edge p->q with opposite corner r: the parallel DOF couples
    -+ A/(6 l^2) to (p, q); the perpendicular DOF couples the projected
    lengths -l_qr cos(t_q) / (6 l) and -l_rp cos(t_p) / (6 l) to (p, q)
    and 1/6 to r.  A reversed edge flips the whole block.
    """
    fe, fs, l, ang, A = _face_local_arrays(mesh, geom)
    faces = mesh.faces
    rows, cols, vals = [], [], []
    for a in range(3):
        p = faces[:, a]
        q = faces[:, (a + 1) % 3]
        r = faces[:, (a + 2) % 3]
        sgn = fs[:, a]
        dpar = 2 * fe[:, a]
        dperp = dpar + 1
        lpq = l[:, a]
        lqr = l[:, (a + 1) % 3]
        lrp = l[:, (a + 2) % 3]
        g = A / (6.0 * lpq ** 2)
        rows.extend([dpar, dpar])
        cols.extend([p, q])
        vals.extend([-g * sgn, g * sgn])
        rows.extend([dperp, dperp, dperp])
        cols.extend([p, q, r])
        vals.extend([
            -(lqr / (6.0 * lpq)) * np.cos(ang[:, (a + 1) % 3]) * sgn,
            -(lrp / (6.0 * lpq)) * np.cos(ang[:, a]) * sgn,
            np.full(len(p), 1.0 / 6.0) * sgn,
        ])
    return sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dofmap.n_dofs, mesh.n_vertices)).tocsr()


def assemble_B(mesh, geom):
    """Barycentric lumped vertex mass: one third of the incident face
    area per vertex (n x n diagonal, strictly positive)."""
    contrib = np.repeat(geom.double_areas / 6.0, 3)
    diag = np.bincount(mesh.faces.ravel(), weights=contrib,
                       minlength=mesh.n_vertices)
    n = mesh.n_vertices
    return sparse.dia_matrix((diag[None, :], [0]), shape=(n, n)).tocsr()


def assemble_cotan(mesh, geom):
    """Cotangent Laplacian (n x n, symmetric positive semi-definite):
    w_uv = (cot a + cot b) / 2 over the faces incident to edge uv,
    -w_uv off the diagonal and row sums on it."""
    faces = mesh.faces
    ang = geom.corner_angles
    rows, cols, vals = [], [], []
    for c in range(3):
        u = faces[:, (c + 1) % 3]
        v = faces[:, (c + 2) % 3]
        w = 0.5 / np.tan(ang[:, c])
        rows.extend([u, v, u, v])
        cols.extend([v, u, u, v])
        vals.extend([-w, -w, w, w])
    n = mesh.n_vertices
    return sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n)).tocsr()
