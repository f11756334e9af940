"""Discrete Gaussian curvature (angle defects) and the curvature matrix.

The curvature of a mesh concentrates at vertices; the integrated value
at an interior vertex is its angle defect.  Boundary vertices get a
defect of zero: a mesh boundary admits no well-defined curvature, and
zero picks the most developable extension, consistent with the
as-linear-as-possible behavior of the energy.  Vertex contributions are
split over incident faces by tip angle.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .crof import _face_local_arrays, _pair_cross_triplets


@dataclass(frozen=True)
class AngleDefects:
    """Per-vertex integrated curvature and raw angle sums."""

    defects: np.ndarray
    angle_sums: np.ndarray

    def __post_init__(self):
        self.defects.flags.writeable = False
        self.angle_sums.flags.writeable = False


def angle_defects(mesh, geom):
    """2*pi minus the incident angle sum at interior vertices, exactly
    zero at boundary vertices."""
    defects = 2.0 * np.pi - geom.vertex_angle_sums
    defects[mesh.boundary_vertices] = 0.0
    # Vertices in no face have no defined defect; zero keeps them inert.
    defects[geom.vertex_angle_sums == 0.0] = 0.0
    return AngleDefects(defects=defects, angle_sums=geom.vertex_angle_sums)


def assemble_K(mesh, geom, defects, dofmap):
    """Curvature correction matrix (m x m, symmetric).

    Each face sees the weighted defect c_v = (tip angle / angle sum) *
    defect of its three corners.  Diagonal entries take the face total
    divided by the squared edge length; a pair of edges meeting at a
    corner takes (face total - 2 c_corner), scaled by cos or sin of the
    corner angle over the product of the edge lengths.
    """
    fe, fs, l, ang, A = _face_local_arrays(mesh, geom)
    ratio = np.zeros(mesh.n_vertices)
    nz = defects.angle_sums > 0.0
    ratio[nz] = defects.defects[nz] / defects.angle_sums[nz]
    cw = ang * ratio[mesh.faces]  # (F, 3) weighted defect per corner
    total = cw.sum(axis=1)

    rows, cols, vals = [], [], []
    for a in range(3):
        dof = 2 * fe[:, a]
        val = total / l[:, a] ** 2
        rows.extend([dof, dof + 1])
        cols.extend([dof, dof + 1])
        vals.extend([val, val])
    for c in range(3):
        bracket = total - 2.0 * cw[:, c]
        le = l[:, c]
        lf = l[:, (c + 2) % 3]
        pp = np.cos(ang[:, c]) / (le * lf) * bracket
        xval = np.sin(ang[:, c]) / (le * lf) * bracket
        r, cc, v = _pair_cross_triplets(fe, fs, pp, xval, c)
        rows.append(r)
        cols.append(cc)
        vals.append(v)
    m = dofmap.n_dofs
    return sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(m, m)).tocsr()
