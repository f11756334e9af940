"""Quadratic smoothness energies on per-vertex scalar fields.

Two operators share one interface: the curved Hessian energy, composed
from the one-form matrices as Q = D^T M^-1 (L + K) M^-1 D, and the
squared cotangent Laplacian baseline Q = C^T B^-1 C whose zero Neumann
boundary behavior comes baked in.  Both store the vertex mass B so
callers can form L2 norms and data terms on the same mesh.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse

from .crof import (assemble_B, assemble_cotan, assemble_D, assemble_L,
                   assemble_M, crof_dof_map)
from .curvature import angle_defects, assemble_K
from .errors import DimensionMismatch
from .mesh import geometry

CURVED_HESSIAN = "curved_hessian"
SQUARED_LAPLACIAN = "squared_laplacian"


@dataclass(frozen=True)
class EnergyOperator:
    """Assembled quadratic form with its vertex mass and provenance.

    components keeps the assembly factors (L, M, D, K or the cotan
    Laplacian) for diagnostics, export, and the oracle tests.
    """

    kind: str
    Q: sparse.csr_matrix
    B: sparse.csr_matrix
    mesh: object
    components: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.Q.shape[0]


def _exact_symmetrize(Q):
    # (Q + Q^T) entries pair identical summands, so halving them yields
    # a bitwise-symmetric matrix.
    Qs = (Q + Q.T).tocsr()
    Qs.data *= 0.5
    return Qs


def build_curved_hessian(mesh, geom=None, include_curvature=True):
    """Assemble the curved Hessian energy operator for a mesh.

    include_curvature=False drops the K term (diagnostic use only; the
    two coincide wherever all angle defects vanish).
    """
    if geom is None:
        geom = geometry(mesh)
    dofmap = crof_dof_map(mesh)
    L = assemble_L(mesh, geom, dofmap)
    M = assemble_M(mesh, geom, dofmap)
    D = assemble_D(mesh, geom, dofmap)
    defects = angle_defects(mesh, geom)
    K = assemble_K(mesh, geom, defects, dofmap)
    B = assemble_B(mesh, geom)

    minv = 1.0 / M.diagonal()
    S = sparse.diags(minv) @ D  # M^-1 D, rows scaled entrywise
    core = (L + K) if include_curvature else L
    Q = _exact_symmetrize((S.T @ (core @ S)).tocsr())
    return EnergyOperator(kind=CURVED_HESSIAN, Q=Q, B=B, mesh=mesh,
                          components={"L": L, "M": M, "D": D, "K": K})


def build_squared_laplacian(mesh, geom=None):
    """Assemble the squared cotan Laplacian operator (mixed FEM with the
    lumped vertex mass)."""
    if geom is None:
        geom = geometry(mesh)
    C = assemble_cotan(mesh, geom)
    B = assemble_B(mesh, geom)
    binv = 1.0 / B.diagonal()
    Q = _exact_symmetrize((C.T @ (sparse.diags(binv) @ C)).tocsr())
    return EnergyOperator(kind=SQUARED_LAPLACIAN, Q=Q, B=B, mesh=mesh,
                          components={"L_cot": C})


def build_energy(mesh, kind, geom=None):
    if kind == CURVED_HESSIAN:
        return build_curved_hessian(mesh, geom)
    if kind == SQUARED_LAPLACIAN:
        return build_squared_laplacian(mesh, geom)
    raise ValueError(f"unknown energy kind {kind!r}")


def energy_value(op, u):
    """Evaluate the energy 1/2 u^T Q u of a per-vertex field."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (op.n,):
        raise DimensionMismatch(
            f"field has shape {u.shape}, operator expects ({op.n},)")
    return 0.5 * float(u @ (op.Q @ u))
