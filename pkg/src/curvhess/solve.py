"""Constrained minimization, smoothing, fairing flow, and eigenanalysis.

Equality constraints are handled by variable elimination: constrained
entries are substituted and the symmetric reduced system is factored
directly.  The generalized eigensolver uses a dense reference path for
small problems and ARPACK shift-invert above that.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sparse
import scipy.sparse.linalg as spla

from .curvature import angle_defects
from .energy import CURVED_HESSIAN, build_energy
from .errors import (ConstraintError, DimensionMismatch,
                     InsufficientConstraints, NoConvergence, SolveFailure)
from .mesh import build_mesh, geometry

DENSE_EIG_CUTOFF = 3000
KERNEL_RELATIVE_TOL = 1e-8


def check_constraints(mesh, indices, values):
    indices = np.asarray(indices, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if indices.shape != values.shape or indices.ndim != 1:
        raise ConstraintError("constraints must be parallel 1-d arrays")
    if len(indices) == 0:
        raise InsufficientConstraints("no constraints given")
    if len(np.unique(indices)) != len(indices):
        raise ConstraintError("duplicate constrained vertex")
    if indices.min() < 0 or indices.max() >= mesh.n_vertices:
        raise ConstraintError("constrained vertex out of range")
    return indices, values


def _operator_scale(op):
    qmax = np.abs(op.Q.data).max() if op.Q.nnz else 0.0
    bmax = op.B.diagonal().max()
    return qmax / bmax


def _factor(A, context):
    try:
        return spla.splu(A.tocsc())
    except RuntimeError as exc:
        if "singular" in str(exc).lower():
            raise InsufficientConstraints(
                f"{context}: reduced system is singular") from exc
        raise SolveFailure(f"{context}: {exc}") from exc


def _smallest_singular_estimate(lu, n, iters=6, seed=0):
    """Inverse power iteration on the factored matrix: 1 / |A^-1 x|
    after normalization approximates the smallest singular value."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    sigma = np.inf
    for _ in range(iters):
        y = lu.solve(x)
        ny = np.linalg.norm(y)
        if not np.isfinite(ny) or ny == 0.0:
            return 0.0
        sigma = 1.0 / ny
        x = y / ny
    return sigma


def min_with_fixed(op, indices, values):
    """Minimize 1/2 u^T Q u subject to u[indices] = values.

    A curved Hessian on a mesh with boundary needs at least three
    constraints (linear functions span its null space there); any energy
    needs at least one.  Singular reduced systems raise
    InsufficientConstraints.
    """
    indices, values = check_constraints(op.mesh, indices, values)
    need = 3 if (op.kind == CURVED_HESSIAN and op.mesh.has_boundary) else 1
    if len(indices) < need:
        raise InsufficientConstraints(
            f"{op.kind} on this mesh needs at least {need} constrained "
            f"vertices, got {len(indices)}")

    n = op.n
    u = np.zeros(n)
    u[indices] = values
    free = np.setdiff1d(np.arange(n), indices)
    if len(free) == 0:
        return u

    Q = op.Q.tocsr()
    Qff = Q[free][:, free]
    rhs = -(Q[free][:, indices] @ values)
    lu = _factor(Qff, "min_with_fixed")

    # A factorable-but-singular reduced system (e.g. three collinear
    # interpolation points) shows up as a machine-level smallest
    # singular value; legitimate fine-mesh systems sit many orders
    # above 1e-12 * |Q|.
    qmax = np.abs(Q.data).max() if Q.nnz else 1.0
    sigma_min = _smallest_singular_estimate(lu, len(free))
    if sigma_min <= 1e-12 * qmax:
        raise InsufficientConstraints(
            "reduced system numerically singular: the constraints do not "
            "pin the null space of the energy")

    uf = lu.solve(rhs)
    if not np.all(np.isfinite(uf)):
        raise SolveFailure("non-finite solution from factorization")
    resid = np.linalg.norm(Qff @ uf - rhs)
    if resid > 1e-8 * qmax * max(1.0, np.linalg.norm(uf)):
        raise SolveFailure(f"solve residual too large ({resid:.3e})")
    u[free] = uf
    return u


def smooth(op, f, alpha):
    """Solve the data-fidelity smoothing problem
    (Q + alpha B) u = alpha B f with B-weighted data term."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (op.n,):
        raise DimensionMismatch(
            f"field has shape {f.shape}, operator expects ({op.n},)")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    A = (op.Q + alpha * op.B).tocsc()
    lu = _factor(A, "smooth")
    u = lu.solve(alpha * (op.B @ f))
    if not np.all(np.isfinite(u)):
        raise SolveFailure("non-finite smoothing solution")
    return u


@dataclass(frozen=True)
class FlowResult:
    """Final vertex positions of a fairing flow plus the per-step angle
    defects (index 0 is the input mesh) for inspection."""

    positions: np.ndarray
    defects_per_step: list
    steps_completed: int
    aborted: bool


def fairing_flow(mesh, alpha, steps, kind=CURVED_HESSIAN):
    """Repeated coordinate smoothing: each step rebuilds the energy on
    the current mesh and smooths x, y, z independently.

    If a step collapses a face, the flow stops early and reports the
    steps that completed.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    current = mesh
    defects = [angle_defects(current, geometry(current)).defects.copy()]
    done = 0
    aborted = False
    for _ in range(steps):
        op = build_energy(current, kind)
        new_pos = np.column_stack([
            smooth(op, current.vertices[:, c], alpha) for c in range(3)])
        try:
            current = build_mesh(new_pos, current.faces)
        except Exception:
            aborted = True
            break
        defects.append(
            angle_defects(current, geometry(current)).defects.copy())
        done += 1
    return FlowResult(positions=np.array(current.vertices),
                      defects_per_step=defects, steps_completed=done,
                      aborted=aborted)


@dataclass(frozen=True)
class EigenResult:
    """k smallest generalized eigenpairs of (Q, B), ascending,
    eigenvectors B-orthonormal (columns)."""

    values: np.ndarray
    vectors: np.ndarray
    kernel_tol: float

    @property
    def n_zero(self):
        return int(np.sum(self.values < self.kernel_tol))


def smallest_eigs(op, k, method="auto"):
    """k smallest eigenpairs of Q x = mu B x.

    method "dense" forces the LAPACK reference path, "shift-invert" the
    ARPACK path; "auto" picks by problem size (dense up to 3000).
    """
    n = op.n
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    scale = _operator_scale(op)
    if method == "auto":
        method = "dense" if n <= DENSE_EIG_CUTOFF else "shift-invert"

    if method == "dense":
        Qd = op.Q.toarray()
        Bd = op.B.toarray()
        vals, vecs = scipy.linalg.eigh(Qd, Bd, subset_by_index=[0, k - 1])
    elif method == "shift-invert":
        sigma = -1e-8 * scale
        try:
            vals, vecs = spla.eigsh(op.Q, k=k, M=op.B, sigma=sigma,
                                    which="LM")
        except spla.ArpackNoConvergence as exc:
            raise NoConvergence(f"eigensolver: {exc}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    else:
        raise ValueError(f"unknown method {method!r}")

    return EigenResult(values=vals, vectors=vecs,
                       kernel_tol=KERNEL_RELATIVE_TOL * scale)
