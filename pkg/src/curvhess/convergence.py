"""Self-verifying convergence studies over refinement families.

Three problem families: forward energies against the smooth reference
on a Monge patch, sphere eigenvalues against the analytic biharmonic
value, and interpolation against the finest level of the same
discretization.  Coarse fields travel to the finest mesh through the
Loop prolongation weights (or stay put via vertex inheritance); the
transfer used is recorded in the result.
"""

from dataclasses import dataclass, field

import numpy as np

from .energy import CURVED_HESSIAN, build_energy, energy_value
from .meshgen import icosphere, monge_grid
from .mesh import build_mesh, geometry
from .refine import FIXED, loop_subdivision_operator, project_to_surface
from .reference import smooth_energy_monge
from .solve import min_with_fixed, smallest_eigs

LOOP_PROLONGATION = "loop-prolongation"
VERTEX_INHERITANCE = "vertex-inheritance"


@dataclass
class ConvergenceRecord:
    """Per-level (h, error) pairs with the fitted log-log slope."""

    problem: str
    strategy: str
    transfer: str
    mean_edge_lengths: list
    errors: list
    slope: float = field(init=False)

    def __post_init__(self):
        h = np.asarray(self.mean_edge_lengths)
        if not np.all(np.diff(h) < 0.0):
            raise ValueError("levels must be strictly decreasing in h")
        self.slope = fit_loglog_slope(self.mean_edge_lengths, self.errors)

    def rows(self):
        for i, (h, e) in enumerate(zip(self.mean_edge_lengths,
                                       self.errors)):
            yield i, h, e

    def save_csv(self, path):
        with open(path, "w") as fh:
            fh.write("level,h,error\n")
            for i, h, e in self.rows():
                fh.write(f"{i},{h:.17g},{e:.17g}\n")


def fit_loglog_slope(hs, errors):
    """Least-squares slope of log(error) against log(h)."""
    hs = np.asarray(hs, dtype=np.float64)
    errors = np.asarray(errors, dtype=np.float64)
    if np.any(errors <= 0.0):
        return float("nan")
    coef = np.polyfit(np.log(hs), np.log(errors), 1)
    return float(coef[0])


def refinement_ladder(base_mesh, levels, boundary_rule=FIXED, surface=None):
    """Meshes and prolongation operators of a Loop refinement family.

    Returns (meshes, prolongations): meshes[0] is the base,
    prolongations[i] maps fields from level i to level i+1.  With a
    surface, every level is projected back onto it (vertices stay
    inscribed); prolongation matrices are those of the unprojected
    subdivision either way.
    """
    meshes = [base_mesh]
    prolongations = []
    for _ in range(levels):
        P, new_faces = loop_subdivision_operator(meshes[-1], boundary_rule)
        refined = build_mesh(P @ meshes[-1].vertices, new_faces)
        if surface is not None:
            refined = project_to_surface(refined, surface)
        meshes.append(refined)
        prolongations.append(P)
    return meshes, prolongations


def l2_error(u, u_ref, B):
    d = u - u_ref
    return float(np.sqrt(d @ (B @ d)))


def forward_energy_study(surface, fld, levels=4, divisions=8, extent=1.0,
                         kind=CURVED_HESSIAN, exact_divisions=64):
    """|E_h(f) - E(f)| / E(f) on a Loop-refined, surface-projected Monge
    patch family; E(f) comes from the smooth quadrature reference.

    Returns (record, exact_value, quadrature_agreement) where the
    agreement is the relative gap between the degree-4 and degree-7
    reference quadratures.
    """
    ref = monge_grid(lambda x, y: surface.z(x, y), exact_divisions,
                     extent=extent)
    pts2d = np.array(ref.vertices[:, :2])
    e4 = smooth_energy_monge(surface, fld, pts2d, ref.faces, degree=4)
    e7 = smooth_energy_monge(surface, fld, pts2d, ref.faces, degree=7)
    agreement = abs(e4 - e7) / abs(e7)

    base = monge_grid(lambda x, y: surface.z(x, y), divisions,
                      extent=extent)
    meshes, _ = refinement_ladder(base, levels - 1, boundary_rule=FIXED,
                                  surface=surface)
    hs, errors = [], []
    for mesh in meshes:
        geom = geometry(mesh)
        op = build_energy(mesh, kind, geom)
        u = fld.f(mesh.vertices[:, 0], mesh.vertices[:, 1])
        eh = energy_value(op, u)
        hs.append(geom.mean_edge_length)
        errors.append(abs(eh - e7) / abs(e7))
    record = ConvergenceRecord(problem="forward_energy_error",
                               strategy="loop+project:monge",
                               transfer="none",
                               mean_edge_lengths=hs, errors=errors)
    return record, e7, agreement


SPHERE_BIHARMONIC_L1 = 4.0  # (l(l+1))^2 for l = 1 on the unit sphere


def sphere_eigenvalue_study(levels=(2, 3, 4, 5), kind=CURVED_HESSIAN):
    """Error of the first nonzero eigenvalue triplet of (Q, B) on the
    unit icosphere against the analytic value 4; one mesh per level."""
    hs, errors = [], []
    for level in levels:
        mesh = icosphere(level)
        geom = geometry(mesh)
        op = build_energy(mesh, kind, geom)
        eig = smallest_eigs(op, 4)
        cluster = eig.values[1:4]
        err = np.max(np.abs(cluster - SPHERE_BIHARMONIC_L1)) \
            / SPHERE_BIHARMONIC_L1
        hs.append(geom.mean_edge_length)
        errors.append(float(err))
    record = ConvergenceRecord(problem="eigenvalue_error",
                               strategy="icosphere:inscribed",
                               transfer="none",
                               mean_edge_lengths=hs, errors=errors)
    return record


def interpolation_self_study(base_mesh, indices, values, levels=4,
                             kind=CURVED_HESSIAN,
                             transfer=LOOP_PROLONGATION,
                             boundary_rule=FIXED, surface=None):
    """Interpolate fixed scattered constraints on every level of a Loop
    family and measure the L2 gap to the finest-level solution.

    Constraint vertices are base-mesh vertices, whose indices survive
    subdivision unchanged.
    """
    meshes, prolongations = refinement_ladder(base_mesh, levels,
                                              boundary_rule=boundary_rule,
                                              surface=surface)
    solutions = []
    for mesh in meshes:
        op = build_energy(mesh, kind)
        solutions.append(min_with_fixed(op, indices, values))
    finest = meshes[-1]
    B_fine = build_energy(finest, kind).B
    u_ref = solutions[-1]

    hs, errors = [], []
    for lev in range(levels):
        geom = geometry(meshes[lev])
        if transfer == LOOP_PROLONGATION:
            u = solutions[lev]
            for P in prolongations[lev:]:
                u = P @ u
            err = l2_error(u, u_ref, B_fine)
        elif transfer == VERTEX_INHERITANCE:
            nc = meshes[lev].n_vertices
            B_coarse = build_energy(meshes[lev], kind).B
            err = l2_error(solutions[lev], u_ref[:nc], B_coarse)
        else:
            raise ValueError(f"unknown transfer {transfer!r}")
        hs.append(geom.mean_edge_length)
        errors.append(err)
    return ConvergenceRecord(problem="bvp_self_convergence",
                             strategy=f"loop:{boundary_rule}",
                             transfer=transfer,
                             mean_edge_lengths=hs, errors=errors)
