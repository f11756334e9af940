"""Curved Hessian smoothness energy on triangle meshes.

Assembles the Crouzeix-Raviart one-form discretization of the
biharmonic smoothness energy with curvature correction, plus the
squared cotan Laplacian baseline, and applies them to scattered-data
interpolation, smoothing, fairing flow, and spectral analysis.
"""

from .convergence import (ConvergenceRecord, fit_loglog_slope,
                          forward_energy_study, interpolation_self_study,
                          refinement_ladder, sphere_eigenvalue_study)
from .crof import (CrofDofMap, assemble_B, assemble_cotan, assemble_D,
                   assemble_L, assemble_M, crof_dof_map)
from .curvature import AngleDefects, angle_defects, assemble_K
from .energy import (CURVED_HESSIAN, SQUARED_LAPLACIAN, EnergyOperator,
                     build_curved_hessian, build_energy,
                     build_squared_laplacian, energy_value)
from .errors import (ConstraintError, CurvhessError, DegenerateFace,
                     DimensionMismatch, InsufficientConstraints,
                     InvalidIndex, InvalidName, IoError, NoConvergence,
                     NonManifoldEdge, ParseError, ProjectionDiverged,
                     SolveFailure, UnsupportedElement)
from .fileio import (FieldExport, load_constraints_csv, load_field_csv,
                     load_matrix, load_mesh, save_field, save_matrix)
from .mesh import (GeometryCache, TriMesh, build_mesh, geometry,
                   triangle_regularity)
from .poly import Polynomial2D
from .refine import (Ellipsoid, MongePatch, Sphere, loop_subdivide,
                     loop_subdivision_operator, parse_surface,
                     project_to_surface)
from .reference import (FlatPair, MongeField, quadrature_oracle_flat_pair,
                        smooth_energy_monge, triangle_quadrature)
from .solve import (EigenResult, FlowResult, fairing_flow, min_with_fixed,
                    smallest_eigs, smooth)

__version__ = "0.1.0"
