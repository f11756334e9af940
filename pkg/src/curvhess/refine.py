"""Loop subdivision and projection onto analytic smooth surfaces.

Subdivision is exposed both as a mesh-to-mesh operation and as the
sparse prolongation matrix behind it, so scalar fields can be carried
between refinement levels by exactly the weights that move the
geometry.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .errors import ProjectionDiverged
from .mesh import build_mesh
from .poly import Polynomial2D

FIXED = "fixed"
SMOOTH_BOUNDARY = "smooth_boundary_curve"


def _loop_beta(valence):
    # Loop's original vertex weight
    c = 3.0 / 8.0 + 0.25 * np.cos(2.0 * np.pi / valence)
    return (5.0 / 8.0 - c * c) / valence


def loop_subdivision_operator(mesh, boundary_rule=FIXED):
    """Prolongation matrix P and face array of one Loop subdivision.

    new_positions = P @ old_positions; edge e becomes vertex
    n_vertices + e.  boundary_rule "fixed" keeps boundary vertices in
    place, "smooth_boundary_curve" applies the cubic spline boundary
    stencil (1/8, 3/4, 1/8).
    """
    n = mesh.n_vertices
    edges = mesh.edges
    ne = mesh.n_edges
    rows, cols, vals = [], [], []

    # --- new edge vertices ---
    # opposite corners per edge from the face list
    opp = [[] for _ in range(ne)]
    for f in range(mesh.n_faces):
        for a in range(3):
            e = mesh.face_edges[f, a]
            opp[e].append(mesh.faces[f, (a + 2) % 3])
    for e in range(ne):
        u, v = edges[e]
        if mesh.boundary_edges[e]:
            rows.extend([n + e, n + e])
            cols.extend([u, v])
            vals.extend([0.5, 0.5])
        else:
            c, d = opp[e]
            rows.extend([n + e] * 4)
            cols.extend([u, v, c, d])
            vals.extend([0.375, 0.375, 0.125, 0.125])

    # --- repositioned old vertices ---
    neighbors = [[] for _ in range(n)]
    for u, v in edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    boundary_nbrs = [[] for _ in range(n)]
    for e in np.flatnonzero(mesh.boundary_edges):
        u, v = edges[e]
        boundary_nbrs[u].append(v)
        boundary_nbrs[v].append(u)

    for v in range(n):
        if mesh.boundary_vertices[v]:
            bn = boundary_nbrs[v]
            if boundary_rule == SMOOTH_BOUNDARY and len(bn) == 2:
                rows.extend([v, v, v])
                cols.extend([v, bn[0], bn[1]])
                vals.extend([0.75, 0.125, 0.125])
            else:
                rows.append(v)
                cols.append(v)
                vals.append(1.0)
        else:
            k = len(neighbors[v])
            beta = _loop_beta(k)
            rows.append(v)
            cols.append(v)
            vals.append(1.0 - k * beta)
            rows.extend([v] * k)
            cols.extend(neighbors[v])
            vals.extend([beta] * k)

    P = sparse.coo_matrix((vals, (rows, cols)), shape=(n + ne, n)).tocsr()

    i, j, k = mesh.faces[:, 0], mesh.faces[:, 1], mesh.faces[:, 2]
    m01 = n + mesh.face_edges[:, 0]
    m12 = n + mesh.face_edges[:, 1]
    m20 = n + mesh.face_edges[:, 2]
    new_faces = np.concatenate([
        np.column_stack([i, m01, m20]),
        np.column_stack([j, m12, m01]),
        np.column_stack([k, m20, m12]),
        np.column_stack([m01, m12, m20]),
    ])
    return P, new_faces


def loop_subdivide(mesh, boundary_rule=FIXED):
    """One level of Loop subdivision (1-to-4 face split)."""
    P, new_faces = loop_subdivision_operator(mesh, boundary_rule)
    return build_mesh(P @ mesh.vertices, new_faces)


# ---------------------------------------------------------------------------
# analytic smooth surfaces


@dataclass(frozen=True)
class Sphere:
    center: tuple = (0.0, 0.0, 0.0)
    radius: float = 1.0

    def project(self, points):
        p = np.asarray(points, dtype=np.float64) - self.center
        norms = np.linalg.norm(p, axis=1, keepdims=True)
        if (norms == 0.0).any():
            raise ProjectionDiverged("point at the sphere center")
        return self.center + p * (self.radius / norms)


@dataclass(frozen=True)
class Ellipsoid:
    semi_axes: tuple = (1.0, 1.0, 1.0)

    def project(self, points, tol=1e-12):
        """Closest point on the ellipsoid via the Lagrange parameter t
        in x_i = p_i a_i^2 / (a_i^2 + t).

        The residual f(t) = sum (p_i a_i / (a_i^2 + t))^2 - 1 is
        strictly decreasing on the branch t > -min(a_i^2), so the root
        is bracketed and bisected, then Newton-polished.
        """
        p = np.asarray(points, dtype=np.float64)
        a2 = np.asarray(self.semi_axes, dtype=np.float64) ** 2

        def residual(t):
            with np.errstate(divide="ignore", over="ignore"):
                return ((p * a2 / (a2 + t[:, None])) ** 2
                        / a2).sum(axis=1) - 1.0

        lo = np.full(len(p), -a2.min() * (1.0 - 1e-14))
        hi = np.full(len(p), a2.max() + np.abs(p).max() * np.sqrt(a2.max()))
        for _ in range(64):
            bad = residual(hi) > 0.0
            if not bad.any():
                break
            hi[bad] *= 2.0
        else:
            raise ProjectionDiverged("no ellipsoid parameter bracket")
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            pos = residual(mid) > 0.0
            lo = np.where(pos, mid, lo)
            hi = np.where(pos, hi, mid)
        t = 0.5 * (lo + hi)
        for _ in range(3):  # Newton polish inside the bracket
            denom = a2 + t[:, None]
            f = ((p * a2 / denom) ** 2 / a2).sum(axis=1) - 1.0
            df = (-2.0 * (p ** 2) * a2 / denom ** 3).sum(axis=1)
            step = np.where(df != 0.0, f / df, 0.0)
            t = t - step
        out = p * a2 / (a2 + t[:, None])
        resid = np.abs((out ** 2 / a2).sum(axis=1) - 1.0)
        if resid.max() > 1e-9:
            raise ProjectionDiverged("ellipsoid projection stalled")
        return out


@dataclass(frozen=True)
class MongePatch:
    """Graph surface (x, y, z(x, y)) with analytic partials of z."""

    z: object
    zx: object
    zy: object
    zxx: object
    zxy: object
    zyy: object

    @classmethod
    def from_polynomial(cls, p):
        px, py = p.diff("x"), p.diff("y")
        return cls(z=p, zx=px, zy=py, zxx=px.diff("x"), zxy=px.diff("y"),
                   zyy=py.diff("y"))

    def project(self, points):
        p = np.array(points, dtype=np.float64)
        p[:, 2] = self.z(p[:, 0], p[:, 1])
        return p

    def gaussian_curvature(self, x, y):
        w2 = 1.0 + self.zx(x, y) ** 2 + self.zy(x, y) ** 2
        return (self.zxx(x, y) * self.zyy(x, y)
                - self.zxy(x, y) ** 2) / w2 ** 2

    def self_check(self, x, y, h=1e-5, tol=1e-6):
        """Partials consistent with z by central differences."""
        zx_fd = (self.z(x + h, y) - self.z(x - h, y)) / (2 * h)
        zy_fd = (self.z(x, y + h) - self.z(x, y - h)) / (2 * h)
        return (np.max(np.abs(zx_fd - self.zx(x, y))) < tol
                and np.max(np.abs(zy_fd - self.zy(x, y))) < tol)


def parse_surface(spec):
    """Parse a compact surface spec: "sphere:R", "ellipsoid:a,b,c", or
    "monge:<polynomial in x, y>"."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "sphere":
        return Sphere(radius=float(rest or 1.0))
    if kind == "ellipsoid":
        axes = tuple(float(t) for t in rest.split(","))
        if len(axes) != 3:
            raise ValueError("ellipsoid spec needs three semi-axes")
        return Ellipsoid(semi_axes=axes)
    if kind == "monge":
        return MongePatch.from_polynomial(Polynomial2D.parse(rest))
    raise ValueError(f"unknown surface kind {kind!r}")


def project_to_surface(mesh, surface):
    """Replace vertex positions by their closest points on the surface."""
    return build_mesh(surface.project(mesh.vertices), mesh.faces)
