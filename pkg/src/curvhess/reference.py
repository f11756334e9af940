"""Independent reference computations: quadrature oracles and smooth
reference energies on Monge patches.

Nothing in here reuses the closed-form assembly: basis one-forms are
constructed explicitly from 2D coordinates and integrated numerically,
and smooth energies come from the fundamental forms of a graph surface.
This is what the assembly is validated against.
"""

from dataclasses import dataclass

import numpy as np

# Dunavant quadrature on the triangle: barycentric points and weights
# normalized to sum to 1 (multiply by the triangle area).

_D4_GROUPS = [
    (0.223381589678011, 0.108103018168070, 0.445948490915965),
    (0.109951743655322, 0.816847572980459, 0.091576213509771),
]

_D7_CENTER = -0.149570044467670
_D7_GROUPS = [
    (0.175615257433204, 0.479308067841923, 0.260345966079038),
    (0.053347235608839, 0.869739794195568, 0.065130102902216),
]
_D7_G6 = (0.077113760890257,
          (0.638444188569809, 0.312865496004875, 0.048690315425316))


def _perms3(a, b, c):
    return [(a, b, c), (b, c, a), (c, a, b)]


def triangle_quadrature(degree):
    """(weights, barycentric points) of a rule exact to the degree."""
    pts, wts = [], []
    if degree <= 4:
        for w, a, b in _D4_GROUPS:
            for p in _perms3(a, b, b):
                pts.append(p)
                wts.append(w)
    elif degree <= 7:
        pts.append((1 / 3, 1 / 3, 1 / 3))
        wts.append(_D7_CENTER)
        for w, a, b in _D7_GROUPS:
            for p in _perms3(a, b, b):
                pts.append(p)
                wts.append(w)
        w, (a, b, c) = _D7_G6
        for p in _perms3(a, b, c) + _perms3(a, c, b):
            pts.append(p)
            wts.append(w)
    else:
        raise ValueError("no rule beyond degree 7")
    return np.array(wts), np.array(pts)


@dataclass(frozen=True)
class FlatPair:
    """Two triangles sharing edge (0, 1), unfolded in the plane.

    points: (4, 2); faces (0, 1, 2) above and (1, 0, 3) below, both
    counterclockwise.  Also usable with a single face for one-triangle
    checks.
    """

    points: np.ndarray
    faces: np.ndarray

    @classmethod
    def random(cls, rng, single=False):
        base = rng.uniform(0.6, 1.8)
        top = np.array([rng.uniform(-0.5, base + 0.5),
                        rng.uniform(0.35, 1.6)])
        bot = np.array([rng.uniform(-0.5, base + 0.5),
                        -rng.uniform(0.35, 1.6)])
        pts = np.array([[0.0, 0.0], [base, 0.0], top, bot])
        faces = np.array([[0, 1, 2]] if single else [[0, 1, 2], [1, 0, 3]])
        return cls(points=pts, faces=faces)

    def embed3d(self):
        z = np.zeros((len(self.points), 1))
        return np.hstack([self.points, z])

    def edges(self):
        """Unique edges as (low, high) pairs, lexicographic; mirrors the
        global orientation convention of the mesh builder."""
        pairs = set()
        for f in self.faces:
            for a in range(3):
                u, v = f[a], f[(a + 1) % 3]
                pairs.add((min(u, v), max(u, v)))
        return sorted(pairs)


def _rot90(v):
    return np.array([-v[1], v[0]])


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _crof_basis(points, edge):
    """Constant one-form pair of a globally oriented edge in 2D.

    The parallel form pairs to 1 with the full edge vector, the
    perpendicular form to 1 with its counterclockwise rotation.
    """
    t = points[edge[1]] - points[edge[0]]
    l2 = t @ t
    return t / l2, _rot90(t) / l2


def _hat_gradients(points, face):
    """Gradients of the three barycentric hats of a 2D triangle."""
    p = points[list(face)]
    area2 = _cross2(p[1] - p[0], p[2] - p[0])
    grads = np.array([_rot90(p[(c + 2) % 3] - p[(c + 1) % 3]) / area2
                      for c in range(3)])
    return grads, area2


def _cr_hat_value(bary, opp):
    # scalar Crouzeix-Raviart hat of an edge: 1 - 2 * lambda_opposite
    return 1.0 - 2.0 * bary[..., opp]


def quadrature_oracle_flat_pair(pair, degree=4):
    """Integrate the defining one-form integrals on an unfolded pair.

    Returns (L, M, D) as dense arrays over the pair's edge DOFs (two per
    edge, parallel then perpendicular) and vertices, using explicit 2D
    basis functions and Gauss quadrature; independent of the assembly
    closed forms, including the orientation sign rules.
    """
    points, faces = pair.points, pair.faces
    edges = pair.edges()
    ne, nv = len(edges), len(points)
    edge_index = {e: i for i, e in enumerate(edges)}
    omega = [_crof_basis(points, e) for e in edges]

    L = np.zeros((2 * ne, 2 * ne))
    M = np.zeros((2 * ne, 2 * ne))
    D = np.zeros((2 * ne, nv))
    wts, bary = triangle_quadrature(degree)

    for face in faces:
        grads, area2 = _hat_gradients(points, face)
        area = 0.5 * area2
        # local edge a: vertices (a, a+1), opposite corner a+2
        local = []
        for a in range(3):
            u, v = face[a], face[(a + 1) % 3]
            local.append((edge_index[(min(u, v), max(u, v))], (a + 2) % 3))
        for (ea, oa) in local:
            ba = _cr_hat_value(bary, oa)
            gba = -2.0 * grads[oa]  # gradient of the CR hat
            for (eb, ob) in local:
                bb = _cr_hat_value(bary, ob)
                gbb = -2.0 * grads[ob]
                gdot = gba @ gbb
                mass = area * float(wts @ (ba * bb))
                for s in range(2):      # parallel / perpendicular of a
                    for t in range(2):  # parallel / perpendicular of b
                        wdot = omega[ea][s] @ omega[eb][t]
                        L[2 * ea + s, 2 * eb + t] += area * gdot * wdot
                        M[2 * ea + s, 2 * eb + t] += mass * wdot
            ia = area * float(wts @ ba)  # integral of the CR hat
            for c in range(3):
                for s in range(2):
                    D[2 * ea + s, face[c]] += ia * (omega[ea][s] @ grads[c])
    return L, M, D


def evaluate_crof_form(points2d, faces, edges, coeffs, bary):
    """Pointwise values of a CROF one-form on a flat 2D mesh.

    Returns (F, q, 2) covector values at the barycentric points of each
    face.  Used to compare discrete forms against smooth ones.
    """
    edge_index = {(int(e[0]), int(e[1])): i for i, e in enumerate(edges)}
    out = np.zeros((len(faces), len(bary), 2))
    for fi, face in enumerate(faces):
        for a in range(3):
            u, v = face[a], face[(a + 1) % 3]
            e = edge_index[(min(u, v), max(u, v))]
            par, perp = _crof_basis(points2d, (min(u, v), max(u, v)))
            b = _cr_hat_value(bary, (a + 2) % 3)
            out[fi] += b[:, None] * (coeffs[2 * e] * par
                                     + coeffs[2 * e + 1] * perp)
    return out


@dataclass(frozen=True)
class MongeField:
    """Scalar field on a Monge patch given with analytic partials in the
    parameter plane (anything callable works; Polynomial2D fits)."""

    f: object
    fx: object
    fy: object
    fxx: object
    fxy: object
    fyy: object

    @classmethod
    def from_polynomial(cls, p):
        px, py = p.diff("x"), p.diff("y")
        return cls(f=p, fx=px, fy=py, fxx=px.diff("x"), fxy=px.diff("y"),
                   fyy=py.diff("y"))


def smooth_energy_monge(surface, fld, param_points, param_faces, degree=4):
    """Smooth Hessian energy of a field over a Monge patch.

    Evaluates the integrand - the squared covariant Hessian plus the
    Gaussian curvature times the squared differential - pointwise from
    the fundamental forms of the graph (x, y, z(x, y)), and integrates
    with a Gauss rule over the parameter triangulation.  Returns half
    the integral.
    """
    wts, bary = triangle_quadrature(degree)
    tri = param_points[param_faces]                  # (F, 3, 2)
    pts = np.einsum("qb,fbc->fqc", bary, tri)        # (F, q, 2)
    x, y = pts[..., 0], pts[..., 1]
    v0, v1, v2 = tri[:, 0], tri[:, 1], tri[:, 2]
    area2 = _cross2(v1 - v0, v2 - v0)                # (F,)

    zx = surface.zx(x, y)
    zy = surface.zy(x, y)
    zxx = surface.zxx(x, y)
    zxy = surface.zxy(x, y)
    zyy = surface.zyy(x, y)
    w2 = 1.0 + zx ** 2 + zy ** 2

    fx = fld.fx(x, y)
    fy = fld.fy(x, y)
    # covariant Hessian of a graph: H_ij = f_ij - z_ij (zx fx + zy fy)/W^2
    zdotf = (zx * fx + zy * fy) / w2
    hxx = fld.fxx(x, y) - zxx * zdotf
    hxy = fld.fxy(x, y) - zxy * zdotf
    hyy = fld.fyy(x, y) - zyy * zdotf

    # inverse metric of the graph
    ixx = (1.0 + zy ** 2) / w2
    ixy = -zx * zy / w2
    iyy = (1.0 + zx ** 2) / w2

    # G = g^-1 H, squared norm = tr(G G)
    gxx = ixx * hxx + ixy * hxy
    gxy = ixx * hxy + ixy * hyy
    gyx = ixy * hxx + iyy * hxy
    gyy = ixy * hxy + iyy * hyy
    hess2 = gxx * gxx + gxy * gyx + gyx * gxy + gyy * gyy

    kappa = (zxx * zyy - zxy ** 2) / w2 ** 2
    grad2 = ixx * fx * fx + 2.0 * ixy * fx * fy + iyy * fy * fy

    integrand = (hess2 + kappa * grad2) * np.sqrt(w2)
    per_face = 0.5 * np.abs(area2) * (integrand @ wts)
    return 0.5 * float(per_face.sum())
