"""Triangle mesh with globally oriented edges and intrinsic geometry.

The mesh stores an explicit edge list.  Every edge is oriented from its
lower vertex index to its higher one; each face records, for its three
local edges, the global edge index and whether the face traverses the
edge in the global direction (+1) or against it (-1).  All downstream
assembly consumes only intrinsic quantities (lengths, angles, areas).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFace, InvalidIndex, NonManifoldEdge

# Faces with double area below this fraction of the squared mean edge
# length are rejected: every assembled matrix entry contains 1/A.
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class TriMesh:
    """Indexed triangle mesh, immutable after construction.

    vertices        : (n, 3) float64 positions
    faces           : (F, 3) int vertex triples, counterclockwise
    edges           : (E, 2) int pairs (low, high), lexicographically sorted
    face_edges      : (F, 3) global edge index of local edge a (corner a -> a+1)
    face_edge_signs : (F, 3) +1 if the face traverses the edge low->high
    boundary_edges  : (E,) bool, edge has exactly one incident face
    boundary_vertices : (n,) bool
    """

    vertices: np.ndarray
    faces: np.ndarray
    edges: np.ndarray
    face_edges: np.ndarray
    face_edge_signs: np.ndarray
    boundary_edges: np.ndarray
    boundary_vertices: np.ndarray

    def __post_init__(self):
        for arr in (self.vertices, self.faces, self.edges, self.face_edges,
                    self.face_edge_signs, self.boundary_edges,
                    self.boundary_vertices):
            arr.flags.writeable = False

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_edges(self):
        return self.edges.shape[0]

    @property
    def n_faces(self):
        return self.faces.shape[0]

    @property
    def has_boundary(self):
        return bool(self.boundary_edges.any())

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces


@dataclass(frozen=True)
class GeometryCache:
    """Intrinsic quantities of a mesh, all derived from edge lengths.

    edge_lengths      : (E,)
    face_corner_lengths : (F, 3) length of local edge a (corner a -> a+1)
    corner_angles     : (F, 3) interior angle at corner a, radians
    double_areas      : (F,) twice the face area
    vertex_angle_sums : (n,) sum of incident corner angles
    mean_edge_length  : average edge length h
    """

    edge_lengths: np.ndarray
    face_corner_lengths: np.ndarray
    corner_angles: np.ndarray
    double_areas: np.ndarray
    vertex_angle_sums: np.ndarray
    mean_edge_length: float

    def __post_init__(self):
        for arr in (self.edge_lengths, self.face_corner_lengths,
                    self.corner_angles, self.double_areas,
                    self.vertex_angle_sums):
            arr.flags.writeable = False


def _double_areas_heron(l0, l1, l2):
    """Twice the triangle area from side lengths (stable Heron form).

    Invalid side triples (triangle inequality violated by roundoff or
    worse) yield 0 rather than NaN.
    """
    a = np.maximum(np.maximum(l0, l1), l2)
    c = np.minimum(np.minimum(l0, l1), l2)
    b = l0 + l1 + l2 - a - c
    prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.5 * np.sqrt(np.maximum(prod, 0.0))


def build_mesh(vertices, faces):
    """Build a TriMesh from positions and counterclockwise vertex triples.

    Raises InvalidIndex for out-of-range faces, DegenerateFace for
    (near-)zero-area faces, and NonManifoldEdge when an edge has more
    than two incident faces or the orientation is inconsistent.
    """
    vertices = np.ascontiguousarray(vertices, dtype=np.float64)
    faces = np.ascontiguousarray(faces, dtype=np.int64)
    if vertices.ndim != 2 or vertices.shape[1] != 3:
        raise InvalidIndex("vertices must be an (n, 3) array")
    if faces.ndim != 2 or faces.shape[1] != 3:
        raise InvalidIndex("faces must be an (F, 3) array")
    n = vertices.shape[0]
    if faces.size and (faces.min() < 0 or faces.max() >= n):
        raise InvalidIndex("face references a vertex outside 0..%d" % (n - 1))
    if ((faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2])
            | (faces[:, 2] == faces[:, 0])).any():
        raise DegenerateFace("face with repeated vertex")

    # Local edge a of a face runs from corner a to corner (a+1) % 3.
    tails = faces
    tips = faces[:, [1, 2, 0]]
    lo = np.minimum(tails, tips)
    hi = np.maximum(tails, tips)
    codes = lo.astype(np.int64) * n + hi
    uniq, inverse = np.unique(codes, return_inverse=True)
    edges = np.column_stack((uniq // n, uniq % n))
    face_edges = inverse.reshape(faces.shape)
    signs = np.where(tails < tips, 1, -1).astype(np.int8)

    counts = np.bincount(face_edges.ravel(), minlength=len(uniq))
    if (counts > 2).any():
        e = int(np.argmax(counts > 2))
        raise NonManifoldEdge(
            f"edge {tuple(edges[e])} has {counts[e]} incident faces")
    sign_sums = np.bincount(face_edges.ravel(), weights=signs.ravel(),
                            minlength=len(uniq))
    if ((counts == 2) & (sign_sums != 0)).any():
        e = int(np.argmax((counts == 2) & (sign_sums != 0)))
        raise NonManifoldEdge(
            f"edge {tuple(edges[e])} is traversed twice in the same "
            "direction; mesh is not consistently oriented")

    lengths = np.linalg.norm(vertices[tips] - vertices[tails], axis=2)
    if faces.size:
        mean_l = float(np.mean(np.linalg.norm(
            vertices[edges[:, 1]] - vertices[edges[:, 0]], axis=1)))
        dareas = _double_areas_heron(lengths[:, 0], lengths[:, 1],
                                     lengths[:, 2])
        bad = dareas < DEGENERACY_TOL * mean_l ** 2
        if bad.any():
            raise DegenerateFace(
                f"face {int(np.argmax(bad))} has (near-)zero area")

    boundary_edges = counts == 1
    boundary_vertices = np.zeros(n, dtype=bool)
    if boundary_edges.any():
        boundary_vertices[edges[boundary_edges].ravel()] = True

    return TriMesh(vertices=vertices, faces=faces, edges=edges,
                   face_edges=face_edges, face_edge_signs=signs,
                   boundary_edges=boundary_edges,
                   boundary_vertices=boundary_vertices)


def geometry(mesh):
    """Compute the intrinsic geometry cache for a mesh.

    Angles come from the law of cosines, areas from the stable Heron
    formula, so everything is a function of edge lengths alone.
    """
    verts, edges = mesh.vertices, mesh.edges
    edge_lengths = np.linalg.norm(verts[edges[:, 1]] - verts[edges[:, 0]],
                                  axis=1)
    l = edge_lengths[mesh.face_edges]  # (F, 3), l[:, a] = |corner a -> a+1|

    # Angle at corner c sits between local edges c (leaving) and c+2
    # (entering); the opposite side is local edge c+1.
    angles = np.empty_like(l)
    for c in range(3):
        adj1 = l[:, c]
        adj2 = l[:, (c + 2) % 3]
        opp = l[:, (c + 1) % 3]
        cosv = (adj1 ** 2 + adj2 ** 2 - opp ** 2) / (2.0 * adj1 * adj2)
        angles[:, c] = np.arccos(np.clip(cosv, -1.0, 1.0))

    double_areas = _double_areas_heron(l[:, 0], l[:, 1], l[:, 2])
    angle_sums = np.bincount(mesh.faces.ravel(), weights=angles.ravel(),
                             minlength=mesh.n_vertices)
    return GeometryCache(edge_lengths=edge_lengths,
                         face_corner_lengths=l,
                         corner_angles=angles,
                         double_areas=double_areas,
                         vertex_angle_sums=angle_sums,
                         mean_edge_length=float(edge_lengths.mean()))


@dataclass(frozen=True)
class RegularitySummary:
    """Per-face circumradius/inradius ratios with extremes."""

    ratios: np.ndarray
    max_ratio: float
    min_ratio: float


def triangle_regularity(mesh, geom=None):
    """Circumradius-to-inradius ratio per face (2 iff equilateral).

    The ratio is the uniform-triangulation measure used to certify that
    a refinement family stays non-degenerate.
    """
    if geom is None:
        geom = geometry(mesh)
    l = geom.face_corner_lengths
    A = geom.double_areas
    # R = l0*l1*l2 / (2A), r = A / (l0+l1+l2)  (A is the double area)
    ratios = l[:, 0] * l[:, 1] * l[:, 2] * (l[:, 0] + l[:, 1] + l[:, 2]) \
        / (2.0 * A * A)
    return RegularitySummary(ratios=ratios, max_ratio=float(ratios.max()),
                             min_ratio=float(ratios.min()))
