"""Mesh ingestion (OBJ, OFF, ascii PLY) and result export (CSV, ascii
PLY, Matrix Market).

All formats are ASCII so experiment artifacts stay diffable.  Loaders
preserve vertex order; polygons are fan-triangulated; unknown vertex
attributes are ignored.  Scalars are written with 17 significant
digits, which round-trips float64 exactly.
"""

import os

import numpy as np
import scipy.io
import scipy.sparse as sparse

from .errors import InvalidName, IoError, ParseError, UnsupportedElement

FMT = "%.17g"


def _fan(indices):
    return [[indices[0], indices[k], indices[k + 1]]
            for k in range(1, len(indices) - 1)]


def _load_obj(lines):
    verts, faces = [], []
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        key = parts[0]
        if key == "v":
            if len(parts) < 4:
                raise ParseError("vertex needs three coordinates", line=ln)
            try:
                verts.append([float(p) for p in parts[1:4]])
            except ValueError as exc:
                raise ParseError(str(exc), line=ln) from exc
        elif key == "f":
            idx = []
            for tok in parts[1:]:
                head = tok.split("/")[0]
                try:
                    i = int(head)
                except ValueError as exc:
                    raise ParseError(f"bad face token {tok!r}",
                                     line=ln) from exc
                # OBJ is 1-based; negative counts back from the end
                idx.append(i - 1 if i > 0 else len(verts) + i)
            if len(idx) < 3:
                raise ParseError("face needs at least three vertices",
                                 line=ln)
            faces.extend(_fan(idx))
        elif key in ("l", "curv", "curv2", "surf"):
            raise UnsupportedElement(
                f"OBJ element {key!r} (line {ln}) is not supported")
        # vt/vn/vp/usemtl/mtllib/o/g/s records are ignored
    return np.array(verts, dtype=np.float64), np.array(faces, dtype=np.int64)


def _load_off(lines):
    content = [(ln, raw.strip()) for ln, raw in enumerate(lines, start=1)
               if raw.strip() and not raw.strip().startswith("#")]
    if not content:
        raise ParseError("empty OFF file", line=1)
    ln0, header = content[0]
    if header not in ("OFF", "COFF"):
        raise ParseError("missing OFF header", line=ln0)
    if len(content) < 2:
        raise ParseError("missing OFF count line", line=ln0)
    ln1, counts = content[1]
    try:
        nv, nf, _ = (int(t) for t in counts.split()[:3])
    except ValueError as exc:
        raise ParseError("bad OFF count line", line=ln1) from exc
    body = content[2:]
    if len(body) < nv + nf:
        raise ParseError(
            f"OFF declares {nv} vertices and {nf} faces but has "
            f"{len(body)} data lines", line=ln1)
    verts = []
    for ln, text in body[:nv]:
        parts = text.split()
        if len(parts) < 3:
            raise ParseError("vertex needs three coordinates", line=ln)
        try:
            verts.append([float(p) for p in parts[:3]])
        except ValueError as exc:
            raise ParseError(str(exc), line=ln) from exc
    faces = []
    for ln, text in body[nv:nv + nf]:
        parts = text.split()
        try:
            cnt = int(parts[0])
            idx = [int(p) for p in parts[1:1 + cnt]]
        except (ValueError, IndexError) as exc:
            raise ParseError("bad face line", line=ln) from exc
        if len(idx) != cnt:
            raise ParseError(
                f"face declares {cnt} vertices but lists {len(idx)}",
                line=ln)
        if cnt < 3:
            raise ParseError("face needs at least three vertices", line=ln)
        faces.extend(_fan(idx))
    return np.array(verts, dtype=np.float64), np.array(faces, dtype=np.int64)


def _load_ply(lines):
    if not lines or lines[0].strip() != "ply":
        raise ParseError("missing ply magic", line=1)
    elements = []  # (name, count, [property names]) in header order
    ln = 1
    fmt_seen = False
    while ln < len(lines):
        parts = lines[ln].strip().split()
        ln += 1
        if not parts or parts[0] == "comment":
            continue
        if parts[0] == "format":
            if parts[1] != "ascii":
                raise UnsupportedElement(f"PLY format {parts[1]!r}; only "
                                         "ascii is supported")
            fmt_seen = True
        elif parts[0] == "element":
            elements.append([parts[1], int(parts[2]), []])
        elif parts[0] == "property":
            if not elements:
                raise ParseError("property before any element", line=ln)
            if parts[1] == "list":
                elements[-1][2].append(("list", parts[-1]))
            else:
                elements[-1][2].append(("scalar", parts[-1]))
        elif parts[0] == "end_header":
            break
        else:
            raise ParseError(f"unknown header line {parts[0]!r}", line=ln)
    else:
        raise ParseError("unterminated PLY header", line=len(lines))
    if not fmt_seen:
        raise ParseError("PLY header lacks a format line", line=1)

    verts, faces = [], []
    for name, count, props in elements:
        if name == "vertex":
            names = [p[1] for p in props if p[0] == "scalar"]
            try:
                xi, yi, zi = (names.index(c) for c in ("x", "y", "z"))
            except ValueError as exc:
                raise ParseError("vertex element lacks x/y/z") from exc
            for _ in range(count):
                if ln >= len(lines):
                    raise ParseError("unexpected end of vertex data",
                                     line=ln)
                parts = lines[ln].split()
                ln += 1
                try:
                    verts.append([float(parts[xi]), float(parts[yi]),
                                  float(parts[zi])])
                except (ValueError, IndexError) as exc:
                    raise ParseError("bad vertex line", line=ln) from exc
        elif name == "face":
            for _ in range(count):
                if ln >= len(lines):
                    raise ParseError("unexpected end of face data", line=ln)
                parts = lines[ln].split()
                ln += 1
                try:
                    cnt = int(parts[0])
                    idx = [int(p) for p in parts[1:1 + cnt]]
                except (ValueError, IndexError) as exc:
                    raise ParseError("bad face line", line=ln) from exc
                if cnt < 3:
                    raise ParseError("face needs at least three vertices",
                                     line=ln)
                faces.extend(_fan(idx))
        elif count > 0:
            raise UnsupportedElement(f"PLY element {name!r} is not "
                                     "supported")
    return np.array(verts, dtype=np.float64), np.array(faces, dtype=np.int64)


_LOADERS = {"obj": _load_obj, "off": _load_off, "ply": _load_ply}


def load_mesh(path, fmt=None):
    """Read (vertices, faces) from an OBJ, OFF, or ascii PLY file.

    The format comes from the extension unless given explicitly.
    Vertex order in the file is vertex order in memory.
    """
    if fmt is None:
        fmt = os.path.splitext(path)[1].lstrip(".").lower()
    if fmt not in _LOADERS:
        raise UnsupportedElement(f"unknown mesh format {fmt!r}")
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IoError(str(exc)) from exc
    verts, faces = _LOADERS[fmt](lines)
    if len(verts) == 0:
        raise ParseError("no vertices found")
    return verts, faces


class FieldExport:
    """Named per-vertex scalar columns over a mesh, ready to write.

    positions overrides the mesh vertices in the output (used by the
    fairing flow, whose artifact is the moved geometry itself).
    """

    def __init__(self, mesh, positions=None):
        self.mesh = mesh
        self.positions = mesh.vertices if positions is None else \
            np.asarray(positions, dtype=np.float64)
        self.names = []
        self.columns = {}

    def add_column(self, name, values):
        if not name or not str(name).strip():
            raise InvalidName("empty column name")
        if name in self.columns:
            raise InvalidName(f"duplicate column name {name!r}")
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.mesh.n_vertices,):
            raise InvalidName(
                f"column {name!r} has length {values.shape}, mesh has "
                f"{self.mesh.n_vertices} vertices")
        self.names.append(name)
        self.columns[name] = values
        return self


def save_field(export, path, fmt=None):
    """Write a FieldExport as CSV (index,x,y,z,columns...) or ascii PLY
    (one float property per column, plus the faces)."""
    if fmt is None:
        fmt = os.path.splitext(path)[1].lstrip(".").lower()
    try:
        if fmt == "csv":
            _save_field_csv(export, path)
        elif fmt == "ply":
            _save_field_ply(export, path)
        else:
            raise UnsupportedElement(f"unknown field format {fmt!r}")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _save_field_csv(export, path):
    pos = export.positions
    with open(path, "w") as fh:
        fh.write("index,x,y,z" + "".join("," + n for n in export.names)
                 + "\n")
        for i in range(export.mesh.n_vertices):
            row = [str(i)] + [FMT % c for c in pos[i]]
            row += [FMT % export.columns[n][i] for n in export.names]
            fh.write(",".join(row) + "\n")


def _save_field_ply(export, path):
    mesh = export.mesh
    pos = export.positions
    with open(path, "w") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        fh.write(f"element vertex {mesh.n_vertices}\n")
        for c in ("x", "y", "z"):
            fh.write(f"property float {c}\n")
        for n in export.names:
            fh.write(f"property float {n}\n")
        fh.write(f"element face {mesh.n_faces}\n")
        fh.write("property list uchar int vertex_indices\n")
        fh.write("end_header\n")
        for i in range(mesh.n_vertices):
            vals = [FMT % c for c in pos[i]]
            vals += [FMT % export.columns[n][i] for n in export.names]
            fh.write(" ".join(vals) + "\n")
        for f in mesh.faces:
            fh.write(f"3 {f[0]} {f[1]} {f[2]}\n")


def load_field_csv(path):
    """Read a field CSV back: (indices, positions, {name: column})."""
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise IoError(str(exc)) from exc
    if not lines:
        raise ParseError("empty CSV", line=1)
    header = lines[0].split(",")
    if header[:4] != ["index", "x", "y", "z"]:
        raise ParseError("expected header index,x,y,z,...", line=1)
    names = header[4:]
    rows = []
    for ln, text in enumerate(lines[1:], start=2):
        parts = text.split(",")
        if len(parts) != len(header):
            raise ParseError("row width does not match header", line=ln)
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise ParseError(str(exc), line=ln) from exc
    data = np.array(rows)
    idx = data[:, 0].astype(np.int64)
    cols = {n: data[:, 4 + j] for j, n in enumerate(names)}
    return idx, data[:, 1:4], cols


def load_constraints_csv(path):
    """Read (vertex, value) constraint rows; a "vertex,value" header is
    optional."""
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise IoError(str(exc)) from exc
    idx, vals = [], []
    for ln, text in enumerate(lines, start=1):
        if ln == 1 and text.lower().replace(" ", "") in ("vertex,value",):
            continue
        parts = text.split(",")
        if len(parts) != 2:
            raise ParseError("expected vertex,value", line=ln)
        try:
            idx.append(int(parts[0]))
            vals.append(float(parts[1]))
        except ValueError as exc:
            raise ParseError(str(exc), line=ln) from exc
    return np.array(idx, dtype=np.int64), np.array(vals, dtype=np.float64)


def save_matrix(matrix, path):
    """Write a sparse matrix in Matrix Market coordinate format, using
    symmetric storage when the matrix is exactly symmetric."""
    A = sparse.coo_matrix(matrix)
    symmetry = "general"
    if A.shape[0] == A.shape[1]:
        diff = (A - A.T).tocoo()
        if diff.nnz == 0 or np.abs(diff.data).max() == 0.0:
            symmetry = "symmetric"
    try:
        scipy.io.mmwrite(path, A, symmetry=symmetry, precision=17)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def load_matrix(path):
    try:
        return sparse.csr_matrix(scipy.io.mmread(path))
    except OSError as exc:
        raise IoError(str(exc)) from exc
