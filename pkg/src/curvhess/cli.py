"""Command line interface: assemble, interpolate, smooth, flow, eigs,
converge, curvature.

Exit codes: 0 success, 1 input or assembly error, 2 constraint error,
3 solver non-convergence.  Identical inputs produce bit-identical
output files.
"""

import argparse
import os
import sys

import numpy as np

from . import convergence as conv
from .curvature import angle_defects
from .energy import (CURVED_HESSIAN, SQUARED_LAPLACIAN, build_energy,
                     energy_value)
from .errors import (ConstraintError, CurvhessError, NoConvergence,
                     SolveFailure)
from .fileio import (FieldExport, load_constraints_csv, load_field_csv,
                     load_mesh, save_field, save_matrix)
from .mesh import build_mesh, geometry
from .poly import Polynomial2D
from .reference import MongeField
from .refine import MongePatch, parse_surface
from .solve import fairing_flow, min_with_fixed, smallest_eigs, smooth

ENERGY_KINDS = {"curved-hessian": CURVED_HESSIAN,
                "squared-laplacian": SQUARED_LAPLACIAN}


def _add_common(p, mesh_required=True):
    if mesh_required:
        p.add_argument("--mesh", required=True, help="input mesh "
                       "(.obj/.off/.ply)")
    p.add_argument("--energy", choices=sorted(ENERGY_KINDS),
                   default="curved-hessian")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized auxiliaries (reproducibility)")


def _load(path):
    verts, faces = load_mesh(path)
    return build_mesh(verts, faces)


def _field_from_args(args, mesh):
    if args.field_expr is not None:
        p = Polynomial2D.parse(args.field_expr)
        return p(mesh.vertices[:, 0], mesh.vertices[:, 1])
    idx, _, cols = load_field_csv(args.field)
    name = args.column or next(iter(cols))
    f = np.zeros(mesh.n_vertices)
    f[idx] = cols[name]
    return f


def cmd_assemble(args):
    mesh = _load(args.mesh)
    op = build_energy(mesh, ENERGY_KINDS[args.energy])
    out = args.out_dir.rstrip("/")
    os.makedirs(out, exist_ok=True)
    written = {"Q": op.Q, "B": op.B}
    written.update(op.components)
    for name, mat in sorted(written.items()):
        save_matrix(mat, f"{out}/{name}.mtx")
        asym = abs(mat - mat.T).max() if mat.shape[0] == mat.shape[1] \
            else float("nan")
        print(f"{name}: {mat.shape[0]}x{mat.shape[1]}, nnz {mat.nnz}, "
              f"symmetry residual {asym:.3e}")
    return 0


def cmd_interpolate(args):
    mesh = _load(args.mesh)
    indices, values = load_constraints_csv(args.constraints)
    op = build_energy(mesh, ENERGY_KINDS[args.energy])
    u = min_with_fixed(op, indices, values)
    print(f"energy: {energy_value(op, u):.17g}")
    export = FieldExport(mesh).add_column("solution", u)
    save_field(export, args.out + ".csv")
    save_field(export, args.out + ".ply")
    return 0


def cmd_smooth(args):
    mesh = _load(args.mesh)
    f = _field_from_args(args, mesh)
    op = build_energy(mesh, ENERGY_KINDS[args.energy])
    u = smooth(op, f, args.alpha)
    print(f"max |u - f|: {np.abs(u - f).max():.17g}")
    export = FieldExport(mesh).add_column("input", f).add_column(
        "smoothed", u)
    save_field(export, args.out + ".csv")
    save_field(export, args.out + ".ply")
    return 0


def cmd_flow(args):
    mesh = _load(args.mesh)
    result = fairing_flow(mesh, args.alpha, args.steps,
                          kind=ENERGY_KINDS[args.energy])
    print(f"steps completed: {result.steps_completed}"
          + (" (aborted: face collapse)" if result.aborted else ""))
    final = build_mesh(result.positions, mesh.faces)
    export = FieldExport(final, positions=result.positions)
    export.add_column("angle_defect", result.defects_per_step[-1])
    export.add_column("angle_defect_initial", result.defects_per_step[0])
    save_field(export, args.out + ".csv")
    save_field(export, args.out + ".ply")
    return 0


def cmd_eigs(args):
    mesh = _load(args.mesh)
    op = build_energy(mesh, ENERGY_KINDS[args.energy])
    res = smallest_eigs(op, args.k)
    for i, v in enumerate(res.values):
        print(f"{i},{v:.17g}")
    if args.out:
        export = FieldExport(mesh)
        for i in range(args.k):
            export.add_column(f"eig{i}", res.vectors[:, i])
        save_field(export, args.out + ".csv")
        save_field(export, args.out + ".ply")
    return 0


def cmd_curvature(args):
    mesh = _load(args.mesh)
    defects = angle_defects(mesh, geometry(mesh))
    total = defects.defects.sum()
    print(f"total angle defect: {total:.17g}")
    export = FieldExport(mesh).add_column("angle_defect", defects.defects)
    save_field(export, args.out + ".csv")
    save_field(export, args.out + ".ply")
    return 0


def cmd_converge(args):
    kind = ENERGY_KINDS[args.energy]
    if args.problem == "forward":
        surface = parse_surface(args.surface)
        if not isinstance(surface, MongePatch):
            raise CurvhessError("forward problems need a monge: surface")
        fld = MongeField.from_polynomial(Polynomial2D.parse(args.field))
        record, exact, agreement = conv.forward_energy_study(
            surface, fld, levels=args.levels, divisions=args.divisions,
            kind=kind)
        print(f"exact energy: {exact:.17g} "
              f"(quadrature agreement {agreement:.3e})")
    elif args.problem == "eigenvalue":
        levels = tuple(range(2, 2 + args.levels))
        record = conv.sphere_eigenvalue_study(levels=levels, kind=kind)
    elif args.problem == "bvp":
        mesh = _load(args.mesh)
        indices, values = load_constraints_csv(args.constraints)
        record = conv.interpolation_self_study(
            mesh, indices, values, levels=args.levels, kind=kind)
    else:
        raise CurvhessError(f"unknown problem {args.problem!r}")
    for i, h, e in record.rows():
        print(f"level {i}: h={h:.6g} error={e:.6g}")
    print(f"slope: {record.slope:.4f}")
    if args.out:
        record.save_csv(args.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="curvhess",
        description="Curved Hessian smoothness energy on triangle meshes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assemble", help="export energy matrices")
    _add_common(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("interpolate", help="scattered data interpolation")
    _add_common(p)
    p.add_argument("--constraints", required=True,
                   help="CSV of vertex,value rows")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("smooth", help="smooth a per-vertex field")
    _add_common(p)
    p.add_argument("--field", help="field CSV (from save_field)")
    p.add_argument("--column", help="column name inside --field")
    p.add_argument("--field-expr", help="polynomial in x,y to smooth")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("flow", help="surface fairing flow")
    _add_common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("eigs", help="smallest generalized eigenpairs")
    _add_common(p)
    p.add_argument("-k", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("curvature", help="per-vertex angle defects")
    _add_common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("converge", help="run a convergence study")
    p.add_argument("--problem", required=True,
                   choices=["forward", "eigenvalue", "bvp"])
    p.add_argument("--mesh", help="base mesh for bvp studies")
    p.add_argument("--constraints", help="constraints CSV for bvp studies")
    p.add_argument("--surface", help="surface spec for forward studies, "
                   "e.g. monge:x^2")
    p.add_argument("--field", help="field polynomial for forward studies")
    p.add_argument("--divisions", type=int, default=8)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--energy", choices=sorted(ENERGY_KINDS),
                   default="curved-hessian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_converge)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (NoConvergence, SolveFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConstraintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CurvhessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
