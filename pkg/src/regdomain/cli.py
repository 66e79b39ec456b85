"""Command-line driver.

Scenes are JSON files, or ``gallery:<name>`` for a built-in fixture.  Exit
codes: 0 success, 2 validation failure, 3 numeric failure.  Errors are
written to stderr as one JSON object.  ``FC_THREADS`` caps the BLAS thread
pools.
"""

import os

if os.environ.get("FC_THREADS"):
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["FC_THREADS"])

import argparse  # noqa: E402
import csv  # noqa: E402
import io  # noqa: E402
import json  # noqa: E402
import sys  # noqa: E402
import time  # noqa: E402

import numpy as np  # noqa: E402

from . import asymptotics, gallery, oracles, singularity  # noqa: E402
from .domain import DomainError, build_domain  # noqa: E402
from .holonomy import PresentationError  # noqa: E402
from .lorentz import LorentzError, hyperboloid_point  # noqa: E402
from .measure import PathError  # noqa: E402
from .scene import SceneError, dumps, parse_scene  # noqa: E402
from .stratification import ComplexError, solve_weights, weight_residuals  # noqa: E402

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 2, 3


class CliError(Exception):
    def __init__(self, code, kind, message, details=None):
        super().__init__(message)
        self.code, self.kind, self.details = code, kind, details or []


def _fmt(x):
    return float(format(float(x), ".17g"))


def _vec(a):
    return [_fmt(x) for x in np.asarray(a, dtype=float)]


def _floats(text):
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, "usage", f"not a comma-separated list of numbers: {text!r}") from exc


def load_scene(ref):
    if ref.startswith("gallery:"):
        return gallery.load(ref.split(":", 1)[1])
    return parse_scene(ref)


def _domain(scene):
    return build_domain(scene.complex, scene.weights, scene.base)


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _emit(doc, out=None):
    _write(json.dumps(doc, indent=1) + "\n", out)


# -- commands ------------------------------------------------------------------

def cmd_validate(args):
    scene = load_scene(args.scene)
    rep = scene.complex.validate()
    doc = {"ok": rep.ok, "errors": rep.errors, "warnings": scene.warnings + rep.warnings,
           "angle_sums": {k: _fmt(v) for k, v in rep.angle_sums.items()},
           "separations": [list(s) for s in rep.separations]}
    _emit(doc)
    return EXIT_OK if rep.ok else EXIT_VALIDATION


def cmd_weights(args):
    scene = load_scene(args.scene)
    S = scene.complex
    if args.action == "check":
        weights = scene.weights
        if args.weights:
            weights = dict(zip(S.wall_ids, _floats(args.weights)))
        res = weight_residuals(S, weights)
        worst = max((float(np.linalg.norm(v)) for v in res.values()), default=0.0)
        _emit({"residuals": {k: _vec(v) for k, v in res.items()}, "max_norm": _fmt(worst)})
        return EXIT_OK if worst < 1e-9 else EXIT_VALIDATION
    sol = solve_weights(S)
    doc = {"walls": S.wall_ids, "nullspace": [_vec(c) for c in sol.basis.T], "feasible": sol.feasible,
           "cone_dimension": sol.cone_dim, "lower_bound": sol.lower_bound}
    if sol.feasible:
        doc["witness"] = {k: _fmt(v) for k, v in sol.witness.items()}
    elif sol.certificate is not None:
        doc["certificate"] = _vec(sol.certificate)
    _emit(doc)
    return EXIT_OK if sol.feasible else EXIT_NUMERIC


def cmd_build(args):
    scene = load_scene(args.scene)
    t0 = time.perf_counter()
    D = _domain(scene)
    elapsed = time.perf_counter() - t0
    _emit({"vertices": {k: _vec(v) for k, v in D.positions.items()}, "cycle_residual": _fmt(D.cycle_residual),
           "cells": {"vertices": len(D.sigma.vertices), "edges": len(D.sigma.edges), "faces": len(D.sigma.faces)},
           "build_seconds": round(elapsed, 3) if args.timing else None})
    return EXIT_OK


def cmd_query(args):
    D = _domain(load_scene(args.scene))
    p = _floats(args.point)
    if len(p) != D.n + 1:
        raise CliError(EXIT_VALIDATION, "usage", f"point needs {D.n + 1} coordinates")
    c = D.ct_query(p)
    _emit({"T": _fmt(c.T), "r": _vec(c.r), "N": _vec(c.N), "gradient": _vec(c.gradient),
           "cell": c.cell, "cell_kind": c.kind})
    return EXIT_OK


def _grid(spec, n):
    lo, hi, m = _floats(spec)
    ax = np.linspace(lo, hi, int(m))
    mesh = np.meshgrid(*([ax] * n), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def cmd_boundary(args):
    scene = load_scene(args.scene)
    D = _domain(scene)
    o = scene.frame_origin if scene.frame_origin is not None else np.zeros(D.n + 1)
    Y = _grid(args.grid, D.n)
    psi = D.boundary_height(Y + o[1:]) - o[0]
    out = io.StringIO()
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow([f"y{i + 1}" for i in range(D.n)] + ["psi"])
    for y, v in zip(Y, psi):
        wr.writerow([f"{c:.17g}" for c in y] + [f"{v:.17g}"])
    _write(out.getvalue(), args.out)
    return EXIT_OK


def cmd_level_mesh(args):
    D = _domain(load_scene(args.scene))
    mesh = asymptotics.level_mesh(D, args.a, args.h, args.radius)
    T = D.T(mesh.vertices)
    dev = float(np.max(np.abs(T - args.a))) if len(T) else 0.0
    if dev > 1e-7:
        raise CliError(EXIT_NUMERIC, "mesh", f"mesh vertex off the level surface by {dev:.3e}")
    _write(asymptotics.mesh_to_obj(mesh), args.out)
    return EXIT_OK


def cmd_singularity(args):
    D = _domain(load_scene(args.scene))
    _write(singularity.complex_to_json(D.sigma) + "\n", args.out)
    return EXIT_OK


def cmd_distance(args):
    D = _domain(load_scene(args.scene))
    x, y = _hpoint(_floats(args.x), D.n), _hpoint(_floats(args.y), D.n)
    r = asymptotics.intrinsic_distance(D, args.a, x, y, args.h)
    _emit({"a": args.a, "d_a": _fmt(r.value), "graph_bound": _fmt(r.graph_value), "h": args.h, "method": r.method})
    return EXIT_OK


def _hpoint(v, n):
    """A point of H^n from n spatial coordinates (lifted) or n+1 hyperboloid coordinates."""
    v = np.asarray(v, dtype=float)
    if len(v) == n:
        v = np.r_[np.sqrt(1.0 + v @ v), v]
    if len(v) != n + 1:
        raise CliError(EXIT_VALIDATION, "usage", f"point needs {n} or {n + 1} coordinates")
    return hyperboloid_point(v)


def _read_pairs(path, n):
    with open(path) as fh:
        doc = json.load(fh)
    return [(_hpoint(p[0], n), _hpoint(p[1], n)) for p in doc]


def cmd_converge(args):
    D = _domain(load_scene(args.scene))
    rows, bad = asymptotics.convergence_report(D, _read_pairs(args.pairs_file, D.n), list(_floats(args.a_list)), args.h)
    _write(asymptotics.report_csv(rows), args.out)
    if bad:
        sys.stderr.write(json.dumps({"warning": "sandwich violations", "details": [list(map(str, b)) for b in bad]}) + "\n")
    return EXIT_OK if not bad else EXIT_NUMERIC


def cmd_spectra(args):
    scene = load_scene(args.scene)
    if scene.group is None:
        raise CliError(EXIT_VALIDATION, "scene", "spectra needs a scene with group data")
    D = _domain(scene)
    word = tuple(int(k) for k in args.word.split(","))
    datum = scene.group.evaluate(word)
    e = asymptotics.spectrum(D, datum, list(_floats(args.a_list)), args.samples, args.h)
    _emit({"word": list(e.word), "ell_hyp": _fmt(e.ell_hyp), "ell_sigma": _fmt(e.ell_sigma),
           "ell_a": {f"{a:.17g}": _fmt(v) for a, v in e.ell_a.items()}, "samples": e.samples})
    return EXIT_OK


def cmd_gallery(args):
    if args.list:
        _write("\n".join(gallery.NAMES) + "\n", None)
        return EXIT_OK
    if args.emit:
        _write(dumps(gallery.emit(args.emit)) + "\n", args.out)
        return EXIT_OK
    if args.regen_oracles:
        os.makedirs(args.out_dir, exist_ok=True)
        for name in gallery.NAMES:
            D = _domain(gallery.load(name))
            oracles.regen_oracles(name, D, os.path.join(args.out_dir, f"{name}.json"))
            sys.stdout.write(f"{name}\n")
        return EXIT_OK
    raise CliError(EXIT_VALIDATION, "usage", "gallery needs --list, --emit NAME or --regen-oracles")


# -- entry point ---------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="regdomain", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def scene_cmd(name, fn, help_, pre=None):
        sp = sub.add_parser(name, help=help_)
        if pre:
            sp.add_argument(pre[0], choices=pre[1])
        sp.add_argument("scene", help="scene JSON path or gallery:<name>")
        sp.set_defaults(fn=fn)
        return sp

    scene_cmd("validate", cmd_validate, "check every structural invariant")
    sp = scene_cmd("weights", cmd_weights, "check or solve the weight equations", ("action", ["check", "solve"]))
    sp.add_argument("--weights", help="comma-separated weights in wall order (default: scene weights)")
    sp = scene_cmd("build", cmd_build, "build the domain and report its vertices")
    sp.add_argument("--timing", action="store_true")
    sp = scene_cmd("query", cmd_query, "cosmological time, retraction and normal at a point")
    sp.add_argument("--point", required=True)
    sp = scene_cmd("boundary", cmd_boundary, "boundary height on a grid (CSV)")
    sp.add_argument("--grid", default="-2,2,21", help="lo,hi,count per axis (write --grid=-2,2,21 for negative bounds)")
    sp.add_argument("--out")
    sp = scene_cmd("level-mesh", cmd_level_mesh, "mesh of a level surface (OBJ)")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--h", type=float, default=0.1)
    sp.add_argument("--radius", type=float, default=2.0)
    sp.add_argument("--out")
    sp = scene_cmd("singularity", cmd_singularity, "singularity complex (JSON)")
    sp.add_argument("--out")
    sp = scene_cmd("distance", cmd_distance, "intrinsic distance on a level surface")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--x", required=True, help="spatial or hyperboloid coordinates")
    sp.add_argument("--y", required=True)
    sp.add_argument("--h", type=float, default=0.1)
    sp = scene_cmd("converge", cmd_converge, "distance table across levels (CSV)")
    sp.add_argument("--pairs-file", required=True, help="JSON list of [x, y] hyperboloid point pairs")
    sp.add_argument("--a-list", default="0.01,0.1,1,10,100")
    sp.add_argument("--h", type=float, default=0.1)
    sp.add_argument("--out")
    sp = scene_cmd("spectra", cmd_spectra, "translation lengths of a group word")
    sp.add_argument("--word", required=True, help="signed 1-based generator indices, e.g. 1,-2")
    sp.add_argument("--a-list", default="0.01,1,100")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--h", type=float, default=0.1)
    sp = sub.add_parser("gallery", help="built-in example scenes")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--emit", metavar="NAME")
    sp.add_argument("--out")
    sp.add_argument("--regen-oracles", action="store_true")
    sp.add_argument("--out-dir", default="oracles")
    sp.set_defaults(fn=cmd_gallery)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        err = exc
    except (SceneError, ComplexError, PresentationError) as exc:
        err = CliError(EXIT_VALIDATION, type(exc).__name__, str(exc), getattr(exc, "errors", []))
    except (DomainError, PathError, LorentzError, singularity.SingularityError,
            asymptotics.WindowError, KeyError) as exc:
        err = CliError(EXIT_NUMERIC, type(exc).__name__, str(exc))
    except OSError as exc:
        err = CliError(EXIT_VALIDATION, "io", str(exc))
    sys.stderr.write(json.dumps({"error": err.kind, "message": str(err), "details": err.details}) + "\n")
    return err.code


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
