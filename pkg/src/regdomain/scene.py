"""Scene files: one JSON document describing a weighted stratification.

Top-level fields::

    format, version, name, dimension,
    walls    [{id, normal, ideal_vertices?, witness?}],
    pieces   [{id, bounding: [[wall id, +1|-1], ...], witness?}],
    spines   [{id, endpoints, star}],
    weights  {wall id: positive real},
    base_piece, frame {origin},
    group?   {generators, relations, cocycle, ball_radius, core_radius, base_point?},
    tolerances?

Floats are written with 17 significant digits so that parse/serialize
round-trips exactly.
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .holonomy import GroupPresentation, PresentationError
from .lorentz import LorentzError, inner
from .stratification import ComplexError, SpineGeodesic, StratComplex, TopPiece, Wall

FORMAT = "regdomain-scene"
VERSION = 1

log = logging.getLogger(__name__)


class SceneError(ValueError):
    """Schema or invariant violations, itemised as ``field: message`` strings."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class Scene:
    n: int
    complex: StratComplex
    weights: dict
    base: str
    name: str = ""
    frame_origin: np.ndarray = None
    group: GroupPresentation = None
    ball_radius: int = 4
    core_radius: float = None
    base_point: np.ndarray = None
    tolerances: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    raw: dict = None


def _vec(v, ctx, errors, size=None):
    try:
        a = np.asarray(v, dtype=float)
    except (TypeError, ValueError):
        errors.append(f"{ctx}: not a numeric vector")
        return None
    if size is not None and a.shape[-1:] != (size,):
        errors.append(f"{ctx}: expected {size} coordinates")
        return None
    if not np.all(np.isfinite(a)):
        errors.append(f"{ctx}: non-finite entries")
        return None
    return a


def scene_from_dict(doc):
    """Build and validate a :class:`Scene`; raises :class:`SceneError` with all problems found."""
    errors, warns = [], []
    if doc.get("format", FORMAT) != FORMAT:
        errors.append(f"format: expected {FORMAT!r}")
    if doc.get("version", VERSION) != VERSION:
        errors.append(f"version: unsupported version {doc.get('version')}")
    n = doc.get("dimension")
    if n not in (2, 3):
        raise SceneError(errors + ["dimension: must be 2 or 3"])
    walls = []
    for i, w in enumerate(doc.get("walls", [])):
        ctx = f"walls[{i}]"
        if "id" not in w or "normal" not in w:
            errors.append(f"{ctx}: id and normal are required")
            continue
        v = _vec(w["normal"], f"{ctx}.normal", errors, n + 1)
        if v is None:
            continue
        q = inner(v, v)
        if q <= 0:
            errors.append(f"{ctx}.normal: not spacelike")
            continue
        if abs(q - 1.0) > 1e-9:
            msg = f"{ctx}.normal: Lorentz norm {q:.6g} != 1, normalized on ingest"
            warns.append(msg)
            log.warning(msg)
            v = v / np.sqrt(q)
        iv = w.get("ideal_vertices")
        if iv is not None:
            iv = _vec(iv, f"{ctx}.ideal_vertices", errors, n + 1)
            if iv is not None:
                iv = np.atleast_2d(iv)
                iv = iv / iv[:, :1]
        wit = w.get("witness")
        if wit is not None:
            wit = _vec(wit, f"{ctx}.witness", errors, n + 1)
        walls.append(Wall(str(w["id"]), v, iv, wit))
    pieces = []
    for i, p in enumerate(doc.get("pieces", [])):
        ctx = f"pieces[{i}]"
        if "id" not in p:
            errors.append(f"{ctx}: id is required")
            continue
        bnd = []
        for j, item in enumerate(p.get("bounding", [])):
            if len(item) != 2 or item[1] not in (1, -1, "+", "-"):
                errors.append(f"{ctx}.bounding[{j}]: expected [wall id, +1|-1]")
                continue
            s = item[1]
            bnd.append((str(item[0]), 1 if s in (1, "+") else -1))
        wit = p.get("witness")
        if wit is not None:
            wit = _vec(wit, f"{ctx}.witness", errors, n + 1)
        pieces.append(TopPiece(str(p["id"]), bnd, wit))
    spines = []
    for i, s in enumerate(doc.get("spines", [])):
        ctx = f"spines[{i}]"
        ep = _vec(s.get("endpoints"), f"{ctx}.endpoints", errors, n + 1)
        if ep is None or ep.shape != (2, n + 1):
            errors.append(f"{ctx}.endpoints: two null directions required")
            continue
        spines.append(SpineGeodesic(str(s.get("id")), ep, [str(x) for x in s.get("star", [])]))
    if n == 2 and spines:
        errors.append("spines: only allowed for dimension 3")
    weights = {}
    for k, val in doc.get("weights", {}).items():
        try:
            val = float(val)
        except (TypeError, ValueError):
            errors.append(f"weights.{k}: not a number")
            continue
        if not val > 0:
            errors.append(f"weights.{k}: weights must be positive")
        weights[str(k)] = val
    wall_ids = {w.id for w in walls}
    for k in wall_ids - set(weights):
        errors.append(f"weights.{k}: missing weight")
    for k in set(weights) - wall_ids:
        errors.append(f"weights.{k}: unknown wall")
    if errors:
        raise SceneError(errors)
    try:
        S = StratComplex(n, walls, pieces, spines)
    except (ComplexError, LorentzError) as exc:
        raise SceneError([f"stratification: {exc}"]) from exc
    rep = S.validate()
    if not rep.ok:
        raise SceneError([f"stratification: {e}" for e in rep.errors])
    warns.extend(rep.warnings)
    base = str(doc.get("base_piece", S.piece_ids[0]))
    if base not in S.pieces:
        raise SceneError([f"base_piece: unknown piece {base}"])
    frame = doc.get("frame", {}) or {}
    fo = _vec(frame.get("origin", [0.0] * (n + 1)), "frame.origin", errors, n + 1)
    group, radius, core, bp = None, 4, None, None
    g = doc.get("group")
    if g is not None:
        try:
            group = GroupPresentation([np.asarray(m, float) for m in g["generators"]],
                                      [tuple(r) for r in g.get("relations", [])],
                                      [np.asarray(t, float) for t in g["cocycle"]] if g.get("cocycle") else None)
            group.validate()
        except (PresentationError, LorentzError, KeyError) as exc:
            raise SceneError([f"group: {exc}"]) from exc
        radius = int(g.get("ball_radius", 4))
        core = g.get("core_radius")
        if g.get("base_point") is not None:
            bp = _vec(g["base_point"], "group.base_point", errors, n + 1)
    if errors:
        raise SceneError(errors)
    return Scene(n, S, weights, base, str(doc.get("name", "")), fo, group, radius,
                 None if core is None else float(core), bp, dict(doc.get("tolerances", {})), warns, doc)


def parse_scene(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SceneError([f"json: line {exc.lineno} column {exc.colno}: {exc.msg}"]) from exc
    return scene_from_dict(doc)


def _num(x):
    return float(format(float(x), ".17g"))


def _arr(a):
    a = np.asarray(a, dtype=float)
    return [_num(x) for x in a] if a.ndim == 1 else [_arr(r) for r in a]


def scene_to_dict(scene):
    S = scene.complex
    doc = {"format": FORMAT, "version": VERSION, "name": scene.name, "dimension": scene.n, "walls": []}
    for w in S.walls.values():
        item = {"id": w.id, "normal": _arr(w.normal)}
        if w.ideal_vertices is not None:
            item["ideal_vertices"] = _arr(w.ideal_vertices)
        if w.witness is not None:
            item["witness"] = _arr(w.witness)
        doc["walls"].append(item)
    doc["pieces"] = [{"id": p.id, "bounding": [[w, s] for w, s in p.bounding], "witness": _arr(p.witness)}
                     for p in S.pieces.values()]
    doc["spines"] = [{"id": s.id, "endpoints": _arr(s.endpoints), "star": list(s.star)} for s in S.spines.values()]
    doc["weights"] = {k: _num(v) for k, v in scene.weights.items()}
    doc["base_piece"] = scene.base
    doc["frame"] = {"origin": _arr(scene.frame_origin if scene.frame_origin is not None else np.zeros(scene.n + 1))}
    if scene.group is not None:
        g = {"generators": [_arr(m) for m in scene.group.generators],
             "relations": [list(r) for r in scene.group.relations],
             "cocycle": [_arr(t) for t in scene.group.cocycle],
             "ball_radius": scene.ball_radius}
        if scene.core_radius is not None:
            g["core_radius"] = scene.core_radius
        if scene.base_point is not None:
            g["base_point"] = _arr(scene.base_point)
        doc["group"] = g
    if scene.tolerances:
        doc["tolerances"] = dict(scene.tolerances)
    return doc


def dumps(doc):
    return json.dumps(doc, indent=1, sort_keys=False)
