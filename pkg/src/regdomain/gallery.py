"""Built-in example scenes.

``cone``                 the trivial deformation, domain = future of 0
``single-geodesic-2d``   one weighted geodesic of H^2 (normal e2)
``two-geodesics-2d``     two ultraparallel geodesics
``quad-spine-3d``        four half-planes of H^3 meeting at right angles along a geodesic
``octagon-multicurve-2d`` lifts of one simple closed geodesic of the genus-2 octagon surface
"""

import numpy as np

from .domain import build_domain
from .holonomy import builtin_octagon_group, extend_cocycle
from .lorentz import inner, normalize_timelike
from .scene import FORMAT, VERSION, scene_from_dict, scene_to_dict

NAMES = ["cone", "single-geodesic-2d", "two-geodesics-2d", "quad-spine-3d", "octagon-multicurve-2d"]


def _doc(name, n, walls, pieces, weights, base, spines=(), group=None):
    doc = {"format": FORMAT, "version": VERSION, "name": name, "dimension": n,
           "walls": walls, "pieces": pieces, "spines": list(spines), "weights": weights,
           "base_piece": base, "frame": {"origin": [0.0] * (n + 1)}}
    if group is not None:
        doc["group"] = group
    return doc


def cone(n=2):
    doc = _doc("cone", n, [], [{"id": "H", "bounding": []}], {}, "H")
    P = builtin_octagon_group()
    if n == 2:
        doc["group"] = {"generators": [g.tolist() for g in P.generators], "relations": [list(r) for r in P.relations],
                        "cocycle": [[0.0] * 3 for _ in P.generators], "ball_radius": 4}
    return doc


def single_geodesic(w=1.0):
    return _doc("single-geodesic-2d", 2, [{"id": "g", "normal": [0.0, 0.0, 1.0]}],
                [{"id": "minus", "bounding": [["g", -1]]}, {"id": "plus", "bounding": [["g", 1]]}],
                {"g": float(w)}, "minus")


def two_geodesics(c=0.5, wa=1.0, wb=1.0):
    """Ultraparallel geodesics x2 = -tanh(c) x0 and x2 = tanh(c) x0, at distance 2c."""
    va = [-np.sinh(c), 0.0, np.cosh(c)]
    vb = [np.sinh(c), 0.0, np.cosh(c)]
    # A = {<x,va> <= 0}; M = {<x,va> >= 0, <x,vb> <= 0}; B = {<x,vb> >= 0}
    return _doc("two-geodesics-2d", 2,
                [{"id": "A", "normal": va}, {"id": "B", "normal": vb}],
                [{"id": "below", "bounding": [["A", -1]]},
                 {"id": "middle", "bounding": [["A", 1], ["B", -1]]},
                 {"id": "above", "bounding": [["B", 1]]}],
                {"A": float(wa), "B": float(wb)}, "middle")


def quad_spine(a=(1.0, 2.0, 1.0, 2.0)):
    e = np.eye(4).tolist()
    walls = [{"id": "P1", "normal": e[2]}, {"id": "P2", "normal": e[3]},
             {"id": "P3", "normal": e[2]}, {"id": "P4", "normal": e[3]}]
    pieces = [{"id": "D1", "bounding": [["P1", -1], ["P4", -1]]},
              {"id": "D2", "bounding": [["P1", 1], ["P2", -1]]},
              {"id": "D3", "bounding": [["P2", 1], ["P3", 1]]},
              {"id": "D4", "bounding": [["P3", -1], ["P4", 1]]}]
    spines = [{"id": "l", "endpoints": [[1.0, 1.0, 0.0, 0.0], [1.0, -1.0, 0.0, 0.0]],
               "star": ["D1", "P1", "D2", "P2", "D3", "P3", "D4", "P4"]}]
    return _doc("quad-spine-3d", 3, walls, pieces, dict(zip(["P1", "P2", "P3", "P4"], map(float, a))), "D1", spines)


def _canonical(v):
    if abs(v[0]) > 1e-9:
        return v if v[0] < 0 else -v
    k = int(np.argmax(np.abs(v[1:]) > 1e-9)) + 1
    return v if v[k] > 0 else -v


def multicurve_normals(P, L=4, core=6.0, curve=0):
    """Unit normals of the lifts of the axis of generator ``curve`` meeting the disc of radius ``core``."""
    ball = extend_cocycle(P, L)
    g = P.generators[curve]
    ev, vec = np.linalg.eig(g)
    # the axis of a boost conjugate is orthogonal to the eigenvector of eigenvalue 1
    k = int(np.argmin(np.abs(ev - 1.0)))
    v0 = np.real(vec[:, k])
    v0 = v0 / np.sqrt(inner(v0, v0))
    out = []
    for h in ball.elements:
        v = _canonical(h.linear @ v0)
        if abs(v[0]) < np.sinh(core) and not any(np.max(np.abs(v - u)) < 1e-7 for u in out):
            out.append(v)
    return sorted(out, key=lambda v: (abs(v[0]), np.arctan2(v[2], v[1])))


def lamination_pieces(normals):
    """Complementary regions of pairwise disjoint geodesics, as bounding lists.

    A region is a sign vector; the walls bounding it are those lying on the
    region's side of every other wall.
    """
    V = np.asarray(normals)
    m = len(V)
    ends = []
    for v in V:
        q = v[1:] @ v[1:]
        c = v[0] * v[1:] / q
        r = np.sqrt(max(1 - v[0] ** 2 / q, 0.0))
        perp = np.array([-v[2], v[1]]) / np.sqrt(q)
        ends.append(np.array([np.r_[1.0, c + r * perp], np.r_[1.0, c - r * perp]]))
    # side[i, j] = side of wall j (both endpoints) relative to wall i
    side = np.zeros((m, m), dtype=int)
    for i in range(m):
        for j in range(m):
            if i != j:
                s = np.sign(inner(ends[j], V[i][None, :]))
                side[i, j] = int(s[0]) if s[0] == s[1] or s[1] == 0 else int(s[1]) if s[0] == 0 else 0
    x0 = np.array([1.0, 0.0, 0.0])
    start = tuple(int(np.sign(inner(x0, v)) or 1) for v in V)
    seen = {start: 0}
    order = [start]
    k = 0
    while k < len(order):
        sig = order[k]
        k += 1
        for j in range(m):
            if all(side[i, j] == sig[i] for i in range(m) if i != j):
                nxt = list(sig)
                nxt[j] = -nxt[j]
                nxt = tuple(nxt)
                if nxt not in seen:
                    seen[nxt] = len(order)
                    order.append(nxt)
    pieces = []
    for sig in order:
        bnd = [j for j in range(m) if all(side[i, j] == sig[i] for i in range(m) if i != j)]
        pieces.append([(j, sig[j]) for j in bnd])
    return pieces


def octagon_multicurve(L=4, core=6.0, weight=1.0, base_point=None):
    P = builtin_octagon_group()
    normals = multicurve_normals(P, L, core)
    pieces = lamination_pieces(normals)
    walls = [{"id": f"c{i}", "normal": v.tolist()} for i, v in enumerate(normals)]
    pdocs = [{"id": f"R{k}", "bounding": [[f"c{j}", s] for j, s in b]} for k, b in enumerate(pieces)]
    weights = {f"c{i}": float(weight) for i in range(len(normals))}
    doc = _doc("octagon-multicurve-2d", 2, walls, pdocs, weights, "R0")
    # base point slightly off the curve so that every generator image avoids the walls
    x0 = normalize_timelike(np.array([1.0, 0.05, 0.13])) if base_point is None else np.asarray(base_point, float)
    scene = scene_from_dict(doc)
    D = build_domain(scene.complex, scene.weights, scene.base)
    tau = D.holonomy_cocycle(P, x0)
    doc["group"] = {"generators": [g.tolist() for g in P.generators], "relations": [list(r) for r in P.relations],
                    "cocycle": [t.tolist() for t in tau], "ball_radius": L, "core_radius": core,
                    "base_point": x0.tolist()}
    return doc


def emit(name, **kw):
    """Scene document of a gallery fixture (normalised through a parse/serialize round trip)."""
    makers = {"cone": cone, "single-geodesic-2d": single_geodesic, "two-geodesics-2d": two_geodesics,
              "quad-spine-3d": quad_spine, "octagon-multicurve-2d": octagon_multicurve}
    if name not in makers:
        raise KeyError(f"unknown gallery scene {name!r}; choose from {', '.join(NAMES)}")
    return scene_to_dict(scene_from_dict(makers[name](**kw)))


def load(name, **kw):
    return scene_from_dict(emit(name, **kw))


def domain_of(scene):
    return build_domain(scene.complex, scene.weights, scene.base)
