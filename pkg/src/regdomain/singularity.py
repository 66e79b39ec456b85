"""The initial singularity as a cell complex dual to the stratification.

One vertex ``rho_D`` per top piece, one spacelike segment of length ``a(P)``
per wall and, for ``n = 3``, one flat convex polygon per spine lying in the
spacelike plane orthogonal to the spine.  The path metric ``d_Sigma`` is exact
on trees (``n = 2``); on faces it is a Dijkstra upper bound over boundary
samples of spacing ``h`` joined by straight chords inside each face.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .lorentz import inner

SNAP = 1e-9


class SingularityError(ValueError):
    """Raised for inconsistent faces or points that are not on the complex."""


@dataclass
class FacePolygon:
    spine: str
    pieces: list
    walls: list
    lengths: np.ndarray
    angles: np.ndarray
    origin: np.ndarray
    basis: np.ndarray
    coords: np.ndarray
    closure: float

    def to_world(self, s):
        return self.origin + np.asarray(s) @ self.basis


@dataclass
class SingularityComplex:
    n: int
    vertices: dict
    edges: dict
    faces: dict = field(default_factory=dict)

    @property
    def adjacency(self):
        adj = {v: [] for v in self.vertices}
        for w, (a, b, _) in self.edges.items():
            adj[a].append((w, b))
            adj[b].append((w, a))
        return adj

    def edge_vector(self, wall):
        a, b, _ = self.edges[wall]
        return self.vertices[b] - self.vertices[a]


def spacelike_length(d):
    return float(np.sqrt(max(inner(d, d), 0.0)))


def assemble(S, a, positions):
    """Singularity complex of the stratification ``S`` with weights ``a``."""
    verts = {p: np.asarray(positions[p], dtype=float) for p in S.piece_ids}
    edges = {}
    for w, sides in S.wall_sides.items():
        A, B = sides[-1], sides[1]
        d = verts[B] - verts[A]
        L = spacelike_length(d)
        if abs(L - a[w]) > 1e-9 * max(1.0, a[w]):
            raise SingularityError(f"edge of wall {w} has length {L}, expected {a[w]}")
        # the edge is the atom a(w) n with n unit, so its exact length is a(w)
        edges[w] = (A, B, float(a[w]))
    faces = {}
    for sid, s in S.spines.items():
        b = S.spine_basis[sid]
        pieces, walls = s.pieces, s.walls
        q0 = verts[pieces[0]]
        coords = np.array([[inner(verts[p] - q0, b[0]), inner(verts[p] - q0, b[1])] for p in pieces])
        k = len(pieces)
        steps = np.array([coords[(i + 1) % k] - coords[i] for i in range(k)])
        lengths = np.array([a[w] for w in walls])
        u = S.star_normals(sid)
        closure = float(np.max(np.abs(lengths @ u)))
        if closure > 1e-7:
            raise SingularityError(f"face of spine {sid} does not close (residual {closure:.3e})")
        angles = []
        for i in range(k):
            e_in, e_out = -steps[i - 1], steps[i]
            c = e_in @ e_out / (np.linalg.norm(e_in) * np.linalg.norm(e_out))
            angles.append(float(np.arccos(np.clip(c, -1.0, 1.0))))
        faces[sid] = FacePolygon(sid, list(pieces), list(walls), lengths, np.array(angles), q0, b, coords, closure)
    return SingularityComplex(S.n, verts, edges, faces)


def build_singularity(D):
    """The singularity complex of a built regular domain."""
    return assemble(D.S, D.weights, D.positions)


# -- cell geometry -------------------------------------------------------------

def _polygon_orientation(poly):
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def project_polygon(b, poly):
    """Euclidean projection of the rows of ``b`` onto the convex polygon ``poly``."""
    b = np.atleast_2d(b)
    k = len(poly)
    area = _polygon_orientation(poly)
    out = np.empty_like(b)
    inside = np.zeros(len(b), dtype=bool)
    if abs(area) > 1e-14:
        sgn = np.sign(area)
        inside[:] = True
        for i in range(k):
            p, q = poly[i], poly[(i + 1) % k]
            e = q - p
            cr = e[0] * (b[:, 1] - p[1]) - e[1] * (b[:, 0] - p[0])
            inside &= sgn * cr >= 0
    out[inside] = b[inside]
    rest = ~inside
    if np.any(rest):
        best = np.full(rest.sum(), np.inf)
        pts = b[rest]
        proj = np.empty_like(pts)
        for i in range(k):
            p, q = poly[i], poly[(i + 1) % k]
            e = q - p
            ee = e @ e
            t = np.clip((pts - p) @ e / ee, 0.0, 1.0) if ee > 0 else np.zeros(len(pts))
            c = p + t[:, None] * e
            d = np.sum((pts - c) ** 2, axis=1)
            better = d < best
            best[better] = d[better]
            proj[better] = c[better]
        out[rest] = proj
    return out


@dataclass
class SigmaPoint:
    """A point of the complex together with the cell carrying it."""

    kind: str
    cell: str
    point: np.ndarray
    param: object = None


def locate_on_sigma(sigma, r, tol=SNAP):
    """Snap ``r`` to the lowest-dimensional cell within ``tol`` (relative)."""
    r = np.asarray(r, dtype=float)
    scale = max(1.0, float(np.max(np.abs(r))))
    for v, q in sigma.vertices.items():
        if np.max(np.abs(r - q)) <= tol * scale:
            return SigmaPoint("vertex", v, q.copy())
    for w, (A, B, L) in sigma.edges.items():
        d = sigma.vertices[B] - sigma.vertices[A]
        t = inner(r - sigma.vertices[A], d) / (L * L)
        if -tol <= t <= 1 + tol:
            t = float(np.clip(t, 0.0, 1.0))
            c = sigma.vertices[A] + t * d
            if np.max(np.abs(r - c)) <= tol * scale:
                return SigmaPoint("edge", w, c, t)
    for sid, f in sigma.faces.items():
        s = np.array([inner(r - f.origin, f.basis[0]), inner(r - f.origin, f.basis[1])])
        c = f.to_world(s)
        if np.max(np.abs(r - c)) <= tol * scale:
            sp = project_polygon(s, f.coords)[0]
            if np.max(np.abs(sp - s)) <= tol * scale:
                return SigmaPoint("face", sid, f.to_world(sp), sp)
    raise SingularityError("point is not on the singularity complex")


# -- path metric ---------------------------------------------------------------

class _Graph:
    def __init__(self):
        self.points = []
        self.rows, self.cols, self.wts = [], [], []

    def add(self, p):
        self.points.append(np.asarray(p, dtype=float))
        return len(self.points) - 1

    def link(self, i, j, d=None):
        if d is None:
            d = spacelike_length(self.points[i] - self.points[j])
        self.rows.append(i)
        self.cols.append(j)
        self.wts.append(max(d, 1e-300))

    def distances(self, sources):
        n = len(self.points)
        m = coo_matrix((self.wts, (self.rows, self.cols)), shape=(n, n)).tocsr()
        return dijkstra(m, directed=False, indices=sources)


def sigma_graph(sigma, queries=(), h=0.05):
    """Graph on the complex: vertices, edge samples, query points, face chords.

    Returns the graph and the node index of every query.
    """
    g = _Graph()
    vid = {v: g.add(q) for v, q in sigma.vertices.items()}
    located = [q if isinstance(q, SigmaPoint) else locate_on_sigma(sigma, q) for q in queries]
    qid = [None] * len(located)
    for i, sp in enumerate(located):
        if sp.kind == "vertex":
            qid[i] = vid[sp.cell]
    edge_nodes = {}
    for w, (A, B, L) in sigma.edges.items():
        nodes = [(0.0, vid[A]), (1.0, vid[B])]
        if sigma.n == 3 and sigma.faces:
            m = max(int(np.ceil(L / h)), 1)
            for k in range(1, m):
                t = k / m
                nodes.append((t, g.add(sigma.vertices[A] + t * (sigma.vertices[B] - sigma.vertices[A]))))
        for i, sp in enumerate(located):
            if sp.kind == "edge" and sp.cell == w:
                qid[i] = g.add(sp.point)
                nodes.append((sp.param, qid[i]))
        nodes.sort()
        for (s, i), (t, j) in zip(nodes, nodes[1:]):
            g.link(i, j, (t - s) * L)
        edge_nodes[w] = [j for _, j in nodes]
    for sid, f in sigma.faces.items():
        members = set()
        for w in f.walls:
            members.update(edge_nodes[w])
        for i, sp in enumerate(located):
            if sp.kind == "face" and sp.cell == sid:
                qid[i] = g.add(sp.point)
                members.add(qid[i])
        members = sorted(members)
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                g.link(members[x], members[y])
    return g, qid


def sigma_distance(sigma, r1, r2, h=0.05):
    """Path distance on the complex between two of its points; returns (distance, h)."""
    g, (i, j) = sigma_graph(sigma, [r1, r2], h)
    if i == j:
        return 0.0, h
    d = g.distances([i])[0, j]
    if not np.isfinite(d):
        raise SingularityError("points lie on different components of the complex")
    return float(d), h


def sigma_distance_matrix(sigma, points, h=0.05):
    """All pairwise d_Sigma among ``points`` from one graph build."""
    g, ids = sigma_graph(sigma, points, h)
    dist = g.distances(sorted(set(ids)))
    row = {k: r for r, k in enumerate(sorted(set(ids)))}
    return np.array([[dist[row[i], j] for j in ids] for i in ids])


# -- export --------------------------------------------------------------------

def _num(x):
    return float(format(float(x), ".17g"))


def complex_to_json(sigma):
    doc = {
        "vertices": {k: [_num(c) for c in v] for k, v in sigma.vertices.items()},
        "edges": [{"id": w, "endpoints": [A, B], "length": _num(L)} for w, (A, B, L) in sigma.edges.items()],
        "faces": [{"spine": f.spine, "vertices": f.pieces, "walls": f.walls,
                   "lengths": [_num(x) for x in f.lengths], "angles": [_num(x) for x in f.angles]}
                  for f in sigma.faces.values()],
    }
    return json.dumps(doc, indent=2)
