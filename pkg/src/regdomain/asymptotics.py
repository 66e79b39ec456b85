"""Level surfaces of the cosmological time and their intrinsic distances.

The level surface ``T = a`` splits into regions indexed by the cells ``C``
of the stratification: ``{r + a x : x in C, r in C*}`` with ``C*`` the dual
cell of the singularity.  Each region carries the product metric
``a^2 d_H^2 + |dr|^2``, and within one region the straight path (geodesic in
the stratum cell times segment in the dual cell) is shortest.

Distances are computed by Dijkstra over boundary samples of the regions,
with all-pairs links inside every region.  For ``n = 2`` the path crosses
the separating walls in dual-tree order, and the crossing parameters are then
optimised exactly (the length is a convex function of them).
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import Delaunay, cKDTree

from .lorentz import (classify_isometry, exp_map, hyp_distance, inner, lorentz_cross, normalize_timelike, origin,
                      tangent_basis, translation_length_hyp)
from .singularity import sigma_distance

BUDGET = 0.03


class WindowError(ValueError):
    """Raised when query points fall outside the sampled window."""


# -- wall and spine parametrisations -------------------------------------------

def wall_frame(v):
    """Foot point of the origin on the carrier of ``v`` and a tangent basis of the carrier."""
    v = np.asarray(v, dtype=float)
    e0 = origin(len(v) - 1)
    f = (e0 + v[0] * v) / np.sqrt(1.0 + v[0] ** 2)
    if len(v) == 3:
        return f, lorentz_cross(f, v)[None, :]
    basis = []
    for k in range(1, 4):
        e = np.zeros(4)
        e[k] = 1.0
        e = e + inner(e, f) * f - inner(e, v) * v
        for b in basis:
            e = e - inner(e, b) * b
        q = inner(e, e)
        if q > 1e-8:
            basis.append(e / np.sqrt(q))
        if len(basis) == 2:
            break
    return f, np.array(basis)


def geodesic_point(f, u, t):
    t = np.asarray(t, dtype=float)
    return np.cosh(t)[..., None] * f + np.sinh(t)[..., None] * u


def _wall_samples(D, wid, centre, radius, h):
    """Points of wall ``wid`` within ``radius`` of ``centre`` (n = 2: arclength grid)."""
    f, U = wall_frame(D.S.walls[wid].normal)
    if D.n == 2:
        u = U[0]
        # parameter of the closest point to centre, then a symmetric window
        t0 = float(np.arctanh(np.clip(inner(centre, u) / -inner(centre, f), -1 + 1e-15, 1 - 1e-15)))
        m = max(int(np.ceil(radius / h)), 1)
        ts = t0 + np.linspace(-radius, radius, 2 * m + 1)
        pts = geodesic_point(f, u, ts)
        return pts[hyp_distance(pts, centre[None, :]) <= radius + 1e-12]
    pts = [f]
    steps = max(int(np.ceil(radius / h)), 1)
    for i in range(1, 2 * steps + 4):
        rho = i * h
        k = max(int(np.ceil(2 * np.pi * np.sinh(rho) / h)), 6)
        th = np.linspace(0, 2 * np.pi, k, endpoint=False)
        dirs = np.cos(th)[:, None] * U[0] + np.sin(th)[:, None] * U[1]
        pts.extend(np.cosh(rho) * f + np.sinh(rho) * dirs)
        if rho > hyp_distance(f, centre) + radius:
            break
    pts = np.array(pts)
    pts = pts[hyp_distance(pts, centre[None, :]) <= radius]
    keep = [D.S.on_wall(wid, x, 1e-9) for x in pts]
    return pts[np.array(keep, dtype=bool)] if len(pts) else pts


def _spine_samples(D, sid, centre, radius, h):
    s = D.S.spines[sid]
    e1, e2 = s.endpoints
    f = normalize_timelike(e1 + e2)
    u = (e1 - e2) / np.sqrt(2 * max(-inner(e1, e2), 1e-300))
    u = u + inner(u, f) * f
    u = u / np.sqrt(inner(u, u))
    t0 = float(np.arctanh(np.clip(inner(centre, u) / -inner(centre, f), -1 + 1e-15, 1 - 1e-15)))
    m = max(int(np.ceil(radius / h)), 1)
    pts = geodesic_point(f, u, t0 + np.linspace(-radius, radius, 2 * m + 1))
    return pts[hyp_distance(pts, centre[None, :]) <= radius + 1e-12]


# -- distance graph ------------------------------------------------------------

@dataclass
class LevelGraph:
    a: float
    x: np.ndarray
    r: np.ndarray
    regions: list
    h: float
    edges: np.ndarray = None
    weights: np.ndarray = None

    @property
    def points(self):
        return self.r + self.a * self.x


def _cost(a, x1, r1, x2, r2):
    dh = hyp_distance(x1, x2)
    dr = r1 - r2
    q = np.maximum(inner(dr, dr), 0.0)
    return np.sqrt(a * a * dh * dh + q)


def build_level_graph(D, a, centre, radius, h, walls=None, extra=()):
    """Sample nodes ``(x, r)`` on region boundaries and link all pairs inside each region."""
    S = D.S
    walls = S.wall_ids if walls is None else walls
    xs, rs, regs = [], [], []

    def node(x, r, reg):
        xs.append(x)
        rs.append(r)
        regs.append(reg)

    for w in walls:
        A, B = S.wall_sides[w][-1], S.wall_sides[w][1]
        for x in _wall_samples(D, w, centre, radius, h):
            node(x, D.positions[A], {("piece", A), ("band", w)})
            node(x, D.positions[B], {("piece", B), ("band", w)})
    for sid, face in D.sigma.faces.items():
        if walls is not S.wall_ids and not set(face.walls) & set(walls):
            continue
        k = len(face.pieces)
        bpts = []
        for i in range(k):
            p, q = face.coords[i], face.coords[(i + 1) % k]
            m = max(int(np.ceil(face.lengths[i] / h)), 1)
            for j in range(m):
                reg = {("band", face.walls[i]), ("spine", sid)}
                if j == 0:
                    reg = reg | {("piece", face.pieces[i]), ("band", face.walls[i - 1])}
                bpts.append((face.to_world(p + (j / m) * (q - p)), reg))
        for y in _spine_samples(D, sid, centre, radius, h):
            for r, reg in bpts:
                node(y, r, reg)
    for x in extra:
        pid = S.top_piece(x)
        node(np.asarray(x, float), D.positions[pid], {("piece", pid)})
    x = np.array(xs).reshape(-1, S.n + 1)
    r = np.array(rs).reshape(-1, S.n + 1)
    members = {}
    for i, reg in enumerate(regs):
        for key in reg:
            members.setdefault(key, []).append(i)
    rows, cols = [], []
    for key, idx in members.items():
        idx = np.array(idx)
        if len(idx) < 2:
            continue
        ii, jj = np.triu_indices(len(idx), 1)
        rows.append(idx[ii])
        cols.append(idx[jj])
    if rows:
        e = np.unique(np.c_[np.concatenate(rows), np.concatenate(cols)], axis=0)
        wts = _cost(a, x[e[:, 0]], r[e[:, 0]], x[e[:, 1]], r[e[:, 1]])
    else:
        e, wts = np.zeros((0, 2), int), np.zeros(0)
    return LevelGraph(a, x, r, regs, h, e, wts)


def graph_distances(g, sources):
    n = len(g.x)
    m = coo_matrix((np.maximum(g.weights, 1e-300), (g.edges[:, 0], g.edges[:, 1])), shape=(n, n)).tocsr()
    return dijkstra(m, directed=False, indices=sources, return_predecessors=True)


# -- exact shortening in dimension 2 ---------------------------------------------

def _crossing_walls(D, x, y):
    """Separating walls between the pieces of x and y, with their from-pieces, in order."""
    A, B = D.S.top_piece(x), D.S.top_piece(y)
    out, cur = [], A
    for w, q in D.S.dual_path(A, B):
        out.append((w, cur, q))
        cur = q
    return out


def _darc(p, q):
    """Hyperbolic distance and its gradient factor d/d<p,q> (safe at coincidence)."""
    c = np.maximum(-inner(p, q), 1.0)
    s = np.sqrt(np.maximum(c * c - 1.0, 1e-300))
    return np.arccosh(c), s


class _ChainLength:
    """Length of the level-surface path crossing walls W_1..W_k at parameters (t^-, t^+)."""

    def __init__(self, D, a, x, y, crossings):
        self.a = a
        self.x, self.y = np.asarray(x, float), np.asarray(y, float)
        self.frames = [wall_frame(D.S.walls[w].normal) for w, _, _ in crossings]
        self.w = np.array([D.weights[w] for w, _, _ in crossings])

    def point(self, i, t):
        f, U = self.frames[i]
        return np.cosh(t) * f + np.sinh(t) * U[0], np.sinh(t) * f + np.cosh(t) * U[0]

    def __call__(self, z):
        a, k = self.a, len(self.w)
        tm, tp = z[:k], z[k:]
        grad = np.zeros(2 * k)
        total = 0.0
        prev, prev_d, prev_i = self.x, None, None
        for i in range(k):
            q, dq = self.point(i, tm[i])
            d, s = _darc(prev, q)
            total += a * d
            grad[i] += a * (-inner(prev, dq)) / s
            if prev_i is not None:
                grad[k + prev_i] += a * (-inner(q, prev_d)) / s
            dt = tm[i] - tp[i]
            band = np.sqrt(a * a * dt * dt + self.w[i] ** 2)
            total += band
            grad[i] += a * a * dt / band
            grad[k + i] -= a * a * dt / band
            prev, prev_d = self.point(i, tp[i])
            prev_i = i
        d, s = _darc(prev, self.y)
        total += a * d
        if prev_i is not None:
            grad[k + prev_i] += a * (-inner(self.y, prev_d)) / s
        return float(total), grad


def _geodesic_crossing_params(D, x, y, crossings):
    """Parameters where the hyperbolic segment from x to y meets each separating wall."""
    ts = []
    for w, _, _ in crossings:
        v = D.S.walls[w].normal
        al, be = inner(x, v), inner(y, v)
        s = al / (al - be) if al != be else 0.5
        z = normalize_timelike((1 - s) * x + s * y)
        f, U = wall_frame(v)
        ts.append(float(np.arctanh(np.clip(inner(z, U[0]) / -inner(z, f), -1 + 1e-15, 1 - 1e-15))))
    return np.array(ts)


@dataclass
class DistanceResult:
    value: float
    h: float
    graph_value: float
    method: str
    params: np.ndarray = None


def _window(x, y, margin=1.0):
    c = normalize_timelike(np.asarray(x, float) + np.asarray(y, float))
    return c, float(hyp_distance(x, y)) / 2 + margin


def intrinsic_distance(D, a, x, y, h=0.1, radius=None):
    """Distance on the level surface T = a between the points with normals x and y.

    Returns a :class:`DistanceResult`; the value is the length of an explicit
    path and hence an upper bound (exact up to optimiser tolerance for n = 2).
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    if a <= 0:
        raise ValueError("level must be positive")
    if np.max(np.abs(x - y)) == 0:
        return DistanceResult(0.0, h, 0.0, "trivial")
    centre, rad = _window(x, y)
    if radius is not None:
        rad = radius
    if D.n == 2:
        crossings = _crossing_walls(D, x, y)
        walls = [w for w, _, _ in crossings]
        if not walls:
            d = float(a * hyp_distance(x, y))
            return DistanceResult(d, h, d, "exact")
        g = build_level_graph(D, a, centre, rad, h, walls=walls, extra=[x, y])
        ix, iy = len(g.x) - 2, len(g.x) - 1
        dist, _ = graph_distances(g, [ix])
        gval = float(dist[0, iy])
        fun = _ChainLength(D, a, x, y, crossings)
        t0 = _geodesic_crossing_params(D, x, y, crossings)
        z0 = np.r_[t0, t0]
        best = fun(z0)[0]
        res = minimize(fun, z0, jac=True, method="L-BFGS-B", options={"gtol": 1e-11, "ftol": 1e-15, "maxiter": 2000})
        val = min(best, float(res.fun), gval)
        return DistanceResult(val, h, gval, "shortened", res.x)
    g = build_level_graph(D, a, centre, rad, h, extra=[x, y])
    ix, iy = len(g.x) - 2, len(g.x) - 1
    dist, _ = graph_distances(g, [ix])
    gval = float(dist[0, iy])
    if not np.isfinite(gval):
        raise WindowError("query points are not connected inside the sampled window")
    return DistanceResult(gval, h, gval, "graph")


# -- meshes --------------------------------------------------------------------

@dataclass
class LevelMesh:
    a: float
    h: float
    vertices: np.ndarray
    normals: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray = field(default=None)

    def edge_lengths(self):
        d = self.vertices[self.edges[:, 0]] - self.vertices[self.edges[:, 1]]
        return np.sqrt(np.maximum(inner(d, d), 0.0)), inner(d, d)


def _tri_edges(tris):
    e = np.r_[tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [0, 2]]]
    return np.unique(np.sort(e, axis=1), axis=0)


def level_mesh(D, a, h, radius=2.0, centre=None):
    """Mesh of the level surface T = a over the window of normals within ``radius`` of ``centre``."""
    centre = origin(D.n) if centre is None else np.asarray(centre, float)
    if D.n == 3:
        g = build_level_graph(D, a, centre, radius, h)
        return LevelMesh(a, h, g.points, g.x, np.zeros((0, 3), int), g.edges)
    S = D.S
    verts, norms, tris = [], [], []

    def add(points, normals):
        start = len(verts)
        verts.extend(points)
        norms.extend(normals)
        return start

    # interior of the window: polar grid of normals
    rings = max(int(np.ceil(radius / h)), 1)
    grid = [centre]
    tb = tangent_basis(centre)
    for i in range(1, rings + 1):
        rr = radius * i / rings
        k = max(int(np.ceil(2 * np.pi * np.sinh(rr) / h)), 6)
        th = np.linspace(0, 2 * np.pi, k, endpoint=False)
        dirs = np.cos(th)[:, None] * tb[0] + np.sin(th)[:, None] * tb[1]
        grid.extend(np.cosh(rr) * centre + np.sinh(rr) * dirs)
    grid = np.array(grid)
    wall_pts = {w: _wall_samples(D, w, centre, radius, h) for w in S.wall_ids}
    for pid in S.piece_ids:
        cons = S.piece_constraints[pid]
        inside = grid if len(cons) == 0 else grid[np.all(inner(grid[:, None, :], cons[None, :, :]) > 1e-6, axis=1)]
        bnd = [wall_pts[w] for w, _ in S.pieces[pid].bounding if len(wall_pts[w])]
        pts = np.vstack([inside] + bnd) if bnd else inside
        if len(pts) < 3:
            continue
        klein = pts[:, 1:] / pts[:, :1]
        try:
            tri = Delaunay(klein).simplices
        except Exception:
            continue
        cen = normalize_timelike(pts[tri].mean(axis=1))
        ok = hyp_distance(cen, centre[None, :]) <= radius
        if len(cons):
            ok &= np.all(inner(cen[:, None, :], cons[None, :, :]) >= -1e-12, axis=1)
        start = add(D.positions[pid] + a * pts, pts)
        tris.extend(tri[ok] + start)
    for w in S.wall_ids:
        pts = wall_pts[w]
        if len(pts) < 2:
            continue
        A, B = S.wall_sides[w][-1], S.wall_sides[w][1]
        m = max(int(np.ceil(D.weights[w] / h)), 1)
        rows = []
        for j in range(m + 1):
            r = D.positions[A] + (j / m) * (D.positions[B] - D.positions[A])
            rows.append(add(r + a * pts, pts))
        L = len(pts)
        for j in range(m):
            for i in range(L - 1):
                p0, p1 = rows[j] + i, rows[j] + i + 1
                q0, q1 = rows[j + 1] + i, rows[j + 1] + i + 1
                tris.append([p0, p1, q1])
                tris.append([p0, q1, q0])
    V = np.array(verts)
    Nn = np.array(norms)
    T = np.array(tris, dtype=int).reshape(-1, 3)
    # merge coincident vertices shared between regions
    tree = cKDTree(V)
    pairs = tree.query_pairs(1e-9, output_type="ndarray")
    rep = np.arange(len(V))
    for i, j in sorted(map(tuple, pairs)):
        rep[j] = rep[i] if rep[i] < i else i
    keep, inv = np.unique(rep, return_inverse=True)
    T = inv[T]
    T = T[(T[:, 0] != T[:, 1]) & (T[:, 1] != T[:, 2]) & (T[:, 0] != T[:, 2])]
    return LevelMesh(a, h, V[keep], Nn[keep], T, _tri_edges(T) if len(T) else np.zeros((0, 2), int))


def mesh_to_obj(mesh):
    out = io.StringIO()
    out.write(f"# level surface a={mesh.a:.17g} h={mesh.h:.17g}\n")
    for v in mesh.vertices:
        # n = 2: (x1, x2, time); n = 3: spatial part only
        coords = list(v[1:]) + [v[0]] if len(v) == 3 else list(v[1:])
        out.write("v " + " ".join(f"{c:.17g}" for c in coords) + "\n")
    for t in mesh.triangles:
        out.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")
    if not len(mesh.triangles):
        for e in mesh.edges:
            out.write(f"l {e[0] + 1} {e[1] + 1}\n")
    return out.getvalue()


# -- experiments ---------------------------------------------------------------

def convergence_report(D, pairs, a_list, h=0.1, budget=BUDGET):
    """Distances d_a for every pair and level, with the sandwich checks of the levels.

    Returns ``(rows, violations)``; rows carry pair id, a, d_a, d_a/a, d_H,
    d_sigma, h and budget.
    """
    a_list = sorted(a_list)
    rows, violations = [], []
    for pid, (x, y) in enumerate(pairs):
        dH = float(hyp_distance(x, y))
        dS, _ = sigma_distance(D.sigma, D.rho_at(x), D.rho_at(y), h)
        da = {a: intrinsic_distance(D, a, x, y, h).value for a in a_list}
        for a in a_list:
            rows.append({"pair": pid, "a": a, "d_a": da[a], "d_a_over_a": da[a] / a, "d_H": dH,
                         "d_sigma": dS, "h": h, "budget": budget})
        for i, lo in enumerate(a_list):
            for hi in a_list[i + 1:]:
                tol = budget * max(da[hi], 1e-12)
                if da[lo] > da[hi] + tol:
                    violations.append((pid, lo, hi, "d_a <= d_b"))
                if dH > da[hi] / hi + budget * dH:
                    violations.append((pid, lo, hi, "d_H <= d_b/b"))
                if da[hi] / hi > da[lo] / lo + budget * da[lo] / lo:
                    violations.append((pid, lo, hi, "d_b/b <= d_a/a"))
    return rows, violations


def report_csv(rows):
    out = io.StringIO()
    cols = ["pair", "a", "d_a", "d_a_over_a", "d_H", "d_sigma", "h", "budget"]
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(cols)
    for r in rows:
        wr.writerow([r[c] if isinstance(r[c], int) else f"{r[c]:.17g}" for c in cols])
    return out.getvalue()


@dataclass
class SpectrumEntry:
    word: tuple
    ell_hyp: float
    ell_sigma: float
    ell_a: dict
    samples: int


def axis_samples(g, count):
    """Points on the axis of hyperbolic ``g`` covering one period."""
    c = classify_isometry(g)
    e1, e2 = c.attracting, c.repelling
    f = normalize_timelike(e1 + e2)
    u = e1 - e2
    u = u + inner(u, f) * f
    u = u / np.sqrt(inner(u, u))
    ell = np.log(c.lam)
    return geodesic_point(f, u, np.linspace(-ell / 2, ell / 2, count))


def spectrum(D, datum, a_list, samples=200, h=0.1, rng=None, extra_points=None):
    """Sampled translation lengths of ``datum`` on H^n, on the singularity and on level surfaces.

    ``datum`` is a :class:`~regdomain.holonomy.HolonomyDatum`; all values are
    minima over samples and so upper bounds of the infima.
    """
    g = datum.linear
    if not datum.word:
        return SpectrumEntry((), 0.0, 0.0, {a: 0.0 for a in a_list}, 0)
    ell_h = translation_length_hyp(g)
    rng = np.random.default_rng(0) if rng is None else rng
    n_axis = max(samples // 2, 2)
    pts = list(axis_samples(g, n_axis))
    while len(pts) < samples:
        x = pts[rng.integers(n_axis)]
        tb = tangent_basis(x)
        pts.append(exp_map(x, 0.3 * rng.normal(size=len(tb)) @ tb))
    if extra_points is not None:
        pts.extend(extra_points)
    good = [x for x in pts if D.S.locate(x).dim == D.n and D.S.locate(g @ x).dim == D.n]
    ell_s = np.inf
    seen = set()
    for x in good:
        pid = D.S.top_piece(x)
        if pid in seen:
            continue
        seen.add(pid)
        r1 = D.positions[pid]
        r2 = D.rho_at(g @ x)
        if np.max(np.abs(datum.linear @ r1 + datum.tau - r2)) > 1e-8:
            raise WindowError("singularity is not equivariant at the sampled points; enlarge the core region")
        d, _ = sigma_distance(D.sigma, r1, r2, h)
        ell_s = min(ell_s, d)
    ell_a = {}
    for a in a_list:
        ell_a[a] = min(intrinsic_distance(D, a, x, g @ x, h).value for x in good)
    return SpectrumEntry(tuple(datum.word), ell_h, float(ell_s), ell_a, len(good))
