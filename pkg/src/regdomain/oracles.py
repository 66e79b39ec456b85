"""Brute-force reference computations, independent of the closed-form solvers.

These are slow on purpose: cosmological time by grid search over the
singularity cells, membership and boundary height by dense sampling of ideal
directions, level distances by Dijkstra on a fine sample graph.  They
produce the frozen reference values shipped with the tests.
"""

import json

import numpy as np

from .asymptotics import build_level_graph, graph_distances
from .lorentz import hyp_distance, inner, normalize_timelike
from .singularity import project_polygon


def ideal_samples(S, pid, count=20000):
    """Ideal points (rows ``u`` of S^{n-1}) of piece ``pid`` from a dense sphere sample."""
    if S.n == 2:
        th = np.linspace(0, 2 * np.pi, count, endpoint=False)
        u = np.c_[np.cos(th), np.sin(th)]
    else:
        k = np.arange(count) + 0.5
        phi = np.arccos(1 - 2 * k / count)
        th = np.pi * (3 - 5 ** 0.5) * k
        u = np.c_[np.cos(th) * np.sin(phi), np.sin(th) * np.sin(phi), np.cos(phi)]
    cons = S.piece_constraints[pid]
    if len(cons):
        vals = np.c_[np.ones(len(u)), u] @ (cons * np.r_[-1.0, np.ones(S.n)]).T
        u = u[np.all(vals >= 0, axis=1)]
    return u


def support_oracle(D, p, count=20000):
    """max over sampled support planes of <p - rho_D, (1, u)> (a lower bound of the true max)."""
    p = np.asarray(p, float)
    best = -np.inf
    for pid in D.S.piece_ids:
        u = ideal_samples(D.S, pid, count)
        r = D.positions[pid]
        if len(u):
            best = max(best, float(np.max(u @ (p[1:] - r[1:]) - (p[0] - r[0]))))
    return best


def psi_oracle(D, y, count=20000):
    y = np.asarray(y, float)
    best = -np.inf
    for pid in D.S.piece_ids:
        u = ideal_samples(D.S, pid, count)
        r = D.positions[pid]
        if len(u):
            best = max(best, float(np.max(r[0] + u @ (y - r[1:]))))
    return best


def cell_samples(D, res=2000):
    """Dense samples of the singularity: vertices, edge grids and face grids."""
    pts = [q for q in D.sigma.vertices.values()]
    for A, B, _ in D.sigma.edges.values():
        t = np.linspace(0, 1, res)[:, None]
        pts.extend((1 - t) * D.sigma.vertices[A] + t * D.sigma.vertices[B])
    for f in D.sigma.faces.values():
        lo, hi = f.coords.min(axis=0), f.coords.max(axis=0)
        m = int(np.sqrt(res)) * 4
        g = np.stack(np.meshgrid(np.linspace(lo[0], hi[0], m), np.linspace(lo[1], hi[1], m)), -1).reshape(-1, 2)
        g = g[np.all(np.abs(project_polygon(g, f.coords) - g) < 1e-12, axis=1)]
        pts.extend(f.to_world(g))
    return np.array(pts)


def ct_oracle(D, p, res=2000):
    """Grid maximisation of the Lorentzian distance from the singularity; returns (T, r)."""
    q = cell_samples(D, res)
    d = np.asarray(p, float) - q
    val = -inner(d, d)
    ok = (val > 0) & (d[:, 0] > 0)
    if not np.any(ok):
        return 0.0, None
    i = int(np.argmax(np.where(ok, val, -np.inf)))
    return float(np.sqrt(val[i])), q[i]


def level_distance_oracle(D, a, x, y, h=0.02, radius=None):
    """Dijkstra on a fine sample graph of the level surface (all walls)."""
    centre = normalize_timelike(np.asarray(x, float) + np.asarray(y, float))
    rad = float(hyp_distance(x, y)) / 2 + 1.0 if radius is None else radius
    g = build_level_graph(D, a, centre, rad, h, extra=[x, y])
    dist, _ = graph_distances(g, [len(g.x) - 2])
    return float(dist[0, len(g.x) - 1])


def fixture_queries(name):
    """Fixed query points per gallery scene (used for the frozen oracle files)."""
    rng = np.random.default_rng(20261017)
    n = 3 if name == "quad-spine-3d" else 2
    pts = []
    for _ in range(6):
        y = rng.uniform(-1.5, 1.5, n)
        pts.append(np.r_[np.linalg.norm(y) + rng.uniform(0.3, 2.0) + 1.5, y])
    return np.array(pts)


def regen_oracles(name, D, out_path=None):
    """Recompute the reference values for one gallery scene."""
    P = fixture_queries(name)
    rows = []
    for p in P:
        T, r = ct_oracle(D, p)
        rows.append({"p": p.tolist(), "T": T, "r": None if r is None else r.tolist(),
                     "support": support_oracle(D, p), "psi": psi_oracle(D, p[1:])})
    doc = {"scene": name, "queries": rows}
    if out_path is not None:
        with open(out_path, "w") as fh:
            json.dump(doc, fh, indent=1)
    return doc
