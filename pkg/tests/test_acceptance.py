"""Acceptance criteria 1-12.

Each test records one PASS/FAIL line (printed in the terminal summary and to
stdout) and then asserts.  Run directly with ``python tests/test_acceptance.py``.
"""

import collections
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE, domain, interior_points, scene
from regdomain import gallery
from regdomain.asymptotics import BUDGET, convergence_report, spectrum
from regdomain.holonomy import coboundary, extend_cocycle
from regdomain.lorentz import (boost, hyp_distance, inner, lorentz_matrix, loxodromic_fixed_point,
                               random_hyperboloid_points, rotation)
from regdomain.measure import PathError, path_measure
from regdomain.stratification import solve_weights, weight_residuals

ALL = gallery.NAMES
LEVELS = [0.01, 0.1, 1, 10, 100]


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def random_pairs(rng, m, radius):
    pts = random_hyperboloid_points(rng, 2, 2 * m, radius)
    return [(pts[2 * i], pts[2 * i + 1]) for i in range(m)]


def test_01_cone_exactness():
    t0 = time.perf_counter()
    D = domain("cone")
    rng = np.random.default_rng(1)
    y = rng.uniform(-3, 3, size=(10_000, 2))
    p = np.c_[np.linalg.norm(y, axis=1) + rng.uniform(0.01, 3.0, 10_000), y]
    T, r, N, _ = D.ct_batch(p)
    T0 = np.sqrt(p[:, 0] ** 2 - np.sum(y ** 2, axis=1))
    err = max(np.max(np.abs(T - T0) / T0), np.max(np.abs(r)), np.max(np.abs(N - p / T0[:, None])))
    inside = bool(np.all(D.contains(p)))
    dt = time.perf_counter() - t0
    record(1, err < 1e-9 and inside and dt < 5, f"max err {err:.2e} on 1e4 points, all inside={inside}, {dt:.2f}s")


def test_02_gradient():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst, h = 0.0, 1e-6
    for name in ALL:
        D = domain(name)
        p = interior_points(D, rng, 1000)
        u = rng.normal(size=p.shape)
        u /= np.linalg.norm(u, axis=1)[:, None]
        fd = (D.T(p + h * u) - D.T(p - h * u)) / (2 * h)
        _, _, N, _ = D.ct_batch(p)
        worst = max(worst, float(np.max(np.abs(fd - inner(-N, u)))))
    dt = time.perf_counter() - t0
    record(2, worst < 1e-5 and dt < 30, f"max |FD - <-N,u>| {worst:.2e} over {len(ALL)}x1e3 samples, {dt:.1f}s")


def test_03_concavity_and_support():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    conc = supp = mono = -np.inf
    for name in ALL:
        D = domain(name)
        p = interior_points(D, rng, 1000)
        q = interior_points(D, rng, 1000)
        Tp, rp, Np, _ = D.ct_batch(p)
        Tq, rq, Nq, _ = D.ct_batch(q)
        for t in (0.25, 0.5, 0.75):
            m = D.T((1 - t) * p + t * q)
            conc = max(conc, float(np.max((1 - t) * Tp + t * Tq - m)))
        # the plane r(p) + N(p)^perp supports the domain
        supp = max(supp, float(np.max(inner(q, p - rp) - inner(rp, p - rp))))
        mono = max(mono, float(np.max(-inner(Tp[:, None] * Np - Tq[:, None] * Nq, rp - rq))))
    dt = time.perf_counter() - t0
    ok = conc < 1e-9 and supp < 1e-9 and mono < 1e-9 and dt < 30
    record(3, ok, f"concavity {conc:.1e}, support {supp:.1e}, pairing {mono:.1e} (all must be < 1e-9), {dt:.1f}s")


def test_04_boundary_height():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    lip = conv = -np.inf
    for name in ALL:
        D = domain(name)
        a = rng.uniform(-3, 3, size=(1000, D.n))
        b = rng.uniform(-3, 3, size=(1000, D.n))
        pa, pb = D.boundary_height(a), D.boundary_height(b)
        lip = max(lip, float(np.max(np.abs(pa - pb) - np.linalg.norm(a - b, axis=1))))
        t = rng.uniform(size=1000)
        pm = D.boundary_height((1 - t)[:, None] * a + t[:, None] * b)
        conv = max(conv, float(np.max(pm - (1 - t) * pa - t * pb)))
    dt = time.perf_counter() - t0
    record(4, lip < 1e-9 and conv < 1e-9 and dt < 10, f"Lipschitz excess {lip:.1e}, convexity excess {conv:.1e}, {dt:.1f}s")


def test_05_weight_algebra():
    t0 = time.perf_counter()
    S = domain("quad-spine-3d").S
    sol = solve_weights(S)
    f, e = len(S.walls), len(S.spines)
    res_w = max(float(np.max(np.abs(v))) for v in weight_residuals(S, sol.witness).values())
    res_b = max(float(np.max(np.abs(weight_residuals(S, dict(zip(S.wall_ids, c)))["l"])))
                for c in sol.basis.T)
    face = next(iter(domain("quad-spine-3d").sigma.faces.values()))
    rect = np.array([[0, 0], [1, 0], [1, 2], [0, 2]], float)
    shape_err = float(np.max(np.abs(face.coords - rect)))
    ang_err = float(np.max(np.abs(np.asarray(face.angles) - np.pi / 2)))
    dt = time.perf_counter() - t0
    ok = (sol.cone_dim == 2 == f - 2 * e and res_w < 1e-12 and res_b < 1e-12 and face.closure < 1e-12
          and shape_err < 1e-12 and ang_err < 1e-12 and dt < 1)
    record(5, ok, f"cone dim {sol.cone_dim} (f-2e={f - 2 * e}), witness residual {res_w:.1e}, "
                  f"closure {face.closure:.1e}, rectangle err {shape_err:.1e}, {dt:.2f}s")


def test_06_duality_round_trip():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for name in ALL:
        D = domain(name)
        xs = [x for x in random_hyperboloid_points(rng, D.n, 1200, 2.0) if D.S.locate(x).dim == D.n][:1000]
        rho = np.array([D.rho_at(x) for x in xs])
        for a in (0.5, 2.0):
            _, r, N, _ = D.ct_batch(rho + a * np.array(xs))
            worst = max(worst, float(np.max(np.abs(r - rho))), float(np.max(np.abs(N - xs))))
    dt = time.perf_counter() - t0
    record(6, worst < 1e-9 and dt < 30, f"max round-trip error {worst:.1e} over {len(ALL)}x1e3 normals, {dt:.1f}s")


def _convergence(name, seed):
    D = domain(name)
    radius = 1.2 if name == "single-geodesic-2d" else 2.5
    pairs = random_pairs(np.random.default_rng(seed), 50, radius)
    rows, bad = convergence_report(D, pairs, LEVELS, h=0.1)
    by = collections.defaultdict(dict)
    for r in rows:
        by[r["pair"]][r["a"]] = r
    return by, bad


@pytest.fixture(scope="module")
def convergence_tables():
    t0 = time.perf_counter()
    out = {name: _convergence(name, 7) for name in ("single-geodesic-2d", "octagon-multicurve-2d")}
    return out, time.perf_counter() - t0


def test_07_sandwich(convergence_tables):
    tables, dt = convergence_tables
    bad = sum(len(b) for _, b in tables.values())
    crossed = sum(1 for by, _ in tables.values() for d in by.values() if d[1]["d_sigma"] > 0)
    record(7, bad == 0 and dt < 600,
           f"{bad} sandwich violations at budget {BUDGET:.0%} (2 fixtures x 50 pairs x 5 levels, "
           f"{crossed} pairs cross walls), {dt:.1f}s")


def test_08_trends(convergence_tables):
    tables, dt = convergence_tables
    nonmono, hyp_gap, sig_gap = 0, 0.0, 0.0
    for by, _ in tables.values():
        for d in by.values():
            dH, dS = d[1]["d_H"], d[1]["d_sigma"]
            g1 = [abs(d[a]["d_a_over_a"] - dH) for a in (1, 10, 100)]
            g2 = [abs(d[a]["d_a"] - dS) for a in (1, 0.1, 0.01)]
            for g in (g1, g2):
                nonmono += sum(g[i + 1] > g[i] + 1e-12 * max(1.0, g[i]) for i in range(2))
            hyp_gap = max(hyp_gap, g1[-1] / dH)
            # pairs inside one piece have d_sigma = 0; their gap is measured against d_H
            sig_gap = max(sig_gap, g2[-1] / max(dS, dH))
    ok = nonmono == 0 and hyp_gap < 0.05 and sig_gap < 0.10 and dt < 600
    record(8, ok, f"{nonmono} non-monotone steps, |d_a/a-d_H|/d_H at a=100: {hyp_gap:.2%}, "
                  f"|d_a-d_S| rel. at a=0.01: {sig_gap:.2%}")


def test_09_spectra():
    t0 = time.perf_counter()
    sc = scene("octagon-multicurve-2d")
    D = domain("octagon-multicurve-2d")
    parts, ok = [], True
    for word in [(2,), (3,), (1, 2)]:
        e = spectrum(D, sc.group.evaluate(word), [0.01, 100], samples=200, h=0.1)
        hyp = abs(e.ell_a[100] / 100 - e.ell_hyp) / e.ell_hyp
        sig = abs(e.ell_a[0.01] - e.ell_sigma) / e.ell_sigma
        ok &= hyp < 0.05 and sig < 0.10
        parts.append(f"{word}: {hyp:.2%}/{sig:.2%}")
    dt = time.perf_counter() - t0
    record(9, ok and dt < 900, "gap to l_H at a=100 / to l_S at a=0.01 " + ", ".join(parts) + f", {dt:.1f}s")


def test_10_invariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    sc = scene("octagon-multicurve-2d")
    D = domain("octagon-multicurve-2d")
    P = sc.group
    x0 = sc.base_point
    # coboundary: translating by v shifts every vertex by v and the cocycle by g v - v
    v = np.array([0.3, -0.2, 0.5])
    Dv = D.translated(v)
    vert = max(float(np.max(np.abs(Dv.positions[k] - D.positions[k] - v))) for k in D.positions)
    tau_v = Dv.holonomy_cocycle(P, x0)
    cob = max(float(np.max(np.abs(t2 - (t1 - c)))) for t1, t2, c in zip(P.cocycle, tau_v, coboundary(P, v)))
    # scaling law on every fixture
    scale = 0.0
    for name in ALL:
        Dn = domain(name)
        p = interior_points(Dn, rng, 1000)
        for a in (0.5, 3.0):
            scale = max(scale, float(np.max(np.abs(Dn.scaled(1 / a).T(p / a) - Dn.T(p) / a))))
    # equivariance under the word ball inside the core
    ball = extend_cocycle(P, 2)
    e0 = np.array([1.0, 0.0, 0.0])
    gs = [h for h in ball.elements if h.word and hyp_distance(e0, h.linear @ e0) < 4.5]
    xs = [x for x in random_hyperboloid_points(rng, 2, 60, 0.8) if D.S.locate(x).dim == 2]
    p = np.array([D.level_point(rng.uniform(0.2, 3), x) for x in xs])
    T, r, N, _ = D.ct_batch(p)
    equi = 0.0
    for h in gs:
        T2, r2, N2, _ = D.ct_batch(p @ h.linear.T + h.tau)
        equi = max(equi, float(np.max(np.abs(T2 - T))), float(np.max(np.abs(r2 - (r @ h.linear.T + h.tau)))),
                   float(np.max(np.abs(N2 - N @ h.linear.T))))
    dt = time.perf_counter() - t0
    ok = vert < 1e-9 and cob < 1e-9 and scale < 1e-9 and equi < 1e-8 and dt < 60
    record(10, ok, f"translation {vert:.1e}, cocycle shift {cob:.1e}, scaling {scale:.1e}, "
                   f"equivariance {equi:.1e} ({len(gs)} elements x {len(p)} points), {dt:.1f}s")


def _closed_polylines(D, rng, count):
    out = []
    while len(out) < count:
        k = rng.integers(3, 6)
        pts = random_hyperboloid_points(rng, D.n, k, 2.0)
        out.append(np.r_[pts, pts[:1]])
    return out


def test_11_measure_laws():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    closed, mono, done, skipped = 0.0, -np.inf, 0, 0
    for name in ALL:
        D = domain(name)
        for poly in _closed_polylines(D, rng, 1000):
            try:
                pm = path_measure(D.S, D.weights, poly)
            except PathError:
                skipped += 1
                continue
            done += 1
            closed = max(closed, float(np.max(np.abs(pm.total))))
        xs = [x for x in random_hyperboloid_points(rng, D.n, 2200, 2.0) if D.S.locate(x).dim == D.n][:2000]
        rho = np.array([D.rho_at(x) for x in xs])
        x, y = np.array(xs[:1000]), np.array(xs[1000:])
        d = rho[1000:] - rho[:1000]
        mono = max(mono, float(np.max(-inner(d, y))), float(np.max(inner(d, x))))
    dt = time.perf_counter() - t0
    ok = closed < 1e-9 and mono < 1e-9 and dt < 30
    record(11, ok, f"closed-path total {closed:.1e} over {done} polylines ({skipped} non-admissible redrawn away), "
                   f"monotone excess {mono:.1e}, {dt:.1f}s")


def random_loxodromic(rng):
    g = boost(rng.uniform(0.2, 3.0), 4, 1) @ rotation(rng.uniform(0.2, 2 * np.pi - 0.2), 4, (2, 3))
    m = boost(rng.normal(), 4, 1) @ rotation(rng.uniform(0, 2 * np.pi), 4, (1, 2)) @ boost(rng.normal(), 4, 3)
    return lorentz_matrix(m @ g @ np.linalg.inv(m))


def test_12_loxodromic_fixed_point():
    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(100):
        g, t = random_loxodromic(rng), rng.normal(size=4)
        z, _ = loxodromic_fixed_point(g, t)
        worst = max(worst, float(np.max(np.abs(g @ z + t - z))))
    dt = time.perf_counter() - t0
    record(12, worst < 1e-9 and dt < 1, f"max |gz + t - z| {worst:.1e} over 100 elements, {dt:.2f}s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
