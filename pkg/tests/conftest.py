import functools

import numpy as np
import pytest

from regdomain import gallery

ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def scene(name):
    return gallery.load(name)


@functools.lru_cache(maxsize=None)
def domain(name):
    return gallery.domain_of(scene(name))


def interior_points(D, rng, count, max_radius=1.5, levels=(0.2, 3.0)):
    """Points of the domain from random normals and levels (normals off the stratum)."""
    from regdomain.lorentz import random_hyperboloid_points

    pts = []
    while len(pts) < count:
        x = random_hyperboloid_points(rng, D.n, 1, max_radius)[0]
        if D.S.locate(x).dim != D.n:
            continue
        pts.append(D.level_point(rng.uniform(*levels), x))
    return np.array(pts)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def star_complex(angles, spine_witness=True):
    """Walls of H^3 through the x1-axis spine, as rays at the given angles in the (x2, x3) plane."""
    from regdomain.stratification import SpineGeodesic, StratComplex, TopPiece, Wall

    k = len(angles)
    walls, pieces, star = [], [], []
    for i, t in enumerate(angles):
        wit = np.array([np.sqrt(2), 0, np.cos(t), np.sin(t)]) if spine_witness else None
        walls.append(Wall(f"P{i}", np.array([0, 0, -np.sin(t), np.cos(t)]), witness=wit))
    for i in range(k):
        pieces.append(TopPiece(f"D{i}", [(f"P{(i - 1) % k}", 1), (f"P{i}", -1)]))
        star += [f"D{i}", f"P{i}"]
    return StratComplex(3, walls, pieces, [SpineGeodesic("l", [[1, 1, 0, 0], [1, -1, 0, 0]], star)])
