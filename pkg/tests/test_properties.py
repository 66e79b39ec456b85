"""Randomised invariants with hypothesis."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import domain
from regdomain.lorentz import (boost, classify_isometry, hyp_distance, inner, loxodromic_fixed_point,
                               rotation, translation_length_hyp)
from regdomain.stratification import weight_residuals

finite = st.floats(-3, 3, allow_nan=False)
vec3 = st.tuples(finite, finite, finite).map(np.array)


def point(r, th):
    return np.array([np.cosh(r), np.sinh(r) * np.cos(th), np.sinh(r) * np.sin(th)])


hpoint = st.builds(point, st.floats(0, 2.5), st.floats(0, 2 * np.pi))


@given(vec3, vec3, vec3, finite)
def test_inner_symmetric_bilinear(u, v, w, s):
    assert inner(u, v) == inner(v, u)
    assert abs(inner(s * u + w, v) - (s * inner(u, v) + inner(w, v))) < 1e-9


@given(hpoint, hpoint, hpoint)
def test_triangle_inequality(x, y, z):
    assert hyp_distance(x, z) <= hyp_distance(x, y) + hyp_distance(y, z) + 1e-9


@settings(max_examples=50)
@given(st.floats(0.1, 3), st.floats(0, 2 * np.pi), hpoint)
def test_displacement_bounded_by_translation_length(t, th, x):
    g = rotation(th) @ boost(t) @ rotation(-th)
    assert hyp_distance(x, g @ x) >= translation_length_hyp(g) - 1e-6
    assert classify_isometry(np.linalg.inv(g)).kind == "hyperbolic"


@settings(max_examples=50)
@given(st.floats(0.1, 3), st.floats(0.2, 6.0), vec3, finite)
def test_loxodromic_fixed_point(t, th, v, c):
    g = boost(t, 4, 1) @ rotation(th, 4, (2, 3))
    tau = np.r_[v, c]
    z, _ = loxodromic_fixed_point(g, tau)
    assert z is not None and np.max(np.abs(g @ z + tau - z)) < 1e-9


@given(st.lists(st.floats(0.01, 5), min_size=4, max_size=4), st.lists(st.floats(0.01, 5), min_size=4, max_size=4))
def test_weight_residual_linear(a, b):
    S = domain("quad-spine-3d").S
    ka = dict(zip(S.wall_ids, a))
    kb = dict(zip(S.wall_ids, b))
    kab = {k: ka[k] + kb[k] for k in ka}
    assert np.allclose(weight_residuals(S, kab)["l"], weight_residuals(S, ka)["l"] + weight_residuals(S, kb)["l"],
                       atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.05, 3), st.floats(0.05, 3))
def test_single_geodesic_time_is_concave_along_vertical_lines(y1, y2, s, t):
    D = domain("single-geodesic-2d")
    b = D.boundary_height(np.array([y1, y2]))
    p = np.array([b + s, y1, y2])
    q = np.array([b + t, y1, y2])
    Tp, Tq, Tm = D.T(np.array([p, q, 0.5 * (p + q)]))
    assert Tm >= 0.5 * (Tp + Tq) - 1e-9
