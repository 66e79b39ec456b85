import numpy as np
import pytest

from regdomain.lorentz import (LorentzError, boost, classify_isometry, classify_vector, hyp_distance,
                               hyperboloid_point, inner, loxodromic_fixed_point, null_direction,
                               polar_point, random_hyperboloid_points, rotation, translation_length_hyp)


def parabolic(s):
    """exp(sA) with A the nilpotent generator of SO+(2,1) fixing (1,1,0)."""
    A = np.array([[0.0, 0, 1], [0, 0, 1], [1, -1, 0]])
    return np.eye(3) + s * A + 0.5 * s * s * A @ A


@pytest.mark.parametrize("u,v,expected", [
    ((1, 0, 0), (1, 0, 0), -1.0),
    ((1, 1, 0), (1, 1, 0), 0.0),
    ((0, 3, 4), (0, 3, 4), 25.0),
])
def test_inner_examples(u, v, expected):
    assert inner(u, v) == expected


def test_inner_signature():
    E = np.eye(4)
    assert np.array_equal(inner(E[:, None, :], E[None, :, :]), np.diag([-1.0, 1, 1, 1]))


@pytest.mark.parametrize("v,expected", [
    ((2, 1, 0), ("timelike", "future")),
    ((1, 1, 0), ("null", "future")),
    ((0, 0, 0), ("zero", "n/a")),
    ((0, 1, 0), ("spacelike", "n/a")),
    ((-2, 1, 0), ("timelike", "past")),
])
def test_classify_vector(v, expected):
    assert classify_vector(v) == expected


def test_hyperboloid_and_null_validation():
    with pytest.raises(LorentzError):
        hyperboloid_point([1.0, 1.0, 0.0])
    with pytest.raises(LorentzError):
        hyperboloid_point([-1.0, 0.0, 0.0])
    assert np.allclose(null_direction([2.0, 2.0, 0.0]), [1.0, 1.0, 0.0])


def test_hyp_distance_examples():
    x = np.array([1.0, 0, 0])
    assert hyp_distance(x, x) == 0.0
    assert abs(hyp_distance(x, [np.cosh(1), np.sinh(1), 0]) - 1.0) < 1e-12


def test_hyp_distance_matches_chord_length_integration():
    rng = np.random.default_rng(0)
    for x, y in zip(*[random_hyperboloid_points(rng, 2, 20, 2.0) for _ in range(2)]):
        s = np.linspace(0, 1, 20001)[:, None]
        path = (1 - s) * x + s * y
        path = path / np.sqrt(-inner(path, path))[:, None]
        d = np.diff(path, axis=0)
        length = np.sum(np.sqrt(np.maximum(inner(d, d), 0)))
        assert abs(length - hyp_distance(x, y)) < 1e-6


def test_classify_isometry_examples():
    assert classify_isometry(np.eye(3)).kind == "elliptic"
    c = classify_isometry(boost(1.0))
    assert c.kind == "hyperbolic" and abs(c.lam - np.e) < 1e-12
    p = classify_isometry(parabolic(0.7))
    assert p.kind == "parabolic"
    assert np.allclose(p.fixed, [1.0, 1.0, 0.0], atol=1e-6)
    assert classify_isometry(rotation(0.4)).kind == "elliptic"


def test_classify_inverse_has_same_class():
    g = rotation(0.3) @ boost(1.3) @ rotation(-1.1)
    c, ci = classify_isometry(g), classify_isometry(np.linalg.inv(g))
    assert c.kind == ci.kind == "hyperbolic"
    # lam is the expanding eigenvalue, so it is shared; g^-1 scales the attracting end of g by 1/lam
    assert abs(ci.lam - c.lam) < 1e-10
    assert np.allclose(ci.attracting, c.repelling) and np.allclose(ci.repelling, c.attracting)
    assert np.allclose(np.linalg.inv(g) @ c.attracting, c.attracting / c.lam)


def test_translation_length():
    assert abs(translation_length_hyp(boost(1.0)) - 1.0) < 1e-12
    g = rotation(0.7) @ boost(0.8) @ rotation(-0.7)
    assert abs(translation_length_hyp(g @ g) - 2 * translation_length_hyp(g)) < 1e-10
    with pytest.raises(LorentzError):
        translation_length_hyp(rotation(0.5))


def test_translation_length_matches_sampled_infimum():
    g = boost(0.3, 3, 2) @ rotation(0.9) @ boost(1.4) @ rotation(-0.9) @ boost(-0.3, 3, 2)
    r = np.linspace(0, 3, 300)
    th = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    R, TH = np.meshgrid(r, th)
    X = np.stack([polar_point(a, b) for a, b in zip(R.ravel(), TH.ravel())])
    sampled = np.min(hyp_distance(X, X @ g.T))
    ell = translation_length_hyp(g)
    assert ell - 1e-9 <= sampled < ell + 1e-3


def test_loxodromic_fixed_point_examples():
    g = boost(1.0, 4, 1) @ rotation(np.pi / 2, 4, (2, 3))
    z, _ = loxodromic_fixed_point(g, np.array([0.0, 0, 1, 0]))
    assert np.allclose(z, [0, 0, 0.5, 0.5], atol=1e-12)
    assert np.max(np.abs(g @ z + [0, 0, 1, 0] - z)) < 1e-12
    assert loxodromic_fixed_point(np.eye(4), np.ones(4))[0] is None
    assert np.array_equal(loxodromic_fixed_point(g, np.zeros(4))[0], np.zeros(4))
    with pytest.raises(LorentzError):
        loxodromic_fixed_point(np.eye(3), np.ones(3))
