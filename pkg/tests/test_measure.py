import numpy as np
import pytest

from conftest import domain
from regdomain.lorentz import hyperboloid_point, normalize_timelike, random_hyperboloid_points
from regdomain.measure import PathError, path_measure, piece_positions, rho, sector_sum, wall_atom
from regdomain.stratification import ComplexError

E2 = np.array([0.0, 0, 1])


def test_wall_atom():
    S = domain("single-geodesic-2d").S
    assert np.allclose(wall_atom(S, {"g": 1.0}, "g", "minus"), E2)
    assert np.allclose(wall_atom(S, {"g": 1.0}, "g", "plus"), -E2)
    assert np.allclose(wall_atom(S, {"g": 2.5}, "g", "minus"), 2.5 * E2)
    with pytest.raises(ComplexError):
        wall_atom(S, {"g": 1.0}, "nope", "minus")


def test_single_crossing_and_closed_square():
    S = domain("single-geodesic-2d").S
    x = normalize_timelike(np.array([1.5, 0.1, -0.6]))
    y = normalize_timelike(np.array([1.5, -0.2, 0.7]))
    pm = path_measure(S, {"g": 1.7}, [x, y])
    assert len(pm.atoms) == 1 and np.allclose(pm.total, 1.7 * E2)
    sq = [normalize_timelike(np.array([1.5, a, b])) for a, b in [(0.2, 0.2), (0.6, 0.2), (0.6, 0.6), (0.2, 0.6), (0.2, 0.2)]]
    assert np.array_equal(path_measure(S, {"g": 1.0}, sq).total, np.zeros(3))


def test_vertex_on_wall_is_rejected():
    S = domain("single-geodesic-2d").S
    with pytest.raises(PathError):
        path_measure(S, {"g": 1.0}, [np.array([1.0, 0, 0]), normalize_timelike(np.array([2.0, 0, 1]))])


def test_spine_crossing_sector_sum():
    D = domain("quad-spine-3d")
    x = hyperboloid_point([np.sqrt(3), 0, -1, -1])
    y = hyperboloid_point([np.sqrt(3), 0, 1, 1])
    pm = path_measure(D.S, D.weights, [x, y])
    assert pm.atoms[0][1] == "l"
    assert np.allclose(pm.total, [0, 0, 1, 2])
    # balance: going the other way round gives the same vector
    other = -(1.0 * np.array([0, 0, -1, 0]) + 2.0 * np.array([0, 0, 0, -1]))
    assert np.allclose(sector_sum(D.S, D.weights, "l", "D1", "D3"), other)


def test_rho_examples():
    S = domain("single-geodesic-2d").S
    assert np.array_equal(rho(S, {"g": 1.0}, normalize_timelike(np.array([2, 0.1, -1.0])), "minus"), np.zeros(3))
    assert np.allclose(rho(S, {"g": 1.0}, normalize_timelike(np.array([2, 0.1, 1.0])), "minus"), E2)
    with pytest.raises(PathError):
        rho(S, {"g": 1.0}, np.array([1.0, 0, 0]), "minus")
    D = domain("two-geodesics-2d")
    ua, ub = D.S.walls["A"].normal, D.S.walls["B"].normal
    w = {"A": 0.7, "B": 1.9}
    got = rho(D.S, w, normalize_timelike(np.array([3.0, 0, 2.5])), "below")
    assert np.allclose(got, 0.7 * ua + 1.9 * ub)


@pytest.mark.parametrize("name", ["two-geodesics-2d", "quad-spine-3d", "octagon-multicurve-2d"])
def test_positions_consistent_and_constant_on_pieces(name):
    D = domain(name)
    pos, resid = piece_positions(D.S, D.weights, D.base)
    assert resid < 1e-9
    rng = np.random.default_rng(8)
    for x in random_hyperboloid_points(rng, D.n, 100, 2.0):
        if D.S.locate(x).dim == D.n:
            assert np.allclose(rho(D.S, D.weights, x, D.base), pos[D.S.top_piece(x)], atol=1e-12)


def test_octagon_equivariance_of_rho():
    from conftest import scene

    sc = scene("octagon-multicurve-2d")
    D = domain("octagon-multicurve-2d")
    rng = np.random.default_rng(9)
    xs = [x for x in random_hyperboloid_points(rng, 2, 60, 1.0) if D.S.locate(x).dim == 2]
    for word in [(1,), (-2,), (3,), (4, -1)]:
        h = sc.group.evaluate(word)
        for x in xs:
            if D.S.locate(h.linear @ x).dim == 2:
                assert np.max(np.abs(D.rho_at(h.linear @ x) - (h.linear @ D.rho_at(x) + h.tau))) < 1e-8
