import math

import numpy as np
import pytest

import illumdepth as idp


def normal(n, d=2, seed=1):
    return idp.sample_normal(n, d, seed)


def test_g_closed_forms():
    assert idp.g(2, 1.0) == 1.0
    assert idp.g(1, 3.0) == pytest.approx(2.0, abs=1e-12)
    kite = 1 + (math.sqrt(3) - math.pi / 3) / math.pi
    assert idp.g(2, 2.0) == pytest.approx(kite, abs=1e-10)
    assert idp.g_inverse(3, idp.g(3, 7.5)) == pytest.approx(7.5, abs=1e-9)


def test_illumination_ellipsoid_matches_hull():
    angles = np.linspace(0, 2 * np.pi, 4000, endpoint=False)
    circle = np.c_[np.cos(angles), np.sin(angles)]
    exact = idp.illumination_ellipsoid(np.zeros(2), np.eye(2), np.array([2.0, 0.0]))
    assert idp.hull_volume_with_point(circle, np.array([2.0, 0.0])) == pytest.approx(exact, rel=1e-5)


def test_depth_and_region():
    cross = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
    assert idp.halfspace_depth(cross, np.array([[0.0, 0], [5, 5]])) == [0.5, 0.0]
    X = normal(300)
    region = idp.tukey_region(X, 0.2)
    assert region["volume"] > 0
    assert region["vertices"].shape[1] == 2


def test_illumination_depth_model():
    X = normal(300)
    model = idp.IlluminationDepthModel(X)
    assert model.alpha == pytest.approx(idp.robust_alpha(model.pi_n))
    centre = model.evaluate(np.zeros(2))
    assert centre["norm_illum"] == 1.0
    far = model.evaluate(np.array([6.0, 0.0]))
    assert far["hd"] == 0.0 and far["norm_illum"] > 1.0
    hd, ni = model.evaluate_many(np.array([[0.0, 0.0], [6.0, 0.0], [12.0, 0.0]]))
    assert hd.shape == (3,)
    assert ni[2] > ni[1] > ni[0]
    boundary = model.level_set_boundary(2.0, 90)
    assert boundary.shape == (90, 2)
    assert all(model.level_set_member(p * 0.999, 2.0) for p in boundary[:5])


def test_affine_invariance():
    X = normal(200, seed=3)
    A = np.array([[2.0, 0.3], [-0.4, 1.1]])
    b = np.array([5.0, -2.0])
    m1 = idp.IlluminationDepthModel(X, 0.2)
    m2 = idp.IlluminationDepthModel(X @ A.T + b, 0.2)
    x = np.array([2.5, 1.0])
    assert m1.evaluate(x)["norm_illum"] == pytest.approx(m2.evaluate(A @ x + b)["norm_illum"], rel=1e-7)


def test_ranking_is_a_permutation():
    X = normal(100, seed=4)
    ranks = idp.rank_centre_outward(X, X)
    assert sorted(ranks) == list(range(100))


def test_elliptical_model():
    X = normal(400, seed=5)
    ec = idp.ECModel(X, 0.2, "normal")
    assert ec.m_alpha(np.array([0.0, 0.0])) < ec.m_alpha(np.array([3.0, 0.0]))
    assert 0.0 <= ec.rhd(np.array([3.0, 0.0])) <= 0.5


def test_extreme_and_classification():
    C = idp.sample_cauchy2d(500, 7)
    est = idp.extreme_region(C, 75, 1 / 500)
    assert est["tail_index"] > 0 and est["c"] > 1
    X1 = normal(300, seed=8)
    X2 = 2 * normal(300, seed=9) + 4
    q = np.array([[0.0, 0.0], [4.0, 4.0]])
    assert list(idp.IlluminationQDA(X1, X2).classify(q)) == [1, 2]
    assert list(idp.ClassicalQDA(X1, X2).classify(q)) == [1, 2]


def test_errors_map_to_python_exceptions():
    line = np.c_[np.arange(6.0), np.arange(6.0)]
    with pytest.raises(idp.GeometryError):
        idp.IlluminationDepthModel(line, 0.2).evaluate(np.array([9.0, 0.0]))
    with pytest.raises(idp.ConfigError):
        idp.run_experiment("nonsense")
    with pytest.raises(idp.ConfigError):
        idp.run_experiment("extreme", reps=0)


def test_run_experiment_is_deterministic():
    kw = dict(n=200, k=30, reps=2, seed=11)
    table, rows = idp.run_experiment("extreme", **kw)
    assert "E_Ill" in table
    assert len(rows) == 2
    assert rows == idp.run_experiment("extreme", **kw)[1]
