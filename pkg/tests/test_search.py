import numpy as np
import pytest

from vilab.search import SearchConfig, sphere_maximize, sphere_minimize


def rayleigh(S):
    def fun(x):
        v = x @ S @ x / (x @ x)
        return v, 2 * (S @ x - v * x) / (x @ x)

    def batch(X):
        return np.sum((X @ S) * X, axis=1) / np.sum(X * X, axis=1)
    return fun, batch


def test_minimize_rayleigh_quotient_matches_eigh(rng):
    G = rng.standard_normal((6, 6))
    S = G + G.T
    res = sphere_minimize(*rayleigh(S), 6, SearchConfig(samples=2000, seed=3))
    lam = np.linalg.eigvalsh(S)[0]
    assert res.value == pytest.approx(lam, abs=1e-9)
    # witness is an eigenvector
    w = res.witness
    assert np.linalg.norm(S @ w - lam * w) < 1e-4


def test_maximize_is_negated_minimize(rng):
    S = np.diag([1.0, 4.0, -2.0])
    res = sphere_maximize(*rayleigh(S), 3, SearchConfig(samples=500))
    assert res.value == pytest.approx(4.0, abs=1e-10)
    assert res.sample_value <= res.value + 1e-12


def test_value_never_worse_than_sampling():
    S = np.diag([3.0, 1.0])
    res = sphere_minimize(*rayleigh(S), 2, SearchConfig(samples=1000, starts=0))
    assert res.value <= res.sample_value


def test_seed_reproducible():
    S = np.diag([1.0, 2.0, 3.0])
    cfg = SearchConfig(samples=300, starts=4, seed=11)
    a = sphere_minimize(*rayleigh(S), 3, cfg)
    b = sphere_minimize(*rayleigh(S), 3, cfg)
    assert a.value == b.value
    assert np.array_equal(a.witness, b.witness)


def test_extra_starts_are_used():
    S = np.diag([1.0, 2.0])
    cfg = SearchConfig(samples=0, starts=0, iters=0)
    res = sphere_minimize(*rayleigh(S), 2, cfg, extra_starts=[[1.0, 0.0]])
    assert res.value == pytest.approx(1.0)
    assert res.starts == 1


def test_excluded_points_are_skipped():
    # minimum of x1^2 - on the excluded half x1 < 0 the ratio reports inf
    def fun(x):
        if x[0] < 0:
            return np.inf, np.zeros_like(x)
        return x[1] ** 2, np.array([0.0, 2 * x[1]]) - x[1] ** 2 * 2 * x

    def batch(X):
        return np.where(X[:, 0] < 0, np.inf, X[:, 1] ** 2)

    res = sphere_minimize(fun, batch, 2, SearchConfig(samples=2000))
    assert res.witness[0] >= 0
    assert res.value < 1e-5
