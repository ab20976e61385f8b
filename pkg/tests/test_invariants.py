"""Cross-module invariants: sanity chains between constants and solvers."""

import numpy as np
import pytest

from conftest import sphere_points
from vilab.cosine import cosine, cosine_ratio, identity_operator
from vilab.decomposition import Subspace, pi_T_iso_constants
from vilab.gelfand import EvolutionTriple, ratio, spike_witness, triple_operator
from vilab.operators import (BilinearForm, OperatorToDual, coercivity_constant,
                             hes_constant, operator_norm)
from vilab.quadratic import QuadraticForm
from vilab.search import SearchConfig
from vilab.spaces import Space, pairing
from vilab.vi import AffineSubspace, Ball, Box, VIProblem, solve_vi, subspace_galerkin_solve

CFG = SearchConfig(samples=20_000)


def positive_operator(rng, n, skew=1.0):
    G = rng.standard_normal((n, n))
    K = rng.standard_normal((n, n))
    return G @ G.T / n + 0.2 * np.eye(n) + skew * (K - K.T)


# -- operators -----------------------------------------------------------

def test_adjoint_pairing_identity(rng):
    sp = Space(6, 3.0, rng.uniform(0.5, 2, 6))
    T = OperatorToDual(rng.standard_normal((6, 6)), sp)
    X, Y = rng.standard_normal((2, 10_000, 6))
    gap = pairing(T(X), Y) - pairing(T.adjoint()(Y), X)
    assert np.max(np.abs(gap)) <= 1e-13


def test_symmetric_part_quadratic(rng):
    T = OperatorToDual(rng.standard_normal((5, 5)), Space(5, 4.0))
    X = rng.standard_normal((1000, 5))
    assert np.allclose(pairing(T.symmetric_part()(X), X), pairing(T(X), X), atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_constant_chains(seed):
    rng = np.random.default_rng(seed)
    T = OperatorToDual(positive_operator(rng, 3, skew=0.3), Space(3, 2))
    c = coercivity_constant(T, CFG)
    hes = hes_constant(T, CFG)
    L = operator_norm(T, CFG)
    delta = cosine(T, CFG).value
    assert c <= hes * L**2 + 1e-9
    assert delta > 0 and hes > 0
    assert hes >= delta / L - 1e-9


def test_cosine_and_hes_signs_agree():
    anti = OperatorToDual([[1e-12, 1.0], [-1.0, 0.0]], Space(2, 2))
    assert cosine(anti, CFG).value < 1e-6
    assert hes_constant(anti, CFG) < 1e-6


# -- vi ------------------------------------------------------------------

def vi_problems(rng):
    sp = Space(4, 2, rng.uniform(0.5, 2.0, 4))
    r = np.sqrt(sp.weights)
    # W^(1/2) A0 W^(1/2) is coercive in the weighted norm whenever A0 is
    A = r[:, None] * positive_operator(rng, 4) * r[None, :]
    h = 2 * rng.standard_normal(4)
    form = BilinearForm.from_matrix(A, sp)
    return [VIProblem(form, Box(-np.ones(4), np.ones(4)), h),
            VIProblem(form, Ball(np.zeros(4), 0.5), h)]


def test_ten_starts_agree(rng):
    tol = 1e-10
    for prob in vi_problems(rng):
        xs = np.array([solve_vi(prob, tol=tol, x0=5 * rng.standard_normal(4), seed=k).x
                       for k in range(10)])
        assert np.max(np.ptp(xs, axis=0)) <= 10 * tol


def test_vi_on_subspace_is_galerkin(rng):
    sp = Space(5, 2)
    A = positive_operator(rng, 5)
    B = rng.standard_normal((5, 2))
    h = rng.standard_normal(5)
    form = BilinearForm.from_matrix(A, sp)
    x = solve_vi(VIProblem(form, AffineSubspace(B), h), tol=1e-12).x
    assert np.allclose(x, subspace_galerkin_solve(form, B, h), atol=1e-8)


# -- decomposition -------------------------------------------------------

@pytest.mark.parametrize("p", [2.0, 3.0])
def test_iso_lower_positive_for_coercive(rng, p):
    for _ in range(3):
        n = 4
        A = positive_operator(rng, n)
        a = BilinearForm.from_matrix(A, Space(n, p))
        k = int(rng.integers(1, n))
        assert pi_T_iso_constants(a, Subspace(rng.standard_normal((n, k)))).lower > 0


# -- cosine --------------------------------------------------------------

def test_cosine_range(rng):
    for p in (1.5, 2.0, 5.0):
        T = OperatorToDual(positive_operator(rng, 4), Space(4, p))
        X = sphere_points(rng, 20_000, 4)
        r = cosine_ratio(T, X)
        assert np.all(r <= 1 + 1e-12) and np.all(r >= -1e-12)
        assert 0 <= cosine(T, CFG).value <= 1


@pytest.mark.parametrize("p", [3.0, 4.0])
def test_identity_cosine_decays_one_dimension_at_a_time(p):
    seq = [cosine(identity_operator(Space(n, p)), CFG).value for n in range(1, 11)]
    assert seq[0] == pytest.approx(1.0, abs=1e-14)
    assert np.all(np.diff(seq) <= 1e-8)


@pytest.mark.parametrize("n", [2, 3])
def test_spd_cosine_against_million_samples(rng, n):
    G = rng.standard_normal((n, n))
    T = OperatorToDual(G @ G.T + 0.3 * np.eye(n), Space(n, 2))
    X = rng.standard_normal((1_000_000, n))
    brute = cosine_ratio(T, X).min()
    est = cosine(T, CFG).value
    assert est <= brute + 1e-12
    assert est == pytest.approx(brute, abs=1e-4)


# -- quadratic -----------------------------------------------------------

def test_quadratic_homogeneity(rng):
    G = rng.standard_normal((6, 6))
    q = QuadraticForm.from_matrix(G + G.T, Space(6, 3.0))
    x = rng.standard_normal(6)
    for lam in (-3.0, 0.01, 250.0):
        assert q(lam * x) == pytest.approx(lam**2 * q(x), rel=1e-12)


# -- gelfand -------------------------------------------------------------

@pytest.mark.parametrize("p", [2.5, 4.0, 10.0])
def test_holder_bound(rng, p):
    tr = EvolutionTriple(p, 200)
    F = np.concatenate([rng.standard_normal((5000, 200)),
                        np.exp(3 * rng.standard_normal((5000, 200)))])
    assert np.all(ratio(tr, F) <= 1 + 1e-12)


def test_dual_norm_of_T_is_weighted_q_norm(rng):
    tr = EvolutionTriple(4.0, weights=rng.uniform(0.1, 2.0, 50))
    f = rng.standard_normal(50)
    w, q = tr.weights, tr.q
    direct = np.sum(w * np.abs(f) ** q) ** (1 / q)
    assert tr.X.dual_norm(triple_operator(tr)(f)) == pytest.approx(direct, rel=1e-12)


def test_triple_cosine_below_witness_grid():
    tr = EvolutionTriple(4.0, 200)
    grid = min(ratio(tr, spike_witness(tr, s, a).f)
               for s in (0.1, 0.2, 0.3) for a in (1.4, 1.6, 1.8))
    c = cosine(triple_operator(tr), SearchConfig(samples=2000, starts=8)).value
    # the optimizer can only improve on the structured witnesses
    assert c <= grid + 1e-12


def test_p2_triple_cosine_is_one():
    tr = EvolutionTriple(2.0, 16)
    assert cosine(triple_operator(tr)).value == pytest.approx(1.0, abs=1e-14)
