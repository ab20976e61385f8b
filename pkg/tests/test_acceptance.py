"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are collected and echoed again in the terminal summary (see
``conftest.py``), so they are visible in a plain ``pytest`` run.
"""

import json
import time

import numpy as np
import pytest

from vilab import cli
from vilab.cosine import (adjoint_cosine_inequality, cosine, cosine_ratio,
                          identity_operator, zero_cosine_study)
from vilab.decomposition import Subspace, galerkin_defect, stampacchia_projection
from vilab.errors import NoWitnessError
from vilab.gelfand import EvolutionTriple, decay_study, ratio, triple_operator
from vilab.operators import BilinearForm, OperatorToDual, ineq_constant
from vilab.orthogonality import (BirkhoffJames, FormOrtho,
                                 bj_minimization_oracle, bj_orthogonal,
                                 boundedness_constant, lattice_sampler,
                                 resolve, test_property)
from vilab.quadratic import QuadraticForm, epsilon_witness, fd_check
from vilab.search import SearchConfig
from vilab.spaces import Space
from vilab.vi import Box, VIProblem, solve_vi, verify_vi

pytestmark = pytest.mark.acceptance

RESULTS = []

# l^4 identity cosine for n = 2, 4, ..., 256 (seed 0, default search budget),
# pinned from the first run.  The n = 256 value matches the two-level oracle
# (height a on k coordinates, 1 elsewhere, minimized over a and k) to 4e-8.
L4_IDENTITY_COS = [0.9477632596355886, 0.8852002651193301, 0.8143226159165715,
                   0.7381726462034472, 0.660176274158124, 0.5834992184528893,
                   0.5106277103549033, 0.44322580603485423]


def record(num, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# 1 -------------------------------------------------------------------------

def test_c01_vi_box_problem():
    def work():
        prob = VIProblem(BilinearForm.from_matrix([[2.0, 1.0], [-1.0, 2.0]], Space(2, 2)),
                         Box([0, 0], [1, 1]), [-1.0, 3.0])
        sol = solve_vi(prob)
        rng = np.random.default_rng(1)
        starts = [solve_vi(prob, x0=rng.uniform(-10, 10, 2), seed=k).x for k in range(10)]
        g = np.linspace(0, 1, 100)
        grid = np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
        rep = verify_vi(sol.x, prob, n_samples=0, extra=grid, tol=1e-9)
        return prob, sol, starts, rep, grid

    (prob, sol, starts, rep, grid), dt = timed(work)
    err = float(np.max(np.abs(sol.x - [0.0, 1.0])))
    spread = float(np.max(np.ptp(np.array(starts), axis=0)))
    ok = (err <= 1e-6 and sol.residual < 1e-8 and spread <= 1e-5 and rep.ok
          and grid.shape[0] == 10_000 and dt < 1.0)
    record(1, ok, f"|x-(0,1)|={err:.1e} residual={sol.residual:.1e} "
                  f"start spread={spread:.1e} grid violation={rep.worst_violation:.1e} "
                  f"time={dt:.2f}s")


# 2 -------------------------------------------------------------------------

def test_c02_stampacchia_projection():
    def work():
        rng = np.random.default_rng(2)
        worst = dict(idem=0.0, range=0.0, galerkin=0.0)
        dims_ok = True
        for _ in range(100):
            n = int(rng.integers(1, 21))
            k = int(rng.integers(0, n + 1))
            G = rng.standard_normal((n, n))
            lam = np.linalg.eigvalsh(0.5 * (G + G.T))[0]
            A = G + (abs(lam) + rng.uniform(0.1, 2.0)) * np.eye(n)
            a = BilinearForm.from_matrix(A, Space(n, 2))
            M = Subspace(rng.standard_normal((n, k))) if k else Subspace.zero(n)
            rep = stampacchia_projection(a, M)
            P = rep.P
            s = max(1.0, np.abs(P).max())
            worst["idem"] = max(worst["idem"], np.abs(P @ P - P).max() / s)
            if k:
                worst["range"] = max(worst["range"], np.abs(P @ M.basis - M.basis).max())
                dims_ok &= rep.rank_P == k
            y = rng.standard_normal(n)
            worst["galerkin"] = max(worst["galerkin"], galerkin_defect(a, P, M, y))
            dims_ok &= M.dim + rep.rank_complement == n
        return worst, dims_ok

    (worst, dims_ok), dt = timed(work)
    ok = all(v <= 1e-10 for v in worst.values()) and dims_ok and dt < 5.0
    record(2, ok, f"|P^2-P|={worst['idem']:.1e} |PB-B|={worst['range']:.1e} "
                  f"galerkin={worst['galerkin']:.1e} dims ok={dims_ok} time={dt:.2f}s")


# 3 -------------------------------------------------------------------------

def test_c03_cosine_oracles():
    def work():
        L2 = Space(2, 2)
        T = OperatorToDual(np.diag([1.0, 9.0]), L2)
        est = cosine(T).value
        rng = np.random.default_rng(3)
        X = rng.standard_normal((1_000_000, 2))
        brute = float(cosine_ratio(T, X).min())
        one = cosine(identity_operator(Space(4, 2))).value
        zero = cosine(OperatorToDual([[0.0, 2.0], [-2.0, 0.0]], L2)).value
        return est, brute, one, zero

    (est, brute, one, zero), dt = timed(work)
    ok = (abs(est - 0.6) <= 1e-4 and abs(brute - 0.6) <= 1e-4 and est <= brute + 1e-12
          and abs(one - 1.0) <= 1e-14 and zero == 0.0 and dt < 10.0)
    record(3, ok, f"cos diag(1,9)={est:.10f} brute={brute:.10f} "
                  f"cos I={one!r} cos antisym={zero!r} time={dt:.2f}s")


# 4 -------------------------------------------------------------------------

def test_c04_scale_invariance_and_dimension_decay():
    base = [OperatorToDual(np.diag([1.0, 9.0]), Space(2, 2)),
            OperatorToDual([[2.0, 1.0], [-1.0, 2.0]], Space(2, 3.0, [1.0, 2.0])),
            identity_operator(Space(8, 4.0))]
    scale_gap = 0.0
    for T in base:
        c0 = cosine(T).value
        for lam in (0.1, 3.0, 100.0):
            scale_gap = max(scale_gap, abs(cosine(T.scaled(lam)).value - c0))
    seq = [cosine(identity_operator(Space(n, 4.0))).value for n in 2 ** np.arange(1, 9)]
    rises = float(np.max(np.diff(seq)))
    frozen = float(np.max(np.abs(np.array(seq) - L4_IDENTITY_COS)))
    ok = scale_gap <= 1e-8 and rises <= 1e-8 and seq[-1] < 0.9 and frozen <= 1e-8
    record(4, ok, f"max |cos(lam T)-cos T|={scale_gap:.1e} max rise={rises:.1e} "
                  f"cos(n=256)={seq[-1]:.8f} regression drift={frozen:.1e}")


# 5 -------------------------------------------------------------------------

def test_c05_birkhoff_james():
    sp = Space(5, 4)
    rel = BirkhoffJames(sp)
    rng = np.random.default_rng(5)
    disagree = 0
    orth = 0
    for i in range(1000):
        x, y = rng.standard_normal(5), rng.standard_normal(5)
        if i % 2:  # half the pairs are made orthogonal so both verdicts occur
            y = y + resolve(rel, x, y) * x
        a = bj_orthogonal(sp, x, y, tol=1e-8)
        b = bj_minimization_oracle(sp, x, y, tol=1e-8)[0]
        disagree += a != b
        orth += a
    L4 = Space(2, 4)
    rep = test_property(BirkhoffJames(L4), "symmetric", lattice_sampler(2, 3),
                        N=10_000, seed=0)
    wx, wy = rep.witness
    # the resolved y is a positive multiple of (1, -8)
    found = (np.allclose(wx, [2, 1]) and abs(wy[0] * -8 - wy[1]) < 1e-12 and wy[0] > 0)
    ok = disagree == 0 and found and rep.samples <= 10_000
    record(5, ok, f"disagreements={disagree}/1000 ({orth} orthogonal) "
                  f"asymmetry witness x={wx.tolist()} y~{(wy / wy[0]).tolist()} "
                  f"after {rep.samples} samples")


# 6 -------------------------------------------------------------------------

def test_c06_boundedness_constants():
    bj = boundedness_constant(BirkhoffJames(Space(5, 4)), N=10_000, seed=6)
    tr = EvolutionTriple(4.0, 32)
    T = triple_operator(tr)
    study = zero_cosine_study(T, SearchConfig(seed=6), n_pairs=10_000)
    # cross-check the pair construction against the FormOrtho predicate
    rel = FormOrtho(T.symmetric_part())
    c = ineq_constant(T)
    ok = (bj >= 1 - 1e-9 and study.chain_ok and study.pairs == 10_000
          and abs(study.ineq_c - c) <= 1e-9 and rel([1.0] * 32, [1.0, -1.0] * 16))
    record(6, ok, f"BJ boundedness={bj:.9f}; chain delta={study.cos.value:.6f} "
                  f"c={study.ineq_c:.6f} bound={study.bound:.6f} "
                  f"worst margin={study.worst_margin:.3e} on {study.pairs} pairs")


# 7 -------------------------------------------------------------------------

def test_c07_gelfand_decay():
    def work():
        study = decay_study(10.0, [100_000], np.logspace(-1, -3, 9))
        control = decay_study(2.0, [1000, 100_000], np.logspace(-1, -3, 9))
        rng = np.random.default_rng(7)
        worst = 0.0
        # 10^4 random vectors at n = 1000: Gaussian, log-normal and sparse
        tr = EvolutionTriple(10.0, 1000)
        for kind in range(3):
            F = rng.standard_normal((3334, 1000))
            if kind == 1:
                F = np.exp(3 * F)
            elif kind == 2:
                F *= rng.uniform(size=F.shape) < 0.01
                F[:, 0] += 1.0
            worst = max(worst, float(ratio(tr, F).max()))
        big = EvolutionTriple(10.0, 100_000)
        worst = max(worst, float(ratio(big, np.exp(2 * rng.standard_normal((50, 100_000)))).max()))
        return study, control, worst

    (study, control, worst), dt = timed(work)
    q = 10.0 / 9.0
    predicted = study.rows[0].alpha / q - 1.0
    slope = study.slope()
    ctrl = max(abs(r.ratio - 1.0) for r in control.rows)
    ok = (study.min_ratio < 0.1 and abs(slope - predicted) <= 0.25 * abs(predicted)
          and ctrl <= 1e-12 and worst <= 1 + 1e-12 and dt < 60.0)
    record(7, ok, f"min ratio={study.min_ratio:.5f} slope={slope:.4f} "
                  f"(predicted {predicted:.4f}) control dev={ctrl:.1e} "
                  f"max random ratio={worst:.6f} time={dt:.1f}s")


# 8 -------------------------------------------------------------------------

def test_c08_quadratic_forms():
    rng = np.random.default_rng(8)
    worst_fd = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 51))
        p = float(rng.choice([2.0, rng.uniform(1.2, 6.0)]))
        G = rng.standard_normal((n, n))
        q = QuadraticForm.from_matrix(G + G.T, Space(n, p))
        worst_fd = max(worst_fd, fd_check(q, rng.standard_normal(n)))
    cfg = SearchConfig(samples=5000, starts=8, seed=8)
    returned = strict_ok = 0
    cases = [(np.diag([1.0, 100.0]), 2.0, 0.1), (np.diag([1.0, -3.0, 2.0]), 3.0, 0.01),
             (np.eye(64), 4.0, 0.45), (np.diag([1.0, 4.0, 9.0]), 1.5, 0.49)]
    for _ in range(6):
        n = int(rng.integers(2, 8))
        G = rng.standard_normal((n, n))
        cases.append((G @ G.T + 1e-3 * np.eye(n), float(rng.uniform(1.5, 4.0)), 0.3))
    for S, p, eps in cases:
        sp = Space(S.shape[0], p)
        qf = QuadraticForm.from_matrix(S, sp)
        try:
            x = epsilon_witness(qf, eps, cfg)
        except NoWitnessError:
            continue
        returned += 1
        strict_ok += bool(qf(x) < eps * sp.dual_norm(qf.gradient(x)) * sp.norm(x))
    ident = QuadraticForm.from_matrix(np.eye(2), Space(2, 2))
    try:
        epsilon_witness(ident, 0.4)
        no_witness, best = False, None
    except NoWitnessError as err:
        no_witness, best = True, err.best_ratio
    ok = (worst_fd <= 1e-6 and returned >= 4 and strict_ok == returned and no_witness
          and abs(best - 0.5) <= 1e-9)
    record(8, ok, f"fd gap={worst_fd:.1e} over 100 cases; witnesses strict "
                  f"{strict_ok}/{returned}; identity eps=0.4 -> no witness "
                  f"(best ratio {best!r})")


# 9 -------------------------------------------------------------------------

def test_c09_adjoint_inequality():
    rng = np.random.default_rng(9)
    worst = np.inf
    oks = 0
    for i in range(50):
        n = int(rng.integers(2, 11))
        G = rng.standard_normal((n, n))
        K = rng.standard_normal((n, n))
        A = G @ G.T / n + 0.1 * np.eye(n) + rng.uniform(0, 1) * (K - K.T)
        rep = adjoint_cosine_inequality(OperatorToDual(A, Space(n, 2)), n_samples=10_000,
                                        config=SearchConfig(seed=i), tol=1e-9)
        worst = min(worst, rep.worst_margin)
        oks += rep.ok
    record(9, oks == 50, f"{oks}/50 operators satisfy |A*x| >= delta |Ax| - 1e-9; "
                         f"worst margin={worst:.3e}")


# 10 ------------------------------------------------------------------------

CLI_PROBLEMS = {
    "vi-solve": {"space": {"dim": 2, "p": 2.0}, "matrix": [[2, 1], [-1, 2]],
                 "rhs": [-1, 3], "set": {"type": "box", "lo": [0, 0], "hi": [1, 1]}},
    "cosine": {"space": {"dim": 2, "p": 2.0}, "matrix": [[1, 0], [0, 9]], "samples": 5000},
    "decompose": {"space": {"dim": 3, "p": 4.0}, "matrix": [[2, 1, 0], [0, 2, 1], [0, 0, 2]],
                  "basis": [[1, 0], [0, 1], [1, 1]]},
    "ortho-test": {"space": {"dim": 2, "p": 4.0}, "relation": {"type": "bj"},
                   "property": "symmetric", "sampler": {"type": "lattice", "radius": 3}},
    "witness": {"space": {"dim": 2, "p": 2.0}, "matrix": [[1, 0], [0, 100]], "eps": 0.1,
                "samples": 5000},
    "triple-decay": {"p": 4.0, "n_list": [10000], "s_list": [0.1, 0.03, 0.01]},
}


def test_c10_cli_determinism(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    identical = []
    for name, data in CLI_PROBLEMS.items():
        inp = tmp_path / f"{name}.json"
        inp.write_text(json.dumps(data))
        blobs = []
        for k in range(2):
            out = tmp_path / f"{name}.{k}.out"
            cli.main([name, str(inp), "--seed", "11", "--out", str(out)])
            blobs.append(out.read_bytes())
        identical.append(blobs[0] == blobs[1] and len(blobs[0]) > 0)

    def code(name, data, *extra):
        inp = tmp_path / f"code_{name}.json"
        inp.write_text(json.dumps(data))
        return cli.main([name, str(inp), *extra])

    codes = {
        0: code("cosine", CLI_PROBLEMS["cosine"], "--seed", "0"),
        1: code("cosine", CLI_PROBLEMS["cosine"]),  # seed omitted
        2: code("witness", dict(CLI_PROBLEMS["witness"], matrix=[[1, 0], [0, 1]], eps=0.4),
                "--seed", "0"),
        3: code("ortho-test", CLI_PROBLEMS["ortho-test"], "--seed", "0"),
    }
    capsys.readouterr()
    ok = all(identical) and all(k == v for k, v in codes.items())
    record(10, ok, f"byte-identical replays {sum(identical)}/{len(identical)}; "
                   f"exit codes expected 0,1,2,3 got {[codes[k] for k in range(4)]}")
