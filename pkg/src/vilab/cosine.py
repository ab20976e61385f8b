"""Cosine and angle of a positive operator ``T: X -> X*``.

    cos T = inf { <Tx, x> / (||Tx||_* ||x||) : x != 0, Tx != 0 }

The infimum is searched with :func:`vilab.search.sphere_minimize`; the
reported value is therefore an upper bound on ``cos T`` that comes with a
replayable witness.  Points with ``||Tx||_*`` inside a small band around the
kernel are excluded, which realizes the ``Tx != 0`` restriction without 0/0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, NotPositiveError
from .operators import OperatorToDual, ineq_constant, hes_constant, positivity_report
from .search import SearchConfig, sphere_minimize

__all__ = [
    "CosineResult", "cosine", "cosine_ratio", "angle", "ZeroCosineStudy",
    "zero_cosine_study", "adjoint_cosine_inequality", "AdjointInequality", "identity_operator",
]


@dataclass(frozen=True)
class CosineResult:
    value: float
    witness: np.ndarray
    starts: int
    seed: int
    tol: float

    @property
    def angle(self):
        return angle(self)

    def to_dict(self):
        return {"value": self.value, "angle": self.angle,
                "witness": self.witness.tolist(), "starts": self.starts,
                "seed": self.seed, "tol": self.tol}


def cosine_ratio(T, x):
    """``<Tx, x> / (||Tx||_* ||x||)`` at one or many points."""
    sp = T.space
    x = sp.check(x)
    return T.quadratic(x) / (sp.dual_norm(T(x)) * sp.norm(x))


def _band(T, tol):
    return tol * max(np.linalg.norm(T.matrix), np.finfo(float).tiny)


def cosine(T, config=None, extra_starts=(), check_positive=True):
    """Estimate ``cos T`` from above with a witness.

    Raises
    ------
    NotPositiveError
        ``T`` fails ``<Tx, x> >= 0``.
    DegenerateError
        ``T`` is the zero operator.
    """
    cfg = config or SearchConfig()
    if T.is_zero():
        raise DegenerateError("cosine is undefined for the zero operator")
    if check_positive:
        rep = positivity_report(T, tol=cfg.tol)
        if not rep.positive:
            raise NotPositiveError(
                f"operator is not positive: <Tx,x> = {rep.min_quadratic:.3e} "
                f"at x = {rep.witness.tolist()}")
    sp = T.space
    A = T.matrix
    S = T.symmetric_part().matrix
    band = _band(T, cfg.tol)

    def fun(x):
        ax = A @ x
        d = sp.dual_norm(ax)
        if d <= band * np.linalg.norm(x):
            return np.inf, np.zeros_like(x)
        nx = sp.norm(x)
        sx = S @ x
        num = sx @ x
        r = num / (d * nx)
        g = 2.0 * sx / (d * nx) - r * (A.T @ sp.dual_norm_grad(ax)) / d \
            - r * sp.norm_grad(x) / nx
        return r, g

    def batch(X):
        d = sp.dual_norm(X @ A.T)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = T.quadratic(X) / (d * sp.norm(X))
        return np.where(d > band, v, np.inf)

    res = sphere_minimize(fun, batch, sp.dim, cfg, extra_starts=extra_starts)
    value = float(np.clip(res.value, 0.0, 1.0))
    witness = sp.normalize(res.witness)
    return CosineResult(value, witness, res.starts, cfg.seed, cfg.tol)


def angle(result):
    """Operator angle ``arccos(cos T)`` in radians."""
    value = result.value if isinstance(result, CosineResult) else float(result)
    return float(np.arccos(np.clip(value, -1.0, 1.0)))


def _form_orthogonal_pairs(S, sp, rng, n):
    """Pairs ``(x, y)`` with ``<Sx, y> = 0`` for a symmetric ``S``."""
    X = rng.standard_normal((n, sp.dim))
    Y = rng.standard_normal((n, sp.dim)) * np.exp(rng.uniform(-3, 3, (n, 1)))
    SX = X @ S.T
    a = -np.sum(SX * Y, axis=1) / np.sum(SX * X, axis=1)
    return X, Y + a[:, None] * X


@dataclass(frozen=True)
class ZeroCosineStudy:
    cos: CosineResult
    hes: float
    ineq_c: float
    bound: float
    worst_margin: float
    chain_ok: bool
    pairs: int


def zero_cosine_study(T, config=None, n_pairs=10_000, tol=1e-9):
    """Quantities of the zero-cosine argument for one operator.

    Computes ``delta`` (cosine estimate), the smallest ``c`` with
    ``||T*x|| <= c ||Tx||``, the ``<Tx,x> >= c||Tx||^2`` constant, and
    checks ``||x + y|| >= 2 delta / (1 + c) ||x||`` on ``n_pairs`` sampled
    pairs orthogonal for ``<Sx, y> = 0`` with ``S = (T + T*)/2``.
    """
    cfg = config or SearchConfig()
    sp = T.space
    cos = cosine(T, cfg)
    hes = hes_constant(T, cfg)
    c = ineq_constant(T, cfg)
    delta = cos.value
    bound = 2.0 * delta / (1.0 + c)
    S = T.symmetric_part().matrix
    if delta == 0.0 or not np.any(S):
        return ZeroCosineStudy(cos, hes, c, bound, np.inf, True, 0)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 4]))
    X, Y = _form_orthogonal_pairs(S, sp, rng, n_pairs)
    margin = sp.norm(X + Y) - bound * sp.norm(X)
    worst = float(np.min(margin / sp.norm(X)))
    return ZeroCosineStudy(cos, hes, c, bound, worst, worst >= -tol, n_pairs)


@dataclass(frozen=True)
class AdjointInequality:
    delta: float
    ok: bool
    worst_margin: float
    samples: int


def adjoint_cosine_inequality(A, n_samples=10_000, config=None, tol=1e-9,
                              delta=None):
    """Check ``||A* x||_* >= delta ||Ax||_*`` on random ``x``.

    ``delta`` defaults to the cosine estimate of ``A``; it must be positive.
    """
    cfg = config or SearchConfig()
    if delta is None:
        delta = cosine(A, cfg).value
    if delta <= 0:
        raise DegenerateError("adjoint inequality needs a positive cosine")
    sp = A.space
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 9]))
    X = sp.sample_sphere(rng, n_samples)
    lhs = sp.dual_norm(X @ A.matrix)
    rhs = delta * sp.dual_norm(X @ A.matrix.T)
    worst = float(np.min(lhs - rhs))
    return AdjointInequality(float(delta), worst >= -tol, worst, n_samples)


def identity_operator(space):
    """The coordinate identity as an operator ``X -> X*``."""
    return OperatorToDual(np.eye(space.dim), space)
