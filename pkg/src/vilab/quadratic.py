"""Continuous quadratic forms ``q(x) = <Tx, x> / 2`` with symmetric ``T``.

Differentiating ``q`` directly gives ``q'(x) = Tx``; :func:`gradient` uses
that convention throughout, and :func:`epsilon_witness` searches for

    q(x) < eps * ||q'(x)||_* * ||x||,

which under ``q' = T`` is the cosine ratio of ``T`` dropping below
``2 * eps``.
"""

from dataclasses import dataclass

import numpy as np

from .cosine import cosine, cosine_ratio
from .errors import NoWitnessError
from .operators import OperatorToDual, is_symmetric, positivity_report
from .search import SearchConfig

__all__ = ["QuadraticForm", "fd_check", "epsilon_witness", "witness_ratio"]


@dataclass(frozen=True)
class QuadraticForm:
    T: OperatorToDual

    def __post_init__(self):
        if not is_symmetric(self.T):
            raise ValueError("quadratic forms correspond to symmetric operators")

    @classmethod
    def from_matrix(cls, matrix, space):
        return cls(OperatorToDual(matrix, space))

    @property
    def space(self):
        return self.T.space

    def eval(self, x):
        return 0.5 * self.T.quadratic(x)

    __call__ = eval

    def gradient(self, x):
        return self.T(x)


def fd_check(q, x, h=1e-5):
    """Largest relative gap between central differences and the gradient."""
    x = q.space.check(x)
    g = q.gradient(x)
    E = np.eye(x.shape[0]) * h
    fd = (q.eval(x + E) - q.eval(x - E)) / (2.0 * h)
    return float(np.max(np.abs(fd - g) / (1.0 + np.abs(g))))


def witness_ratio(q, x):
    """``q(x) / (||q'(x)||_* ||x||)``; ``eps`` witnesses need this below ``eps``."""
    sp = q.space
    return float(q.eval(x) / (sp.dual_norm(q.gradient(x)) * sp.norm(x)))


def epsilon_witness(q, eps, config=None):
    """Return ``x`` with ``q(x) < eps ||q'(x)||_* ||x||``.

    If ``q`` takes a negative value its minimizing direction is returned at
    once.  Otherwise the cosine minimizer is run and its witness accepted
    only if the strict inequality holds on re-evaluation.

    Raises
    ------
    NoWitnessError
        The search ends with ratio ``>= eps``; the best ratio is attached.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    cfg = config or SearchConfig()
    sp = q.space
    rep = positivity_report(q.T, tol=0.0)
    if rep.min_quadratic < 0:
        x = rep.witness
        if q.eval(x) < eps * sp.dual_norm(q.gradient(x)) * sp.norm(x):
            return x
    if q.T.is_zero():
        raise NoWitnessError("q vanishes identically; q'(x) = 0 everywhere",
                             best_ratio=np.nan)
    x = cosine(q.T, cfg, check_positive=False).witness
    lhs = float(q.eval(x))
    rhs = float(eps * sp.dual_norm(q.gradient(x)) * sp.norm(x))
    if lhs < rhs:
        return x
    best = 0.5 * float(cosine_ratio(q.T, x))
    raise NoWitnessError(
        f"no eps-witness for eps = {eps:g}: best ratio q/(|q'||x|) = {best:.6g}",
        best_ratio=best, best_point=x)
