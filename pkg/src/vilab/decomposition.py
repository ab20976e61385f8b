"""Annihilators, quotient norms and the Galerkin projection onto a subspace.

For a bilinear form ``a`` with matrix ``A`` and a subspace ``M = range(B)``,
the map ``pi o T`` restricted to ``M`` is represented in the coordinates
``pi(f) -> B^T f`` of ``X*/M^perp``.  Inverting it and composing with the
extension ``pi o T`` on all of ``X`` gives the projection

    P = B (B^T A B)^(-1) B^T A,

whose kernel ``{y : Ay in M^perp}`` complements ``M``.
"""

from dataclasses import dataclass
import warnings

import numpy as np
from scipy import linalg, optimize

from .errors import DegenerateError, DimensionError
from .search import SearchConfig, sphere_maximize, sphere_minimize
from .spaces import pairing

__all__ = [
    "Subspace", "AnnihilatorBasis", "ProjectionReport", "IsoConstants",
    "annihilator", "null_space", "stampacchia_projection",
    "quotient_distance", "quotient_distance_lower", "pi_T_iso_constants",
    "extension_projection",
]

_RANK_RTOL = 1e-10


def null_space(M):
    """Orthonormal basis of ``ker M`` via SVD.

    Singular values at or below ``1e-10`` times the largest column norm
    count as zero.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[1]
    if M.shape[0] == 0 or not np.any(M):
        return np.eye(n)
    _, s, vt = linalg.svd(M, full_matrices=True)
    cutoff = _RANK_RTOL * np.max(np.linalg.norm(M, axis=0))
    rank = int(np.sum(s > cutoff))
    return vt[rank:].T.copy()


class Subspace:
    """``M = range(basis)`` with ``basis`` an ``n x k`` matrix of rank ``k``."""

    def __init__(self, basis):
        B = np.array(basis, dtype=float)
        if B.ndim == 1:
            B = B[:, None]
        if B.ndim != 2:
            raise DimensionError("subspace basis must be an n x k matrix")
        k = B.shape[1]
        if k > B.shape[0]:
            raise ValueError("more basis vectors than dimensions")
        if k:
            s = linalg.svdvals(B)
            if s[-1] <= _RANK_RTOL * np.max(np.linalg.norm(B, axis=0)):
                raise ValueError("subspace basis must have full column rank")
        B.setflags(write=False)
        self.basis = B

    @classmethod
    def whole(cls, n):
        return cls(np.eye(n))

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, 0)))

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def ambient(self):
        return self.basis.shape[0]

    def to_dict(self):
        return {"basis": self.basis.tolist(), "n": self.ambient}

    @classmethod
    def from_dict(cls, data):
        B = np.array(data["basis"], dtype=float)
        if B.size == 0:
            return cls.zero(int(data["n"]))
        return cls(B)


@dataclass(frozen=True)
class AnnihilatorBasis:
    """Columns span ``{f : <f, m> = 0 for all m in M}``."""

    basis: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[1]


def annihilator(M):
    if M.dim == 0:
        return AnnihilatorBasis(np.eye(M.ambient))
    return AnnihilatorBasis(null_space(M.basis.T))


@dataclass(frozen=True)
class ProjectionReport:
    P: np.ndarray
    complement_basis: np.ndarray
    rank_P: int
    rank_complement: int

    def to_dict(self):
        return {"P": self.P.tolist(),
                "complement_basis": self.complement_basis.tolist(),
                "rank_P": self.rank_P, "rank_complement": self.rank_complement}


def _reduced(a, B):
    K = B.T @ a.matrix @ B
    if K.size:
        s = linalg.svdvals(K)
        if s[-1] <= 1e-13 * max(1.0, s[0]):
            raise DegenerateError("reduced system B^T A B is singular on M")
    return K


def stampacchia_projection(a, M):
    """Projection onto ``M`` along ``T^(-1)(M^perp)``.

    Raises :class:`DegenerateError` when ``a`` is degenerate on ``M``.
    """
    B = M.basis
    n = M.ambient
    if M.dim == 0:
        return ProjectionReport(np.zeros((n, n)), np.eye(n), 0, n)
    K = _reduced(a, B)
    P = B @ linalg.solve(K, B.T @ a.matrix)
    comp = null_space(B.T @ a.matrix)
    rank_P = int(np.linalg.matrix_rank(P, tol=1e-10 * max(1.0, np.abs(P).max())))
    return ProjectionReport(P, comp, rank_P, comp.shape[1])


def extension_projection(basis, S_on_M, S_hat):
    """Matrix of ``S^(-1) o S_hat`` for a bijection ``S: M -> Y``.

    Parameters
    ----------
    basis : (n, k) array
        Basis of ``M``; ``S_on_M`` acts on coordinates in this basis.
    S_on_M : (k, k) array
        Matrix of ``S`` from basis coordinates to coordinates of ``Y``.
    S_hat : (k, n) array
        An extension of ``S`` to all of ``X``; must satisfy
        ``S_hat @ basis == S_on_M``.
    """
    B = np.asarray(basis, dtype=float)
    S = np.atleast_2d(np.asarray(S_on_M, dtype=float))
    H = np.atleast_2d(np.asarray(S_hat, dtype=float))
    if not np.allclose(H @ B, S, atol=1e-10 * max(1.0, np.abs(S).max())):
        raise ValueError("S_hat does not extend S_on_M")
    if linalg.svdvals(S)[-1] <= 1e-13 * max(1.0, np.abs(S).max()):
        raise DegenerateError("S_on_M is not invertible")
    return B @ linalg.solve(S, H)


def quotient_distance(f, Mperp, space, return_point=False):
    """``inf_{g in M^perp} ||f + g||_*``, the norm of ``f + M^perp``.

    Exact weighted least squares at ``p = 2``; otherwise a BFGS descent
    started from the ``p = 2`` minimizer, accepted only if it decreases
    the objective.
    """
    f = space.check(np.asarray(f, float), "functional")
    N = Mperp.basis if isinstance(Mperp, AnnihilatorBasis) else np.asarray(Mperp)
    if N.shape[1] == 0:
        d = float(space.dual_norm(f))
        return (d, f.copy()) if return_point else d
    s = space.weights ** -0.5
    c0 = linalg.lstsq(s[:, None] * N, -s * f)[0]
    g0 = f + N @ c0
    best = float(space.dual_norm(g0))
    point = g0
    if space.p != 2.0 and best > 0:
        def obj(c):
            g = f + N @ c
            d = space.dual_norm(g)
            if d == 0:
                return 0.0, np.zeros_like(c)
            return d, N.T @ space.dual_norm_grad(g)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r = optimize.minimize(obj, c0, jac=True, method="BFGS",
                                  options={"gtol": 1e-13, "maxiter": 2000})
        cand = f + N @ r.x
        dv = float(space.dual_norm(cand))
        if dv < best:
            best, point = dv, cand
    return (best, point) if return_point else best


def quotient_distance_lower(f, M, space, config=None):
    """Dual route: ``sup_{m in M} <f, m> / ||m||``, searched over ``M``.

    Equal to :func:`quotient_distance` (the quotient ``X*/M^perp`` is the
    dual of ``M``); the search value is a lower bound.
    """
    f = np.asarray(f, float)
    B = M.basis
    if M.dim == 0:
        return 0.0

    def fun(u):
        m = B @ u
        nm = space.norm(m)
        v = f @ m
        return v / nm, B.T @ (f / nm - v * space.norm_grad(m) / nm**2)

    def batch(U):
        Mm = U @ B.T
        return (Mm @ f) / space.norm(Mm)

    return sphere_maximize(fun, batch, M.dim, config).value


@dataclass(frozen=True)
class IsoConstants:
    lower: float
    upper: float
    degenerate: bool

    def to_dict(self):
        return {"lower": self.lower, "upper": self.upper,
                "degenerate": self.degenerate}


def pi_T_iso_constants(a, M, config=None, tol=1e-9):
    """Bounds of ``||pi(T x)|| / ||x||`` over ``x`` in ``M``.

    ``lower > 0`` certifies that ``pi o T`` restricted to ``M`` is an
    isomorphism onto its range; ``degenerate`` flags ``lower <= tol``.
    """
    cfg = config or SearchConfig(starts=6, iters=100, samples=256)
    sp = a.space
    B = M.basis
    if M.dim == 0:
        return IsoConstants(0.0, 0.0, True)
    A = a.matrix
    N = annihilator(M).basis

    if sp.p == 2.0:
        # ||pi(f)|| = sup_m <f,m>/||m|| = ||R^{-T} B^T f|| with B^T W B = R^T R
        R = linalg.cholesky(B.T @ (sp.weights[:, None] * B))
        Rt_inv = linalg.solve_triangular(R, np.eye(M.dim), trans="T")
        K = Rt_inv @ (B.T @ A @ B) @ linalg.inv(R)
        s = linalg.svdvals(K)
        lo, hi = float(s[-1]), float(s[0])
        return IsoConstants(lo, hi, lo <= tol * max(1.0, hi))

    def make(sign):
        def fun(u):
            x = B @ u
            nx = sp.norm(x)
            d, g = quotient_distance(A @ x, N, sp, return_point=True)
            if d == 0:
                return 0.0, np.zeros_like(u)
            grad = B.T @ (A.T @ sp.dual_norm_grad(g)) / nx \
                - d * (B.T @ sp.norm_grad(x)) / nx**2
            return sign * d / nx, sign * grad

        def batch(U):
            X = U @ B.T
            v = np.array([quotient_distance(A @ x, N, sp) for x in X])
            return sign * v / sp.norm(X)
        return fun, batch

    lo = sphere_minimize(*make(1.0), M.dim, cfg).value
    hi = -sphere_minimize(*make(-1.0), M.dim, cfg).value
    return IsoConstants(lo, hi, lo <= tol * max(1.0, hi))


def galerkin_defect(a, P, M, y):
    """``max_j |<A(y - Py), b_j>|`` over basis vectors ``b_j`` of ``M``."""
    r = a.matrix @ (y - P @ y)
    return float(np.max(np.abs(pairing(M.basis.T, r)))) if M.dim else 0.0
