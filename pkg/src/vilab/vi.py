"""Variational inequalities ``a(x, z - x) >= <h, z - x>`` for all ``z`` in ``M``.

Solved on weighted l^2 spaces by the projected fixed-point iteration

    x <- P_M(x - rho * G(Ax - h)),     rho = c / L^2,

where ``G`` is the Riesz map ``(Gf)_i = f_i / w_i``, ``c`` the coercivity
constant and ``L`` the operator norm.  The map is a contraction with factor
``sqrt(1 - c^2 / L^2)`` in the weighted norm.
"""

from dataclasses import dataclass, field
import itertools
import warnings

import numpy as np
from scipy import linalg

from .errors import (ConvergenceError, DimensionError, NotCoerciveError,
                     UnsupportedProjectionError)
from .operators import BilinearForm
from .spaces import Space, pairing

__all__ = [
    "ConvexSet", "WholeSpace", "Box", "Ball", "AffineSubspace", "Simplex",
    "VIProblem", "VISolution", "VIReport", "project", "solve_vi", "verify_vi",
    "subspace_galerkin_solve", "spectral_constants", "set_from_dict",
]

_VERTEX_LIMIT = 2**16


class ConvexSet:
    """Nonempty closed convex subset of ``R^n`` with a weighted-l^2 projection."""

    kind = "abstract"

    def project(self, x, space):
        raise NotImplementedError

    def contains(self, x, space, tol=1e-9):
        x = np.asarray(x, float)
        return space.norm(x - self.project(x, space)) <= tol * max(1.0, space.norm(x))

    def sample(self, rng, n, space, around=None):
        raise NotImplementedError

    def vertices(self, dim):
        return None

    def to_dict(self):
        raise NotImplementedError


def _require_l2(space):
    if space.p != 2.0:
        raise UnsupportedProjectionError(
            f"projections are weighted-l^2 only; space has p = {space.p}")


class WholeSpace(ConvexSet):
    kind = "whole"

    def project(self, x, space):
        _require_l2(space)
        return space.check(x).copy()

    def sample(self, rng, n, space, around=None):
        c = np.zeros(space.dim) if around is None else around
        scale = np.exp(rng.uniform(-3, 3, (n, 1)))
        return c + scale * rng.standard_normal((n, space.dim))

    def to_dict(self):
        return {"type": "whole"}


class Box(ConvexSet):
    kind = "box"

    def __init__(self, lo, hi):
        lo = np.array(lo, dtype=float)
        hi = np.array(hi, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise DimensionError("box bounds must be vectors of equal length")
        if np.any(lo > hi):
            raise ValueError("box requires lo <= hi componentwise")
        self.lo, self.hi = lo, hi

    def project(self, x, space):
        _require_l2(space)
        x = space.check(x)
        if self.lo.shape[0] != space.dim:
            raise DimensionError("box dimension does not match space")
        # diagonal weights separate the problem coordinatewise
        return np.clip(x, self.lo, self.hi)

    def sample(self, rng, n, space, around=None):
        lo, hi = self.lo, self.hi
        c = np.where(np.isfinite(lo), lo, np.where(np.isfinite(hi), hi, 0.0))
        if around is not None:
            c = np.clip(around, lo, hi)
        span = np.where(np.isfinite(hi - lo), hi - lo, 10.0)
        u = rng.uniform(size=(n, space.dim))
        finite = np.isfinite(lo) & np.isfinite(hi)
        z = np.where(finite, lo + u * (hi - lo),
                     c + span * rng.standard_normal((n, space.dim)))
        return np.clip(z, lo, hi)

    def vertices(self, dim):
        if not (np.all(np.isfinite(self.lo)) and np.all(np.isfinite(self.hi))):
            return None
        if 2**dim > _VERTEX_LIMIT:
            return None
        corners = itertools.product(*zip(self.lo, self.hi))
        return np.array(list(corners), dtype=float)

    def to_dict(self):
        return {"type": "box", "lo": _fl(self.lo), "hi": _fl(self.hi)}


class Ball(ConvexSet):
    kind = "ball"

    def __init__(self, center, radius):
        self.center = np.array(center, dtype=float)
        self.radius = float(radius)
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    def project(self, x, space):
        _require_l2(space)
        d = space.check(x) - self.center
        r = space.norm(d)
        if r <= self.radius:
            return self.center + d
        return self.center + d * (self.radius / r)

    def sample(self, rng, n, space, around=None):
        u = space.sample_sphere(rng, n)
        rad = self.radius * rng.uniform(size=(n, 1)) ** (1.0 / space.dim)
        return self.center + rad * u

    def to_dict(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius}


class AffineSubspace(ConvexSet):
    """``offset + range(basis)``; ``basis`` is ``n x k`` of full column rank."""

    kind = "affine"

    def __init__(self, basis, offset=None):
        B = np.array(basis, dtype=float)
        if B.ndim == 1:
            B = B[:, None]
        if B.ndim != 2:
            raise DimensionError("basis must be an n x k matrix")
        n, k = B.shape
        if k and np.linalg.matrix_rank(B) < k:
            raise ValueError("basis must have full column rank")
        self.basis = B
        self.offset = np.zeros(n) if offset is None else np.array(offset, dtype=float)

    def project(self, x, space):
        _require_l2(space)
        x = space.check(x)
        B = self.basis
        if B.shape[1] == 0:
            return self.offset + 0.0 * x
        wd = space.weights[:, None] * B
        u = linalg.solve(B.T @ wd, wd.T @ (x - self.offset).T, assume_a="pos")
        return self.offset + (B @ u).T

    def sample(self, rng, n, space, around=None):
        k = self.basis.shape[1]
        scale = np.exp(rng.uniform(-3, 3, (n, 1)))
        return self.offset + scale * (rng.standard_normal((n, k)) @ self.basis.T)

    def to_dict(self):
        return {"type": "affine", "basis": self.basis.tolist(),
                "offset": self.offset.tolist()}


class Simplex(ConvexSet):
    """``{x >= 0, sum x_i = scale}``."""

    kind = "simplex"

    def __init__(self, scale=1.0):
        self.scale = float(scale)
        if not self.scale > 0:
            raise ValueError("simplex scale must be positive")

    def project(self, x, space):
        _require_l2(space)
        w = space.weights
        if not np.all(w == w[0]):
            raise UnsupportedProjectionError(
                "simplex projection requires uniform weights")
        x = space.check(x)
        X = np.atleast_2d(x)
        n = X.shape[1]
        u = -np.sort(-X, axis=1)
        css = np.cumsum(u, axis=1) - self.scale
        cond = u - css / np.arange(1, n + 1) > 0
        # last index where the sorted coordinate stays above the threshold
        rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
        theta = css[np.arange(X.shape[0]), rho] / (rho + 1)
        out = np.maximum(X - theta[:, None], 0.0)
        return out[0] if x.ndim == 1 else out

    def sample(self, rng, n, space, around=None):
        return self.scale * rng.dirichlet(np.ones(space.dim), size=n)

    def vertices(self, dim):
        return self.scale * np.eye(dim)

    def to_dict(self):
        return {"type": "simplex", "scale": self.scale}


def _fl(v):
    return [float(t) if np.isfinite(t) else ("inf" if t > 0 else "-inf") for t in v]


def set_from_dict(data):
    kind = data["type"]
    if kind == "whole":
        return WholeSpace()
    if kind == "box":
        return Box(np.array(data["lo"], dtype=float), np.array(data["hi"], dtype=float))
    if kind == "ball":
        return Ball(data["center"], data["radius"])
    if kind == "affine":
        return AffineSubspace(data["basis"], data.get("offset"))
    if kind == "simplex":
        return Simplex(data.get("scale", 1.0))
    raise ValueError(f"unknown convex set type {kind!r}")


def project(cset, x, space):
    """Weighted-l^2 nearest point of ``cset`` to ``x``."""
    return cset.project(x, space)


def spectral_constants(form):
    """Exact ``(c, L)`` of a form on a weighted l^2 space.

    With ``D = diag(w)^(-1/2)``, ``c`` is the smallest eigenvalue of the
    symmetric part of ``D A D`` and ``L`` its largest singular value.
    """
    sp = form.space
    _require_l2(sp)
    d = sp.weights ** -0.5
    K = d[:, None] * form.matrix * d[None, :]
    c = float(np.linalg.eigvalsh(0.5 * (K + K.T))[0])
    L = float(np.linalg.norm(K, 2))
    return c, L


@dataclass
class VIProblem:
    """Find ``x`` in ``set`` with ``a(x, z - x) >= <rhs, z - x>`` for all ``z``.

    ``allow_noncoercive`` admits forms with ``c <= 0`` (for instance strictly
    positive forms on bounded sets); :func:`solve_vi` then returns a
    best-effort iterate certified only by :func:`verify_vi`.
    """

    form: BilinearForm
    set: ConvexSet
    rhs: np.ndarray
    allow_noncoercive: bool = False
    coercivity: float = field(init=False)
    lipschitz: float = field(init=False)

    def __post_init__(self):
        sp = self.form.space
        if sp.p != 2.0:
            raise UnsupportedProjectionError(
                "variational inequalities are solved on weighted l^2 (p = 2)")
        self.rhs = sp.check(np.asarray(self.rhs, dtype=float), "rhs")
        self.coercivity, self.lipschitz = spectral_constants(self.form)
        if self.coercivity <= 0 and not self.allow_noncoercive:
            raise NotCoerciveError(
                "bilinear form is not coercive: a(x,x) >= c ||x||^2 fails "
                f"(best c = {self.coercivity:.6g})")

    @property
    def space(self):
        return self.form.space

    def to_dict(self):
        return {"space": self.space.to_dict(), "matrix": self.form.matrix.tolist(),
                "rhs": self.rhs.tolist(), "set": self.set.to_dict()}

    @classmethod
    def from_dict(cls, data, allow_noncoercive=False):
        sp = Space.from_dict(data["space"])
        form = BilinearForm.from_matrix(data["matrix"], sp)
        return cls(form, set_from_dict(data["set"]), data["rhs"],
                   allow_noncoercive=allow_noncoercive)


@dataclass
class VISolution:
    x: np.ndarray
    residual: float
    iterations: int
    step: float
    contraction: float
    uniqueness_gap: float = np.nan
    unique: bool = False
    history: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {"x": self.x.tolist(), "residual": self.residual,
                "iterations": self.iterations, "step": self.step,
                "contraction": self.contraction,
                "uniqueness_gap": self.uniqueness_gap, "unique": self.unique}


def _fixed_point(prob, x0, rho, tol, max_iter, record):
    sp = prob.space
    A, h, M = prob.form.matrix, prob.rhs, prob.set
    x = M.project(x0, sp)
    history = [x.copy()] if record else []
    for k in range(1, max_iter + 1):
        y = M.project(x - rho * sp.riesz(A @ x - h), sp)
        res = float(sp.norm(x - y))
        x = y
        if record:
            history.append(x.copy())
        if res < tol:
            return x, res, k, history
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations (residual {res:.3e})",
        best=x, residual=res)


def natural_residual(prob, x, rho=None):
    sp = prob.space
    if rho is None:
        rho = _step(prob)
    y = prob.set.project(x - rho * sp.riesz(prob.form.matrix @ x - prob.rhs), sp)
    return float(sp.norm(x - y))


def _step(prob):
    c, L = prob.coercivity, prob.lipschitz
    if c > 0:
        return c / L**2
    return 1.0 / L


def solve_vi(prob, tol=1e-10, max_iter=100_000, x0=None, seed=0, record=False):
    """Projected fixed-point solve with a uniqueness certificate.

    A second run from an independent random start must land within
    ``10 * tol`` of the first; the gap is stored on the solution.

    Raises
    ------
    ConvergenceError
        ``max_iter`` exceeded (coercive problems only; non-coercive problems
        return their best iterate instead).
    """
    sp = prob.space
    c, L = prob.coercivity, prob.lipschitz
    rho = _step(prob)
    q = float(np.sqrt(max(0.0, 1.0 - c**2 / L**2))) if c > 0 else 1.0
    rng = np.random.default_rng(seed)
    if x0 is None:
        x0 = np.zeros(sp.dim)
    # solutions contract at rate q; stop the iteration well inside tol
    inner = tol * (1.0 - q) if q < 1 else tol
    try:
        x, res, k, hist = _fixed_point(prob, np.asarray(x0, float), rho, inner,
                                       max_iter, record)
    except ConvergenceError as err:
        if prob.allow_noncoercive:
            x, res, k, hist = err.best, err.residual, max_iter, []
        else:
            raise
    res = natural_residual(prob, x, rho)
    gap = np.nan
    if c > 0:
        z0 = x + rng.standard_normal(sp.dim) * (1.0 + np.abs(x))
        try:
            x2, _, _, _ = _fixed_point(prob, z0, rho, inner, max_iter, False)
            gap = float(sp.norm(x - x2))
        except ConvergenceError:
            gap = np.inf
    return VISolution(x, res, k, rho, q, gap, bool(gap <= 10 * tol), hist)


@dataclass(frozen=True)
class VIReport:
    ok: bool
    worst_violation: float
    witness: np.ndarray
    samples: int

    def to_dict(self):
        return {"ok": self.ok, "worst_violation": self.worst_violation,
                "witness": None if self.witness is None else self.witness.tolist(),
                "samples": self.samples}


def verify_vi(x, prob, n_samples=10_000, seed=0, tol=1e-9, extra=None):
    """Check ``a(x, z - x) >= <h, z - x> - tol`` on feasible ``z``.

    ``z`` ranges over ``n_samples`` random feasible points, the vertices of a
    box or simplex (when there are at most 2^16 of them) and any ``extra``
    points supplied by the caller.
    """
    sp = prob.space
    x = sp.check(x)
    rng = np.random.default_rng(seed)
    Z = [prob.set.sample(rng, n_samples, sp, around=x)]
    V = prob.set.vertices(sp.dim)
    if V is not None:
        Z.append(V)
    if extra is not None:
        Z.append(np.atleast_2d(np.asarray(extra, float)))
    Z = np.vstack(Z)
    g = prob.form.matrix @ x - prob.rhs
    vals = pairing(g, Z - x)
    i = int(np.argmin(vals))
    worst = max(0.0, -float(vals[i]))
    witness = Z[i] if worst > 0 else None
    return VIReport(worst <= tol, worst, witness, Z.shape[0])


def subspace_galerkin_solve(a, basis, h):
    """Solve ``a(x, z) = <h, z>`` for all ``z`` in ``M = range(basis)``.

    ``basis`` may be an :class:`AffineSubspace` through the origin or an
    ``n x k`` matrix; ``k = 0`` returns the zero vector.
    """
    if isinstance(basis, AffineSubspace):
        if np.any(basis.offset):
            raise ValueError("Galerkin solve needs a subspace through the origin")
        B = basis.basis
    else:
        B = np.asarray(basis, dtype=float)
        if B.ndim == 1:
            B = B[:, None]
    sp = a.space
    h = sp.check(np.asarray(h, float), "rhs")
    if B.shape[1] == 0:
        return np.zeros(sp.dim)
    K = B.T @ a.matrix @ B
    try:
        with warnings.catch_warnings():
            # a zero pivot is reported below as LinAlgError
            warnings.simplefilter("ignore", linalg.LinAlgWarning)
            lu = linalg.lu_factor(K, check_finite=True)
    except linalg.LinAlgError as err:
        raise np.linalg.LinAlgError("singular reduced system") from err
    if np.any(np.abs(np.diag(lu[0])) <= 1e-14 * max(1.0, np.abs(K).max())):
        raise np.linalg.LinAlgError("singular reduced system")
    u = linalg.lu_solve(lu, B.T @ h)
    return B @ u
