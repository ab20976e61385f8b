"""Operators ``T: X -> X*`` and the bilinear forms they define.

``a(x, z) = <Tx, z>`` with ``T`` a dense matrix acting on coordinates.  The
adjoint restricted to ``X`` is the transpose; the constants attached to an
operator (coercivity, the ``<Tx,x> >= c ||Tx||^2`` constant, the
``||T*x|| <= c ||Tx||`` constant, operator norm) are infima/suprema of
degree-0 ratios and are computed with :mod:`vilab.search`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DegenerateError
from .search import SearchConfig, sphere_maximize, sphere_minimize
from .spaces import Space, pairing

__all__ = [
    "OperatorToDual", "BilinearForm", "PositivityReport", "SymmetrizedForm",
    "coercivity_constant", "positivity_report", "hes_constant",
    "ineq_constant", "operator_norm", "symmetrized_inner", "is_symmetric",
]


class OperatorToDual:
    """Dense matrix ``A`` realizing ``T: X -> X*`` on a :class:`Space`."""

    __slots__ = ("_a", "_space")

    def __init__(self, matrix, space):
        a = np.array(matrix, dtype=float)
        if a.ndim != 2 or a.shape != (space.dim, space.dim):
            raise DimensionError(
                f"matrix shape {a.shape} does not match dimension {space.dim}")
        a.setflags(write=False)
        self._a, self._space = a, space

    @property
    def matrix(self):
        return self._a

    @property
    def space(self):
        return self._space

    @property
    def dim(self):
        return self._space.dim

    def __repr__(self):
        return f"OperatorToDual({self._a.tolist()!r}, {self._space!r})"

    def apply(self, x):
        x = self._space.check(x)
        return x @ self._a.T

    __call__ = apply

    def adjoint(self):
        return OperatorToDual(self._a.T, self._space)

    def symmetric_part(self):
        return OperatorToDual(0.5 * (self._a + self._a.T), self._space)

    def quadratic(self, x):
        """``<Tx, x>`` evaluated through the symmetric part.

        Antisymmetric contributions cancel exactly in the matrix sum, so an
        antisymmetric ``T`` gives an exact zero here.
        """
        s = 0.5 * (self._a + self._a.T)
        x = self._space.check(x)
        return np.sum((x @ s) * x, axis=-1)

    def scaled(self, lam):
        return OperatorToDual(lam * self._a, self._space)

    def is_zero(self):
        return not np.any(self._a)

    def to_dict(self):
        return {"space": self._space.to_dict(), "matrix": self._a.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["matrix"], Space.from_dict(data["space"]))


class BilinearForm:
    """Bounded bilinear form ``a(x, z) = <Tx, z>``."""

    __slots__ = ("op",)

    def __init__(self, op):
        if not isinstance(op, OperatorToDual):
            raise TypeError("BilinearForm wraps an OperatorToDual")
        self.op = op

    @classmethod
    def from_matrix(cls, matrix, space):
        return cls(OperatorToDual(matrix, space))

    @property
    def space(self):
        return self.op.space

    @property
    def matrix(self):
        return self.op.matrix

    def __call__(self, x, z):
        return pairing(self.op(x), z)

    def __repr__(self):
        return f"BilinearForm({self.op!r})"


def is_symmetric(T):
    return np.array_equal(T.matrix, T.matrix.T)


def _band(T, tol):
    return tol * max(np.linalg.norm(T.matrix), np.finfo(float).tiny)


def coercivity_constant(T, config=None):
    """``inf_{x != 0} <Tx, x> / ||x||^2``; non-positive means not coercive."""
    sp = T.space
    S = T.symmetric_part().matrix

    def fun(x):
        sx = S @ x
        num = sx @ x
        nx = sp.norm(x)
        g = 2.0 * sx / nx**2 - 2.0 * num * sp.norm_grad(x) / nx**3
        return num / nx**2, g

    def batch(X):
        return T.quadratic(X) / sp.norm(X) ** 2

    res = sphere_minimize(fun, batch, sp.dim, config)
    return res.value


@dataclass(frozen=True)
class PositivityReport:
    positive: bool
    strictly_positive: bool
    symmetric: bool
    min_quadratic: float
    witness: np.ndarray
    note: str = ("in finite dimensions strict positivity coincides with "
                 "coercivity")


def positivity_report(T, tol=1e-9, config=None):
    """Positivity, strict positivity and symmetry verdicts for ``T``.

    The sign of ``inf <Tx,x>`` on any sphere is the sign of the smallest
    eigenvalue of the symmetric part, so the minimization is done spectrally
    on the Euclidean sphere and cross-checked by sampling; a witness (the
    minimizing direction, normalized in the space norm) accompanies every
    verdict.
    """
    sp = T.space
    S = T.symmetric_part().matrix
    evals, evecs = np.linalg.eigh(S)
    x = evecs[:, 0]
    val = float(evals[0])
    cfg = config or SearchConfig(samples=10_000)
    rng = np.random.default_rng(cfg.seed)
    X = rng.standard_normal((cfg.samples, sp.dim))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    qs = T.quadratic(X)
    i = int(np.argmin(qs))
    if qs[i] < val:
        val, x = float(qs[i]), X[i]
    scale = max(np.abs(S).max(), 1.0)
    witness = sp.normalize(x)
    return PositivityReport(
        positive=val >= -tol * scale,
        strictly_positive=val > tol * scale,
        symmetric=is_symmetric(T),
        min_quadratic=val,
        witness=witness,
    )


def hes_constant(T, config=None):
    """``inf_{Tx != 0} <Tx, x> / ||Tx||_*^2``."""
    if T.is_zero():
        raise DegenerateError("hes constant is undefined for the zero operator")
    cfg = config or SearchConfig()
    sp = T.space
    A = T.matrix
    S = T.symmetric_part().matrix
    band = _band(T, cfg.tol)

    def fun(x):
        ax = A @ x
        d = sp.dual_norm(ax)
        if d <= band:
            return np.inf, np.zeros_like(x)
        sx = S @ x
        num = sx @ x
        g = 2.0 * sx / d**2 - 2.0 * num * (A.T @ sp.dual_norm_grad(ax)) / d**3
        return num / d**2, g

    def batch(X):
        d = sp.dual_norm(X @ A.T)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = T.quadratic(X) / d**2
        return np.where(d > band, v, np.inf)

    return sphere_minimize(fun, batch, sp.dim, cfg).value


def ineq_constant(T, config=None):
    """Smallest ``c`` with ``||T*x||_* <= c ||Tx||_*`` on ``{Tx != 0}``."""
    if T.is_zero():
        raise DegenerateError("ineq constant is undefined for the zero operator")
    cfg = config or SearchConfig()
    sp = T.space
    A = T.matrix
    band = _band(T, cfg.tol)

    def fun(x):
        ax, atx = A @ x, A.T @ x
        d = sp.dual_norm(ax)
        if d <= band:
            return -np.inf, np.zeros_like(x)
        e = sp.dual_norm(atx)
        ge = A @ sp.dual_norm_grad(atx) if e > 0 else np.zeros_like(x)
        g = ge / d - e * (A.T @ sp.dual_norm_grad(ax)) / d**2
        return e / d, g

    def batch(X):
        d = sp.dual_norm(X @ A.T)
        e = sp.dual_norm(X @ A)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = e / d
        return np.where(d > band, v, -np.inf)

    starts = [] if is_symmetric(T) else list(np.eye(sp.dim))
    return sphere_maximize(fun, batch, sp.dim, cfg, extra_starts=starts).value


def operator_norm(T, config=None):
    """``sup_{x != 0} ||Tx||_* / ||x||``."""
    sp = T.space
    A = T.matrix
    if T.is_zero():
        return 0.0

    def fun(x):
        ax = A @ x
        d = sp.dual_norm(ax)
        nx = sp.norm(x)
        if d == 0:
            return 0.0, np.zeros_like(x)
        g = (A.T @ sp.dual_norm_grad(ax)) / nx - d * sp.norm_grad(x) / nx**2
        return d / nx, g

    def batch(X):
        return sp.dual_norm(X @ A.T) / sp.norm(X)

    return sphere_maximize(fun, batch, sp.dim, config).value


@dataclass(frozen=True)
class SymmetrizedForm:
    form: BilinearForm
    is_inner_product: bool
    min_eigenvalue: float


def symmetrized_inner(a, tol=1e-12):
    """``(x, y) = (a(x, y) + a(y, x)) / 2`` with an inner-product flag.

    The flag is set when the symmetric matrix is positive definite, which is
    the case for every coercive ``a``.
    """
    S = a.op.symmetric_part()
    lam = float(np.linalg.eigvalsh(S.matrix)[0])
    scale = max(np.abs(S.matrix).max(), 1.0)
    return SymmetrizedForm(BilinearForm(S), lam > tol * scale, lam)
