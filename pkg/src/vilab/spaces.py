"""Finite-dimensional weighted l^p spaces and their duals.

A :class:`Space` is ``R^n`` with the norm

    ||x||_p = (sum_i w_i |x_i|^p)^(1/p),     1 < p < inf,  w_i > 0.

Functionals are plain coordinate vectors acting through the unweighted
pairing ``<f, x> = sum_i f_i x_i``; all weights live in the norms.  Under
this convention the dual norm is again a weighted l^q norm with weights
``w_i^(1-q)``, so :meth:`Space.dual` returns an honest :class:`Space` and
adjoints are plain matrix transposes.

Points and functionals are represented by 1-D ``numpy`` arrays.  Norm
methods broadcast over leading axes, so a stack of vectors of shape
``(m, n)`` gives ``m`` norms.
"""

import numpy as np

from .errors import DimensionError

__all__ = ["Space", "pairing", "uniform_space"]


class Space:
    """Weighted ``l^p`` structure on ``R^n``.

    Parameters
    ----------
    dim : int
        Dimension ``n``.
    p : float
        Exponent, strictly between 1 and infinity.
    weights : array_like, optional
        Positive weights of length ``dim``; defaults to all ones.
    """

    __slots__ = ("_dim", "_p", "_w")

    def __init__(self, dim, p, weights=None):
        dim = int(dim)
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        p = float(p)
        if not (1.0 < p < np.inf):
            raise ValueError(f"exponent must lie in (1, inf), got {p}")
        if weights is None:
            w = np.ones(dim)
        else:
            w = np.array(weights, dtype=float).reshape(-1)
        if w.shape != (dim,):
            raise DimensionError(f"expected {dim} weights, got {w.shape[0]}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be finite and strictly positive")
        w.setflags(write=False)
        self._dim, self._p, self._w = dim, p, w

    @property
    def dim(self):
        return self._dim

    @property
    def p(self):
        return self._p

    @property
    def q(self):
        """Conjugate exponent, ``1/p + 1/q = 1``."""
        return self._p / (self._p - 1.0)

    @property
    def weights(self):
        return self._w

    def __repr__(self):
        return f"Space(dim={self._dim}, p={self._p:g}, weights={self._w.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Space):
            return NotImplemented
        return (self._dim == other._dim and self._p == other._p
                and np.array_equal(self._w, other._w))

    def __hash__(self):
        return hash((self._dim, self._p, self._w.tobytes()))

    def is_hilbert(self):
        return self._p == 2.0

    def check(self, x, what="vector"):
        """Return ``x`` as a float array, raising on a trailing-axis mismatch."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 or x.shape[-1] != self._dim:
            raise DimensionError(
                f"{what} has shape {x.shape}, space has dimension {self._dim}")
        return x

    # -- primal side -------------------------------------------------------

    def norm(self, x):
        return _scaled_norm(self.check(x), self._w, self._p)

    def norm_grad(self, x):
        """Gradient of :meth:`norm` at ``x != 0``; equals ``J(x) / ||x||^(p-1)``."""
        x = self.check(x)
        nx = self.norm(x)
        return self.duality_map(x) / nx ** (self._p - 1.0)

    def duality_map(self, x):
        """``J(x)_i = w_i |x_i|^(p-1) sign(x_i)``.

        Satisfies ``<J(x), x> = ||x||^p`` and ``||J(x)||_* = ||x||^(p-1)``.
        """
        x = self.check(x)
        if x.ndim == 1 and not np.any(x):
            raise ValueError("duality map is undefined at the zero vector")
        return self._w * np.abs(x) ** (self._p - 1.0) * np.sign(x)

    def normalize(self, x):
        x = self.check(x)
        nx = self.norm(x)
        if x.ndim == 1 and nx == 0:
            raise ValueError("cannot normalize the zero vector")
        return x / np.expand_dims(nx, -1) if x.ndim > 1 else x / nx

    # -- dual side ---------------------------------------------------------

    def dual(self):
        """The dual space: exponent ``q`` and weights ``w^(1-q)``."""
        return Space(self._dim, self.q, self._w ** (1.0 - self.q))

    def dual_norm(self, f):
        q = self.q
        return _scaled_norm(self.check(f, "functional"), self._w ** (1.0 - q), q)

    def dual_norm_grad(self, f):
        f = self.check(f, "functional")
        q = self.q
        nf = self.dual_norm(f)
        return self._w ** (1.0 - q) * np.abs(f) ** (q - 1.0) * np.sign(f) / nf ** (q - 1.0)

    def riesz(self, f):
        """Riesz map of the weighted l^2 structure, ``(G f)_i = f_i / w_i``."""
        return self.check(f, "functional") / self._w

    # -- sampling ----------------------------------------------------------

    def sample_sphere(self, rng, size=None):
        """Gaussian directions rescaled onto the unit sphere of this norm."""
        shape = (self._dim,) if size is None else (size, self._dim)
        g = rng.standard_normal(shape)
        return self.normalize(g)

    # -- serialization -----------------------------------------------------

    def to_dict(self):
        return {"dim": self._dim, "p": self._p, "weights": self._w.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["dim"], data["p"], data.get("weights"))


def _scaled_norm(x, w, p):
    # divide by the largest entry first so |x|^p neither under- nor overflows
    a = np.abs(x)
    m = np.max(a, axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    r = np.sum(w * (a / safe) ** p, axis=-1) ** (1.0 / p)
    return r * m[..., 0]


def uniform_space(n, p, measure=1.0):
    """``l^p`` on ``n`` equal cells of total measure ``measure``."""
    return Space(n, p, np.full(n, measure / n))


def pairing(f, x):
    """Unweighted duality pairing ``sum_i f_i x_i``."""
    f = np.asarray(f, dtype=float)
    x = np.asarray(x, dtype=float)
    if f.shape[-1:] != x.shape[-1:]:
        raise DimensionError(f"cannot pair shapes {f.shape} and {x.shape}")
    return np.sum(f * x, axis=-1)
