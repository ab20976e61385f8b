"""Multi-start minimization of degree-0 homogeneous ratios on a sphere.

Every constant in the package (coercivity, cosine, operator norm, ...) is an
infimum or supremum of a ratio that is invariant under ``x -> t x``.  Such a
ratio only needs to be searched over a sphere, and because the ratio is
scale invariant its Euclidean gradient is already tangent to the Euclidean
sphere, so plain projected gradient descent with normalization works.

The search combines two independent routes:

* a sampling oracle over ``samples`` Gaussian directions, and
* projected gradient descent from ``starts`` seeded starting points
  (the best sampled directions plus fresh random ones), with Armijo
  backtracking by step halving.

The better of the two is reported, so the value is always an upper bound on
the true infimum (lower bound on a supremum).
"""

from dataclasses import dataclass, replace

import numpy as np

__all__ = ["SearchConfig", "SearchResult", "sphere_minimize", "sphere_maximize"]

_CHUNK = 8192


@dataclass(frozen=True)
class SearchConfig:
    """Budget and reproducibility knobs for :func:`sphere_minimize`."""

    starts: int = 32
    iters: int = 500
    samples: int = 100_000
    seed: int = 0
    tol: float = 1e-9

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class SearchResult:
    value: float
    witness: np.ndarray
    sample_value: float
    descent_value: float
    samples: int
    starts: int
    seed: int


def _descend(fun, x, iters, gtol=1e-14, ftol=1e-15):
    f, g = fun(x)
    t = 1.0
    for _ in range(iters):
        g = g - (g @ x) * x
        gg = g @ g
        if not np.isfinite(f) or gg <= gtol * gtol:
            break
        while True:
            y = x - t * g
            y /= np.linalg.norm(y)
            fy, gy = fun(y)
            if fy <= f - 0.5 * t * gg:
                break
            t *= 0.5
            if t < 1e-18:
                return x, f
        stalled = f - fy <= ftol * max(1.0, abs(f))
        x, f, g = y, fy, gy
        if stalled:
            break
        t *= 2.0
    return x, f


def sphere_minimize(fun, batch, dim, config=None, extra_starts=()):
    """Minimize a scale-invariant ratio over ``R^dim \\ {0}``.

    Parameters
    ----------
    fun : callable
        ``fun(x) -> (value, gradient)`` for a single 1-D point.  Points that
        must be excluded should return ``(inf, zeros)``.
    batch : callable
        ``batch(X) -> values`` for a stack ``X`` of shape ``(m, dim)``;
        excluded rows must evaluate to ``inf``.
    dim : int
        Ambient dimension.
    config : SearchConfig, optional
    extra_starts : sequence of arrays
        Additional deterministic starting points (tried before random ones).
    """
    cfg = config or SearchConfig()
    rng = np.random.default_rng(cfg.seed)

    best_s, best_sx = np.inf, None
    keep = max(1, min(cfg.starts // 4, 8))
    pool_v, pool_x = [], []
    remaining = cfg.samples
    while remaining > 0:
        m = min(_CHUNK, remaining)
        X = rng.standard_normal((m, dim))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        v = np.asarray(batch(X), dtype=float)
        v = np.where(np.isnan(v), np.inf, v)
        idx = np.argsort(v)[:keep]
        pool_v.extend(v[idx].tolist())
        pool_x.extend(X[idx])
        remaining -= m
    if pool_v:
        order = np.argsort(pool_v)[:keep]
        best_s = float(pool_v[order[0]])
        best_sx = pool_x[order[0]]
        seeds = [pool_x[i] for i in order if np.isfinite(pool_v[i])]
    else:
        seeds = []

    starts = [np.asarray(s, float) / np.linalg.norm(s) for s in extra_starts]
    starts += seeds
    while len(starts) < cfg.starts + len(extra_starts):
        z = rng.standard_normal(dim)
        starts.append(z / np.linalg.norm(z))

    best_d, best_dx = np.inf, None
    for x0 in starts:
        x, f = _descend(fun, x0.copy(), cfg.iters)
        if f < best_d:
            best_d, best_dx = f, x

    if best_dx is not None and (best_sx is None or best_d <= best_s):
        value, witness = best_d, best_dx
    else:
        value, witness = best_s, best_sx
    if witness is None:
        witness = np.full(dim, np.nan)
    return SearchResult(float(value), np.asarray(witness), float(best_s),
                        float(best_d), cfg.samples, len(starts), cfg.seed)


def sphere_maximize(fun, batch, dim, config=None, extra_starts=()):
    """Maximize a scale-invariant ratio; same contract as :func:`sphere_minimize`.

    Excluded points should return ``-inf`` here.
    """
    def neg(x):
        f, g = fun(x)
        return -f, -g

    res = sphere_minimize(neg, lambda X: -np.asarray(batch(X)), dim, config,
                          extra_starts)
    return replace(res, value=-res.value, sample_value=-res.sample_value,
                   descent_value=-res.descent_value)
