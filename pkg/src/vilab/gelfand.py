"""Discretized evolution triples ``l^p_w -> l^2_w -> (l^p_w)*``.

The embedding ``i`` is the coordinate identity and, with the unweighted
pairing, ``i*`` multiplies by the weights, so ``T = i* o i = diag(w)``.
Then ``<Tf, f> = ||f||_{2,w}^2`` and ``||Tf||_* = ||f||_{q,w}``, and the
cosine ratio of ``T`` is

    ratio(f) = ||f||_{2,w}^2 / (||f||_{q,w} ||f||_{p,w})  <=  1.

For ``p > 2`` the two-block vector (height ``1 + s`` on a fraction ``s^alpha``
of the cells, ``s`` elsewhere) with ``q < alpha < 2`` has

    ratio ~ s^(alpha/q - 1)   as s -> 0,

since the ``l^2`` and ``l^p`` norms are carried by the tall block and the
``l^q`` norm by the flat one.
"""

from dataclasses import dataclass
import csv
import math

import numpy as np

from .errors import ResolutionError
from .operators import OperatorToDual
from .spaces import Space

__all__ = [
    "EvolutionTriple", "SpikeWitness", "DecayRow", "DecayStudy",
    "triple_operator", "ratio", "spike_witness", "decay_study",
    "write_decay_csv", "CSV_HEADER",
]

CSV_HEADER = ("p", "n", "s", "alpha", "ratio", "predicted_bound")


class EvolutionTriple:
    """``X = l^p_w`` inside ``H = l^2_w``; ``p = 2`` is allowed as a control."""

    def __init__(self, p, n=None, weights=None):
        if weights is None:
            if n is None:
                raise ValueError("give n or weights")
            weights = np.full(int(n), 1.0 / int(n))
        w = np.asarray(weights, dtype=float)
        if float(p) < 2.0:
            raise ValueError("an evolution triple needs p >= 2")
        self.X = Space(w.shape[0], p, w)
        self.H = Space(w.shape[0], 2.0, w)

    @property
    def p(self):
        return self.X.p

    @property
    def q(self):
        return self.X.q

    @property
    def n(self):
        return self.X.dim

    @property
    def weights(self):
        return self.X.weights

    def __repr__(self):
        return f"EvolutionTriple(p={self.p:g}, n={self.n})"


def triple_operator(tr):
    """``T = i* o i = diag(w)`` as an operator ``X -> X*``."""
    return OperatorToDual(np.diag(tr.weights), tr.X)


def _lq(w, f, r):
    return np.sum(w * np.abs(f) ** r, axis=-1) ** (1.0 / r)


def ratio(tr, f):
    """``||f||_2^2 / (||f||_q ||f||_p)`` in the weighted norms of ``tr``."""
    f = tr.X.check(f)
    w = tr.weights
    n2 = np.sum(w * f * f, axis=-1)
    if np.any(n2 == 0):
        raise ValueError("ratio is undefined at the zero vector")
    return n2 / (_lq(w, f, tr.q) * _lq(w, f, tr.p))


@dataclass(frozen=True)
class SpikeWitness:
    s: float
    alpha: float
    f: np.ndarray
    cells: int
    predicted_exponent: float


def default_alpha(p):
    q = p / (p - 1.0)
    return 0.5 * (q + 2.0)


def _two_block(n, s, alpha):
    m = math.ceil(s**alpha * n)
    f = np.full(n, s)
    f[:m] = 1.0 + s
    return f, m


def spike_witness(tr, s, alpha=None):
    """Two-block witness driving :func:`ratio` to zero like ``s^(alpha/q - 1)``.

    Raises
    ------
    ValueError
        ``p = 2``, ``s`` outside ``(0, 1)`` or ``alpha`` outside ``(q, 2)``.
    ResolutionError
        ``n < s^(-alpha)``: the tall block would be narrower than one cell.
    """
    if tr.p <= 2.0:
        raise ValueError("spike witnesses need p > 2")
    q = tr.q
    alpha = default_alpha(tr.p) if alpha is None else float(alpha)
    if not (q < alpha < 2.0):
        raise ValueError(f"alpha must lie in ({q:.6g}, 2), got {alpha:g}")
    if not (0.0 < s < 1.0):
        raise ValueError("s must lie in (0, 1)")
    if tr.n < s ** -alpha:
        raise ResolutionError(
            f"n = {tr.n} is below s^-alpha = {s ** -alpha:.6g}")
    f, m = _two_block(tr.n, s, alpha)
    return SpikeWitness(float(s), alpha, f, m, alpha / q - 1.0)


@dataclass(frozen=True)
class DecayRow:
    p: float
    n: int
    s: float
    alpha: float
    ratio: float
    predicted_bound: float

    def resolved(self, factor=10.0):
        """Whether ``n >= factor * s^-alpha`` (the asymptotic regime)."""
        return self.n >= factor * self.s ** -self.alpha


@dataclass
class DecayStudy:
    rows: list
    monotone: dict
    min_ratio: float
    decays: bool
    constant: float

    def slope(self, n=None, factor=10.0):
        """Least-squares slope of ``log ratio`` against ``log s``.

        Uses rows for ``n`` (default: the largest) in the resolved regime.
        """
        n = max(r.n for r in self.rows) if n is None else n
        pts = [(math.log(r.s), math.log(r.ratio)) for r in self.rows
               if r.n == n and r.resolved(factor)]
        if len(pts) < 2:
            raise ValueError("need at least two resolved rows to fit a slope")
        x, y = np.array(pts).T
        return float(np.polyfit(x, y, 1)[0])


def decay_study(p, n_list, s_list, alpha=None):
    """Grid of spike-witness ratios over ``(n, s)``.

    For ``p = 2`` the two-block vectors are evaluated with ``alpha = 1.5`` as
    a control (every ratio is 1).  ``predicted_bound`` is the leading-order
    ``s^(alpha/q - 1)``; ``constant`` is the largest observed
    ``ratio / predicted_bound`` over resolved rows.
    """
    p = float(p)
    control = p == 2.0
    if alpha is None:
        alpha = 1.5 if control else default_alpha(p)
    q = p / (p - 1.0)
    expo = alpha / q - 1.0
    rows = []
    for n in sorted(int(v) for v in n_list):
        tr = EvolutionTriple(p, n)
        for s in sorted(float(v) for v in s_list):
            if control:
                f, _ = _two_block(n, s, alpha)
            else:
                f = spike_witness(tr, s, alpha).f
            rows.append(DecayRow(p, n, s, float(alpha), float(ratio(tr, f)),
                                 float(s**expo)))
    monotone = {}
    for n in sorted({r.n for r in rows}):
        rs = [r.ratio for r in rows if r.n == n]  # sorted by increasing s
        monotone[n] = bool(np.all(np.diff(rs) > 0))
    min_ratio = min(r.ratio for r in rows)
    decays = (not control) and all(monotone.values()) and min_ratio < 1.0 - 1e-12
    res = [r.ratio / r.predicted_bound for r in rows if r.resolved()]
    constant = max(res) if res else float("nan")
    return DecayStudy(rows, monotone, float(min_ratio), bool(decays), float(constant))


def write_decay_csv(rows, path_or_file):
    """Write rows with the ``p,n,s,alpha,ratio,predicted_bound`` header."""
    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([f"{r.p:.12g}", str(r.n), f"{r.s:.12g}", f"{r.alpha:.12g}",
                        f"{r.ratio:.12g}", f"{r.predicted_bound:.12g}"])

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            emit(fh)
