"""Orthogonality relations and seeded falsifiers for their structural properties.

Both concrete relations are linear in the second argument: ``x ⊥ y`` holds
iff ``<phi(x), y> = 0`` for a functional ``phi(x)``.  For Birkhoff-James
orthogonality in ``l^p`` (1 < p < inf) ``phi`` is the duality map; for the
form-induced relation ``<Sx, y> = 0`` it is ``x -> Sx``.  Orthogonal pairs
for the property testers are produced by resolving: for any ``x, y`` the
pair ``(x, a x + y)`` with ``a = -<phi(x), y> / <phi(x), x>`` is orthogonal.

A ``holds-on-samples`` verdict is evidence on ``N`` seeded trials, never a
proof; a ``counterexample`` verdict carries a witness that replays.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import DegenerateError, DimensionError
from .spaces import Space, pairing

__all__ = [
    "OrthRelation", "BirkhoffJames", "FormOrtho", "CustomPredicate",
    "PropertyReport", "PROPERTIES", "bj_orthogonal", "bj_minimization_oracle",
    "form_orthogonal", "resolve", "test_property", "boundedness_constant",
    "isom_condition_constant", "orth_condition_check", "sphere_sampler",
    "lattice_sampler",
]

PROPERTIES = ("nondegenerate", "symmetric", "homogeneous", "right_additive",
              "resolvable", "continuous")

HOLDS = "holds-on-samples"
COUNTER = "counterexample"


class OrthRelation:
    """An orthogonality predicate on a :class:`Space`."""

    kind = "abstract"

    def __init__(self, space, tol=1e-9):
        self.space = space
        self.tol = float(tol)

    def functional(self, x):
        """``phi(x)`` with ``x ⊥ y  <=>  <phi(x), y> = 0``."""
        raise NotImplementedError

    def defect(self, x, y):
        """Relative size of ``<phi(x), y>``; zero exactly on orthogonal pairs."""
        phi = self.functional(x)
        v = abs(float(pairing(phi, y)))
        scale = float(self.space.dual_norm(phi) * self.space.norm(y))
        return v / scale if scale > 0 else v

    def __call__(self, x, y):
        x = self.space.check(x)
        if not np.any(x):
            return True
        return self.defect(x, y) <= self.tol

    def resolve(self, x, y):
        return resolve(self, x, y)

    def to_dict(self):
        return {"type": self.kind, "space": self.space.to_dict(), "tol": self.tol}


class BirkhoffJames(OrthRelation):
    """``x ⊥ y`` iff ``||x + t y|| >= ||x||`` for every real ``t``."""

    kind = "bj"

    def functional(self, x):
        return self.space.duality_map(x)


class FormOrtho(OrthRelation):
    """``x ⊥ y`` iff ``<Sx, y> = 0`` for an operator ``S``."""

    kind = "form"

    def __init__(self, S, tol=1e-9, space=None):
        super().__init__(space or S.space, tol)
        self.S = S

    def functional(self, x):
        return self.S(x)

    def __call__(self, x, y):
        sx = self.S(self.space.check(x))
        v = abs(float(pairing(sx, y)))
        d = float(self.space.dual_norm(sx))
        if d == 0:
            return v <= self.tol
        return v <= self.tol * d * float(self.space.norm(y))

    def to_dict(self):
        out = super().to_dict()
        out["matrix"] = self.S.matrix.tolist()
        return out


class CustomPredicate(OrthRelation):
    """Wrap an arbitrary ``predicate(x, y) -> bool``.

    Pair-based property tests need ``functional``; without it only
    non-degeneracy can be tested.
    """

    kind = "custom"

    def __init__(self, predicate, space, tol=1e-9, functional=None):
        super().__init__(space, tol)
        self._pred = predicate
        self._phi = functional

    def functional(self, x):
        if self._phi is None:
            raise NotImplementedError("custom relation has no linear functional")
        return self._phi(x)

    def __call__(self, x, y):
        return bool(self._pred(np.asarray(x, float), np.asarray(y, float)))


def bj_orthogonal(space, x, y, tol=1e-9):
    """Birkhoff-James test through the duality map.

    Raises ``ValueError`` for ``x = 0``.
    """
    x = space.check(x)
    if not np.any(x):
        raise ValueError("Birkhoff-James test needs x != 0")
    return BirkhoffJames(space, tol)(x, y)


def bj_minimization_oracle(space, x, y, tol=1e-9):
    """Decide ``x ⊥ y`` by bounded 1-D minimization of ``t -> ||x + t y||``.

    Returns ``(orthogonal, t_min, min_value)``.  The map is convex and its
    minimizer lies in ``[-2||x||/||y||, 2||x||/||y||]``.
    """
    x = space.check(x)
    y = space.check(y)
    nx, ny = float(space.norm(x)), float(space.norm(y))
    if ny == 0:
        return True, 0.0, nx
    r = 2.0 * nx / ny

    def f(t):
        return float(space.norm(x + t * y))

    res = optimize.minimize_scalar(f, bounds=(-r, r), method="bounded",
                                   options={"xatol": 1e-12 * max(1.0, r)})
    t, v = float(res.x), float(res.fun)
    v0 = f(0.0)
    if v0 < v:
        t, v = 0.0, v0
    return v >= nx * (1.0 - tol), t, v


def form_orthogonal(rel, x, y):
    return rel(x, y)


def resolve(rel, x, y):
    """Scalar ``a`` with ``x ⊥ (a x + y)``.

    Raises :class:`DegenerateError` when ``<phi(x), x> = 0``.
    """
    x = rel.space.check(x)
    if not np.any(x):
        raise DegenerateError("cannot resolve along the zero vector")
    phi = rel.functional(x)
    den = float(pairing(phi, x))
    if den == 0.0 or abs(den) <= 1e-300:
        raise DegenerateError("<phi(x), x> vanishes; relation cannot resolve")
    return -float(pairing(phi, y)) / den


def sphere_sampler(space):
    def sample(rng):
        return space.sample_sphere(rng)
    return sample


def lattice_sampler(dim, radius=3):
    """Nonzero integer vectors with entries in ``[-radius, radius]``."""
    def sample(rng):
        while True:
            z = rng.integers(-radius, radius + 1, size=dim).astype(float)
            if np.any(z):
                return z
    return sample


@dataclass
class PropertyReport:
    property: str
    verdict: str
    witness: tuple = None
    samples: int = 0
    seed: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def holds(self):
        return self.verdict == HOLDS

    def to_dict(self):
        def enc(w):
            return None if w is None else [np.asarray(v).tolist() for v in w]
        return {"property": self.property, "verdict": self.verdict,
                "witness": enc(self.witness), "seed": self.seed,
                "samples": self.samples,
                "witnesses": [enc(w) for w in self.witnesses]}


def _orth_pair(rel, x, y0):
    a = resolve(rel, x, y0)
    return a * x + y0


def _nonzero_scalar(rng):
    s = rng.uniform(0.1, 3.0) * rng.choice([-1.0, 1.0])
    return float(s)


def _trial(rel, prop, sample, rng):
    """One trial; returns a witness tuple on failure, else None."""
    x = sample(rng)
    if prop == "nondegenerate":
        return (x,) if rel(x, x) else None
    y0 = sample(rng)
    if prop == "resolvable":
        try:
            a = resolve(rel, x, y0)
        except DegenerateError:
            return (x, y0)
        return None if rel(x, a * x + y0) else (x, y0)
    try:
        y = _orth_pair(rel, x, y0)
    except DegenerateError:
        return None
    if not np.any(y):
        return None
    if prop == "symmetric":
        return None if rel(y, x) else (x, y)
    if prop == "homogeneous":
        a, b = _nonzero_scalar(rng), _nonzero_scalar(rng)
        return None if rel(a * x, b * y) else (a * x, b * y)
    if prop == "right_additive":
        y2 = _orth_pair(rel, x, sample(rng))
        return None if rel(x, y + y2) else (x, y, y2)
    if prop == "continuous":
        d = sample(rng)
        ts = 10.0 ** -np.arange(1, 9)
        defects = []
        yk = y
        for t in ts:
            xk = x + t * d
            try:
                yk = _orth_pair(rel, xk, y0)
            except DegenerateError:
                return None
            defects.append(rel.defect(x, yk))
        # a continuous relation drives the defect to zero with t (possibly at
        # a Hölder rate, as J is near zero coordinates when p < 2); a jump
        # leaves it at the same size on every scale
        limit_ok = defects[-1] <= max(1e-6, rel.tol, 0.5 * max(defects[:3]))
        return None if limit_ok else (x, yk)
    raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")


def test_property(rel, prop, sampler=None, N=1000, seed=0, max_witnesses=1):
    """Seeded falsifier for one structural property of ``rel``.

    Stops at the first counterexample unless ``max_witnesses > 1``, in which
    case it keeps collecting distinct witnesses up to that many.
    """
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    sample = sampler or sphere_sampler(rel.space)
    rng = np.random.default_rng(seed)
    found = []
    used = 0
    for _ in range(N):
        used += 1
        w = _trial(rel, prop, sample, rng)
        if w is not None:
            found.append(w)
            if len(found) >= max_witnesses:
                break
    if found:
        return PropertyReport(prop, COUNTER, found[0], used, seed, found)
    return PropertyReport(prop, HOLDS, None, used, seed, [])


test_property.__test__ = False


def _orth_pairs(rel, sample, rng, N):
    for _ in range(N):
        x = sample(rng)
        try:
            y = _orth_pair(rel, x, sample(rng))
        except DegenerateError:
            continue
        y = y * np.exp(rng.uniform(-3.0, 3.0))
        if np.any(y):
            yield x, y


def boundedness_constant(rel, sampler=None, N=10_000, seed=0):
    """``inf ||x + y|| / ||x||`` over sampled orthogonal pairs, ``x != 0``.

    The relation is first checked for homogeneity.  The value is an upper
    bound on the best boundedness constant.
    """
    hom = test_property(rel, "homogeneous", sampler, N=min(N, 200), seed=seed)
    if not hom.holds:
        raise ValueError("boundedness constant needs a homogeneous relation")
    sample = sampler or sphere_sampler(rel.space)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    sp = rel.space
    best = np.inf
    for x, y in _orth_pairs(rel, sample, rng, N):
        best = min(best, float(sp.norm(x + y) / sp.norm(x)))
    if not np.isfinite(best):
        raise DegenerateError("no orthogonal pairs found")
    return best


def _constrained_pairs(space, dual_space, rng, N):
    """``(x, f)`` with ``<f, x> = 0``; ``f`` spans several magnitudes."""
    for _ in range(N):
        x = space.sample_sphere(rng)
        f = dual_space.sample_sphere(rng) * np.exp(rng.uniform(-6.0, 2.0))
        f = f - (f @ x) / (x @ x) * x
        yield x, f


def isom_condition_constant(T, sampler=None, N=10_000, seed=0):
    """``inf ||Tx + f||_* / ||Tx||_*`` over sampled pairs with ``<f, x> = 0``."""
    sp = T.space
    rng = np.random.default_rng(seed)
    best = np.inf
    for x, f in _constrained_pairs(sp, sp.dual(), rng, N):
        if sampler is not None:
            x = sampler(rng)
            f = f - (f @ x) / (x @ x) * x
        tx = T(x)
        d = float(sp.dual_norm(tx))
        if d == 0:
            continue
        best = min(best, float(sp.dual_norm(tx + f)) / d)
    return best


def orth_condition_check(T, rel, sampler=None, N=1000, seed=0, max_witnesses=1):
    """Test ``Tx ⊥ f`` whenever ``<f, x> = 0``, for ``rel`` on the dual side."""
    sp = T.space
    if rel.space.dim != sp.dim:
        raise DimensionError("relation must live on the dual of T's domain")
    rng = np.random.default_rng(seed)
    found, used = [], 0
    for x, f in _constrained_pairs(sp, rel.space, rng, N):
        if sampler is not None:
            x = sampler(rng)
            f = f - (f @ x) / (x @ x) * x
        used += 1
        tx = T(x)
        if not np.any(tx) or not np.any(f):
            continue
        if not rel(tx, f):
            found.append((x, f))
            if len(found) >= max_witnesses:
                break
    name = "orth_condition"
    if found:
        return PropertyReport(name, COUNTER, found[0], used, seed, found)
    return PropertyReport(name, HOLDS, None, used, seed, [])


def relation_from_dict(data, space=None):
    from .operators import OperatorToDual
    sp = space or Space.from_dict(data["space"])
    tol = data.get("tol", 1e-9)
    if data["type"] == "bj":
        return BirkhoffJames(sp, tol)
    if data["type"] == "form":
        return FormOrtho(OperatorToDual(data["matrix"], sp), tol)
    raise ValueError(f"unknown relation type {data['type']!r}")
