"""
Birkhoff-James orthogonality is not symmetric in l^4
====================================================

x is BJ-orthogonal to y when no multiple of y shortens x.  In l^p this is
<J(x), y> = 0 with the duality map J, which is easy to check and easy to
falsify properties of.
"""
# %%
import numpy as np

from vilab import BirkhoffJames, FormOrtho, OperatorToDual, Space, test_property
from vilab.orthogonality import PROPERTIES, bj_minimization_oracle, lattice_sampler

L4 = Space(2, 4)
x, y = np.array([2.0, 1.0]), np.array([1.0, -8.0])
rel = BirkhoffJames(L4)
print("x ⊥ y:", rel(x, y), " y ⊥ x:", rel(y, x))
print("1-D oracle (orthogonal, t*, min):", bj_minimization_oracle(L4, x, y))

# %%
# Random search on integer vectors finds the same pair.
rep = test_property(rel, "symmetric", lattice_sampler(2, 3), N=10_000, seed=0)
wx, wy = rep.witness
print(rep.verdict, "x =", wx, " y =", wy / wy[0], "(rescaled)")

# %%
# Every other property holds on samples; a form-induced relation with an SPD
# matrix is symmetric too.
for prop in PROPERTIES:
    print(f"{prop:>14}: {test_property(BirkhoffJames(Space(3, 4)), prop, N=500).verdict}")
S = OperatorToDual(np.diag([1.0, 4.0, 9.0]), Space(3, 2))
print("form relation symmetric:", test_property(FormOrtho(S), "symmetric").verdict)
