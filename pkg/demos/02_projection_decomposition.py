"""
Projection along T^{-1}(M^perp)
===============================

For a coercive form and a subspace M, the projection P onto M that
annihilates a(y - Py, m) for all m in M splits X into M and the set of
y with Ay vanishing on M.
"""
# %%
import numpy as np

from vilab import (BilinearForm, Space, Subspace, annihilator,
                   pi_T_iso_constants, quotient_distance, stampacchia_projection)

a = BilinearForm.from_matrix([[1.0, 1.0], [0.0, 1.0]], Space(2, 2))
M = Subspace([1.0, 0.0])
rep = stampacchia_projection(a, M)
print("P =\n", rep.P)
print("complement spanned by", rep.complement_basis.ravel())
print("dim M + dim ker P =", M.dim + rep.rank_complement)

# %%
# Quotient norms: the distance from f to the annihilator of M.  Outside p = 2
# it is found by descent, and the dual route (a sup over M) agrees.
sp = Space(4, 4.0)
rng = np.random.default_rng(0)
M = Subspace(rng.standard_normal((4, 2)))
f = rng.standard_normal(4)
print("||f + M^perp|| =", quotient_distance(f, annihilator(M), sp))

# %%
# pi o T restricted to M is an isomorphism exactly when its lower constant is
# positive.  An antisymmetric form kills it on every line.
A = rng.standard_normal((4, 4)) + 3 * np.eye(4)
print(pi_T_iso_constants(BilinearForm.from_matrix(A, sp), M))
anti = BilinearForm.from_matrix([[0.0, 1.0], [-1.0, 0.0]], Space(2, 2))
print(pi_T_iso_constants(anti, Subspace([1.0, 1.0])))
