"""
Solving a variational inequality on a box
=========================================

Find x in M = [0, 1]^2 with a(x, z - x) >= <h, z - x> for every z in M.
The form is coercive but not symmetric, so this is not a minimization
problem; the projected fixed-point iteration still contracts.
"""
# %%
import numpy as np

from vilab import BilinearForm, Box, Space, VIProblem, solve_vi, verify_vi

space = Space(2, 2)
form = BilinearForm.from_matrix([[2.0, 1.0], [-1.0, 2.0]], space)
prob = VIProblem(form, Box([0, 0], [1, 1]), rhs=[-1.0, 3.0])
print("coercivity c =", prob.coercivity, " Lipschitz L =", prob.lipschitz)

# %%
# The step is c / L^2 and the predicted contraction sqrt(1 - c^2/L^2).
sol = solve_vi(prob, record=True)
print("x =", sol.x, " residual =", sol.residual, " iterations =", sol.iterations)
print("step =", sol.step, " contraction bound =", round(sol.contraction, 4))
print("second start agrees:", sol.unique, "(gap", sol.uniqueness_gap, ")")

# %%
# A certificate is only as good as its test points.  verify_vi checks
# random feasible points and the corners of the box.
print(verify_vi(sol.x, prob))
bad = verify_vi([1.0, 1.0], prob)
print("the point (1, 1) violates the inequality by", bad.worst_violation,
      "at z =", bad.witness)
