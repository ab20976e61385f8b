"""
The cosine of an operator
=========================

cos T = inf <Tx, x> / (||Tx||_* ||x||).  At p = 2 and symmetric T it is the
Kantorovich value 2 sqrt(l_min l_max) / (l_min + l_max); in l^4 even the
identity has cosine below one, and it decreases with the dimension.
"""
# %%
import numpy as np

from vilab import OperatorToDual, Space, cosine, identity_operator
from vilab.cosine import zero_cosine_study

res = cosine(OperatorToDual(np.diag([1.0, 9.0]), Space(2, 2)))
print("cos diag(1, 9) =", res.value, " witness", res.witness,
      " angle", np.degrees(res.angle), "deg")
print("closed form    =", 2 * np.sqrt(9) / 10)

# %%
for n in (2, 8, 32, 128):
    print(f"l^4 identity, n = {n:>3}: cos = {cosine(identity_operator(Space(n, 4.0))).value:.6f}")

# %%
# With a positive cosine, form-orthogonal pairs cannot nearly cancel:
# ||x + y|| >= 2 delta / (1 + c) ||x||.
study = zero_cosine_study(OperatorToDual([[3.0, 1.0], [-1.0, 1.0]], Space(2, 3.0)))
print(f"delta = {study.cos.value:.4f}, c = {study.ineq_c:.4f}, bound = {study.bound:.4f}, "
      f"worst margin = {study.worst_margin:.4f}")
