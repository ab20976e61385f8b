"""
Quadratic forms and their epsilon-witnesses
===========================================

For q(x) = <Tx, x>/2 the ratio q(x) / (||q'(x)|| ||x||) is half the cosine
ratio, so a witness below eps exists exactly when cos T < 2 eps.
"""
# %%
import numpy as np

from vilab import QuadraticForm, Space, epsilon_witness, fd_check
from vilab.errors import NoWitnessError
from vilab.quadratic import witness_ratio

q = QuadraticForm.from_matrix(np.diag([1.0, 100.0]), Space(2, 2))
print("gradient check:", fd_check(q, np.array([0.3, -1.2])))
x = epsilon_witness(q, 0.1)
print("witness", x, "ratio", witness_ratio(q, x))

# %%
try:
    epsilon_witness(QuadraticForm.from_matrix(np.eye(2), Space(2, 2)), 0.4)
except NoWitnessError as err:
    print("identity:", err, "| best ratio", err.best_ratio)
