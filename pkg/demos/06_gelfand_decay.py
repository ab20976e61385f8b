"""
Cosine decay in a discretized evolution triple
==============================================

X = l^p on n cells of width 1/n sits inside H = l^2.  The operator i* i
has cosine ratio ||f||_2^2 / (||f||_q ||f||_p), and for p > 2 a tall thin
block on a flat background drives it to zero as the grid refines.
"""
# %%
import sys

import numpy as np

from vilab.gelfand import EvolutionTriple, decay_study, ratio, spike_witness, write_decay_csv

tr = EvolutionTriple(10.0, 100_000)
w = spike_witness(tr, 0.01)
print(f"s = 0.01: {w.cells} tall cells, ratio {ratio(tr, w.f):.4f}, "
      f"predicted order s^{w.predicted_exponent:.3f}")

# %%
study = decay_study(10.0, [100_000], np.logspace(-1, -3, 9))
write_decay_csv(study.rows, sys.stdout)
print("fitted slope", round(study.slope(), 4), " decays:", study.decays)

# %%
# The Hilbert case is the control: every ratio equals one.
print("p = 2 min ratio:", decay_study(2.0, [1000], [0.1, 0.01]).min_ratio)
