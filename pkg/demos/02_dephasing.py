"""Gaussian phase noise: the witness gives up, the quasiprobability does not.

Dephasing scales the coherence by lambda = exp(-delta^2 N^2 / 2). The
interference witness flips sign once lambda drops below 1/2, while the
negative quasiprobability weights only vanish as lambda -> 0.
"""

import numpy as np

from noon_ent import gaussian_lambda, noon_state, solve_quasiprob
from noon_ent.witness import dephasing_threshold, interference_criterion

N = 2
print(f"witness threshold: delta = {dephasing_threshold(N):.4f}")
print(f"{'delta':>6} {'lambda':>7} {'witness':>8} {'min weight':>11}")
for delta in np.linspace(0, 1.2, 9):
    lam = gaussian_lambda(delta, N)
    state = noon_state(N, coherence=lam)
    q = solve_quasiprob(state, coherent_indices=[N])
    print(f"{delta:6.2f} {lam:7.4f} {interference_criterion(state, N):+8.4f} {q.min_weight:+11.5f}")
