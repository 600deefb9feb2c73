"""A three-mode W-type state with one dephased mode.

Full separability is ruled out while lambda > 1/4; the state is never
partially separable, whatever the noise.
"""

import numpy as np

from noon_ent import dephase_one_mode, tripartite_witness, w_state

print(f"{'lambda':>6} {'partial':>8} {'full':>8}")
for lam in np.linspace(0, 1, 9):
    st = dephase_one_mode(w_state(2, 3), lam=lam)
    print(f"{lam:6.3f} {tripartite_witness(st, 'partial').value:+8.4f} {tripartite_witness(st, 'full').value:+8.4f}")
