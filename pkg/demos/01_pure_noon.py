"""A pure N00N state, tested three ways.

The interference witness sits at -1/2, the partial transpose has a -1/2
eigenvalue, and the quasiprobability over the twelve SEP product vectors
carries four weights of -1/4. None of this depends on the photon number.
"""

from noon_ent import interference_operator, noon_state, ppt_min_eigenvalue, solve_quasiprob, witness_value

for N in (1, 2, 3):
    state = noon_state(N)
    rep = witness_value(interference_operator(N), state)
    q = solve_quasiprob(state)
    print(f"N={N}  witness {rep.value:+.3f} ({rep.verdict})  PPT min {ppt_min_eigenvalue(state):+.3f}  "
          f"min weight {q.min_weight:+.3f}")

print("\nweights for N=2:")
q = solve_quasiprob(noon_state(2))
for label, w in zip(q.labels, q.weights):
    print(f"  {label:16s} {w:+.3f}")
