"""Nonclassical light need not be entangled.

Fully dephased, the N00N state is a mixture of |N,0> and |0,N>. Its P
function contains derivatives of delta distributions (nonclassical), yet
every quasiprobability weight is nonnegative and the partial transpose is
positive.
"""

from noon_ent import glauber_p, noon_state, p_is_classical, ppt_min_eigenvalue, solve_quasiprob

state = noon_state(2, coherence=0.0)
p = glauber_p(state)
for mode, order, c in p.terms:
    print(f"mode {mode}: {c:.3f} x d^{order} d*^{order} delta")
print("P classical:", p_is_classical(p))
print("min quasiprobability weight:", solve_quasiprob(state).min_weight)
print("PPT min eigenvalue:", ppt_min_eigenvalue(state))
