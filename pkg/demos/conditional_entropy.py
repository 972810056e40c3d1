# Conditional entropy through a measurement on B
#
# Measuring B with a POVM {M_b} leaves A in the conditional state
# rho(A|beta=b) with probability Pr{beta=b}. The average entropy of those
# states is H(A|beta); its infimum over all POVMs is H(A|B). Unlike the
# von Neumann difference H(A,B) - H(B) it is never negative.

import numpy as np

from povminfo import (
    OptimizerConfig,
    Povm,
    bell_state,
    classical_state,
    computational_povm,
    conditional_ensemble,
    conditional_entropy_given,
    marginals,
    minimize_conditional_entropy,
    trine_povm,
    von_neumann_entropy,
)

rho = bell_state()

# Steering: each computational outcome on B leaves A in a pure state.

ens = conditional_ensemble(rho, computational_povm(2))
for p, state in zip(ens.weights, ens.states):
    print(f"p = {p:.3f}, rho(A|b) diagonal = {state.mat.diagonal().real}")

# Rank-one elements (computational, trine) still steer A into pure states.
# A noisy two-outcome POVM leaves some uncertainty behind.

noisy = Povm([np.diag([0.9, 0.1]), np.diag([0.1, 0.9])])
print("H(A|beta) computational:", round(conditional_entropy_given(rho, computational_povm(2)), 6))
print("H(A|beta) trine        :", round(conditional_entropy_given(rho, trine_povm()), 6))
print("H(A|beta) noisy        :", round(conditional_entropy_given(rho, noisy), 6))

# The von Neumann difference is -1 here; the measured version is 0.

_, rho_b = marginals(rho)
print("H(A,B) - H(B)          :", round(von_neumann_entropy(rho) - von_neumann_entropy(rho_b), 6))

# Searching over POVMs gives an upper bound on the infimum.

cfg = OptimizerConfig(restarts=3)
res = minimize_conditional_entropy(classical_state([[0.4, 0.1], [0.1, 0.4]]), cfg)
print(f"classical state: H(A|B) <= {res.value:.9f} ({res.bound_kind})")
print("restart values:", res.per_restart_values.round(9))
