# Entropies of a bipartite state and its marginals
#
# A density matrix on C^dA ⊗ C^dB carries three von Neumann entropies:
# the joint H(A,B) and the marginals H(A), H(B) obtained by partial trace.
# For entangled pure states the joint entropy is zero while the parts are
# maximally uncertain, something no classical joint distribution can do.

import numpy as np

from povminfo import bell_state, marginals, product_state, random_density, von_neumann_entropy

# The Bell state (|00> + |11>)/sqrt(2)

rho = bell_state()
rho_a, rho_b = marginals(rho)
print("Bell state")
print("  H(A,B) =", round(von_neumann_entropy(rho), 9))
print("  H(A)   =", round(von_neumann_entropy(rho_a), 9))
print("  rho(A) =\n", np.round(rho_a.mat.real, 6))

# A product state has additive entropies.

prod = product_state(random_density(2, seed=1), random_density(3, seed=2))
pa, pb = marginals(prod)
print("\nProduct state")
print("  H(A,B)      =", round(von_neumann_entropy(prod), 9))
print("  H(A) + H(B) =", round(von_neumann_entropy(pa) + von_neumann_entropy(pb), 9))

# Random Ginibre states: the rank controls how mixed the state is.

print("\nGinibre states on C^2 ⊗ C^3")
for rank in range(1, 7):
    r = random_density(6, rank, seed=rank, split=(2, 3))
    print(f"  rank {rank}: H(A,B) = {von_neumann_entropy(r):.4f} bits")
