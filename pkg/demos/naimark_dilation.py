# Naimark dilation
#
# Any POVM is a projective measurement on a larger space. Stacking the
# square roots of the elements gives an isometry V; block projectors on the
# image reproduce every outcome probability, and conditional entropies come
# out the same.

import numpy as np

from povminfo import DensityMatrix, conditional_entropy_given, naimark_dilate, outcome_distribution, random_density, trine_povm
from povminfo.measure import dilate_state

trine = trine_povm()
v, proj = naimark_dilate(trine)
print("V shape:", v.shape, " V^dagger V = I:", np.allclose(v.conj().T @ v, np.eye(2)))
print("dilated measurement projective:", proj.is_projective())

rho = random_density(2, seed=5)
print("trine statistics  :", outcome_distribution(rho, trine).round(12))
print("dilated statistics:", outcome_distribution(DensityMatrix(v @ rho.mat @ v.conj().T), proj).round(12))

# The same holds with A along for the ride.

rho_ab = random_density(4, seed=6, split=(2, 2))
print("H(A|beta) direct :", round(conditional_entropy_given(rho_ab, trine), 12))
print("H(A|beta) dilated:", round(conditional_entropy_given(dilate_state(rho_ab, v), proj), 12))
