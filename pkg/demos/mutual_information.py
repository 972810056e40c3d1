# Mutual information from measurement statistics
#
# I(A;B) is the best classical mutual information I(alpha;beta) obtainable
# by measuring both sides. It is bounded by H(A) - H(A|beta) for the
# measurement on B, and the eigenbasis of the conditional states is a good
# first guess for the measurement on A.

from povminfo import (
    OptimizerConfig,
    bell_state,
    classical_mutual_information,
    classical_state,
    computational_povm,
    eigenbasis_warm_start,
    joint_distribution,
    maximize_mutual_information,
    random_density,
)
from povminfo.verify import check_theorem3

cfg = OptimizerConfig(restarts=2, max_evals=1500)

for name, rho in [("bell", bell_state()), ("classical", classical_state([[0.4, 0.1], [0.1, 0.4]]))]:
    res = maximize_mutual_information(rho, cfg)
    print(f"{name:>9}: I(A;B) >= {res.value:.6f} bits")

# Fix M_B and compare the warm-start measurement on A with the computational one.

rho = random_density(4, seed=3, split=(2, 2))
pb = computational_povm(2)
warm = eigenbasis_warm_start(rho, pb)
print("\nwarm start I(alpha;beta)   :", round(classical_mutual_information(joint_distribution(rho, warm, pb)), 6))
print("computational I(alpha;beta):", round(classical_mutual_information(joint_distribution(rho, pb, pb)), 6))

# The per-measurement cap never fails.

rep = check_theorem3(rho, pb, cfg)
print(f"\nsup_MA I(alpha;beta) = {rep.lhs:.6f} <= H(A) - H(A|beta) = {rep.rhs:.6f}")
