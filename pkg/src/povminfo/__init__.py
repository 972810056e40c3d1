"""Conditional entropy and mutual information of bipartite quantum states
defined through arbitrary POVM measurements."""

from .exceptions import (
    ConfigError,
    DimensionError,
    PovminfoError,
    ValidationError,
    ZeroProbabilityError,
)
from .matkernel import Spectrum, hermitian_spectrum, partial_trace, tensor_product
from .measure import (
    Povm,
    basis_povm,
    classical_conditional_entropy,
    classical_mutual_information,
    computational_povm,
    conditional_ensemble,
    conditional_entropy_given,
    conditional_state,
    joint_distribution,
    naimark_dilate,
    outcome_distribution,
    shannon_entropy,
    trine_povm,
)
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    PovmParams,
    decode_povm,
    eigenbasis_warm_start,
    maximize_mutual_information,
    maximize_mutual_information_given,
    minimize_conditional_entropy,
)
from .qstate import (
    DensityMatrix,
    Ensemble,
    bell_state,
    classical_state,
    dephase,
    entropy_defect,
    marginals,
    product_state,
    random_density,
    relative_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"
