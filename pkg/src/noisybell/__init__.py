"""Discrimination of noisy Bell ensembles under global, PPT and local measurements."""

from .discrimination import (
    Certificate,
    FeasibilityReport,
    Povm,
    certificate_h_lambda,
    certificate_h_lambda_eps,
    entanglement_entropy,
    formula_p_global,
    formula_p_local,
    formula_p_local_assisted,
    is_ppt_state,
    povm_success,
    relabeled_success,
    verify_dual_feasibility,
)
from .linalg import Bipartition
from .protocols import run_computational_basis_protocol, run_teleportation_protocol
from .report import SuccessReport, success_report
from .sdp import DiscriminationSdp, SdpSolution, SolverOptions, solve, verify_povm, verify_weak_duality
from .states import (
    DensityMatrix,
    Ensemble,
    attach_resource,
    bell_state,
    noisy_bell_ensemble,
    random_density_matrix,
    resource_state,
    werner_ensemble,
)

__version__ = "0.1.0"
