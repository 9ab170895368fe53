"""
Dual certificates
=================

A Hermitian operator H with H - p_i rho_i having a PSD partial transpose
upper-bounds every PPT measurement by Tr(H). The closed-form certificates
match the solver values exactly.
"""

from noisybell import (
    attach_resource,
    certificate_h_lambda,
    certificate_h_lambda_eps,
    noisy_bell_ensemble,
    verify_dual_feasibility,
)
from noisybell.sdp import solve_ensemble, verify_weak_duality

lam, eps = 0.7, 0.5

# unassisted ensemble: Tr(H_lam) = (1 + lam) / 4
ens = noisy_bell_ensemble(lam)
cert = certificate_h_lambda(lam)
feas = verify_dual_feasibility(cert, ens)
print("H_lam trace", cert.trace, "feasible", feas.feasible, "per-state min eig", feas.per_state)
print("gap to PPT solver value:", verify_weak_duality(solve_ensemble(ens, "ppt"), cert).gap)

# with the resource attached the certificate lives on 16 dimensions
big = attach_resource(ens, eps)
cert = certificate_h_lambda_eps(lam, eps)
feas = verify_dual_feasibility(cert, big)
print("\nH_lam_eps trace", cert.trace, "feasible", feas.feasible)
print("gap to PPT solver value:", verify_weak_duality(solve_ensemble(big, "ppt"), cert).gap)
