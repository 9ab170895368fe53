"""
Separable states still cost an ebit
===================================

Werner states lam * Bell_i + (1 - lam) I/4 are separable for lam <= 1/3.
The PPT value (1 + lam) / 4 stays below the global value on both sides of
that boundary, so even perfectly separable states need entanglement to be
discriminated optimally by local means.
"""

from noisybell import formula_p_global, is_ppt_state, werner_ensemble
from noisybell.linalg import Bipartition, min_eigenvalue, partial_transpose
from noisybell.sdp import solve_ensemble

cut = Bipartition.two_qubits()
for lam in (0.2, 1 / 3 - 1e-6, 1 / 3 + 1e-6, 0.6):
    ens = werner_ensemble(lam)
    omega = ens.states[0]
    ppt = solve_ensemble(ens, "ppt").primal_value
    print(f"lam={lam:.7f}  PPT state: {is_ppt_state(omega)!s:5}  "
          f"min eig of T(omega): {min_eigenvalue(partial_transpose(omega, cut)):+.2e}  "
          f"p_PPT={ppt:.7f}  p={formula_p_global(lam):.7f}")
