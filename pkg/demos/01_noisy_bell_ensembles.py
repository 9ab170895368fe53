"""
Noisy Bell ensembles
====================

Build the four states lam * Bell_i + (1 - lam) * sigma and look at how well
each Bell outcome still points at its own state.
"""

import numpy as np

from noisybell import bell_state, noisy_bell_ensemble, random_density_matrix

# a seeded random noise state; any valid 4x4 density matrix works
sigma = random_density_matrix(4, seed=7)
ens = noisy_bell_ensemble(0.4, sigma)
print("priors:", ens.probabilities)

# fidelity table <Bell_j| rho_i |Bell_j>: the diagonal dominates every row
table = np.array([[np.vdot(bell_state(j).amplitudes, s @ bell_state(j).amplitudes).real
                   for s in ens.states] for j in range(1, 5)])
np.set_printoptions(precision=4, suppress=True)
print(table)
print("argmax per Bell outcome:", table.argmax(axis=1) + 1)

# the states sum to lam * I + 4 (1 - lam) sigma
total = sum(ens.states)
print("sum identity error:", np.abs(total - (0.4 * np.eye(4) + 2.4 * sigma.matrix)).max())
