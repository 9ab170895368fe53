"""
Resource-assisted local discrimination
======================================

Alice teleports her qubit to Bob through the partially entangled resource,
then Bob measures in the Bell basis. The success probability is
(1 + lam + 2 lam sqrt(1 - eps^2)) / 4, reaching the global optimum only for
a maximally entangled resource.
"""

import numpy as np

from noisybell import (
    entanglement_entropy,
    formula_p_global,
    noisy_bell_ensemble,
    resource_state,
    run_teleportation_protocol,
)
from noisybell.protocols import teleportation_channel
from noisybell.states import random_density_matrix

lam = 0.5
ens = noisy_bell_ensemble(lam)
print(f"global optimum at lam={lam}: {formula_p_global(lam)}")
print(f"{'eps':>4} {'ebits':>7} {'assisted':>9}")
for eps in np.linspace(0, 1, 6):
    res = run_teleportation_protocol(ens, eps)
    print(f"{eps:4.1f} {entanglement_entropy(resource_state(eps)):7.4f} {res.achieved_probability:9.6f}")

# with one ebit the channel is the identity on Alice's qubit
rho = random_density_matrix(4, seed=2).matrix
out = teleportation_channel(rho, 0.0, realign=False)
print("\nidentity-channel error at eps=0:", np.abs(out - rho).max())

# the simulated post-states agree with the closed-form listed ones
sim = run_teleportation_protocol(ens, 0.6)
lst = run_teleportation_protocol(ens, 0.6, mode="listed", lam=lam, sigma=np.eye(4) / 4)
print("listed vs simulated:", max(np.abs(a.matrix - b.matrix).max()
                                  for a, b in zip(sim.post_states, lst.post_states)))
