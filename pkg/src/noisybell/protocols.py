"""Density-matrix simulations of the two LOCC strategies.

The teleportation strategy acts on the ensemble attached to the resource
state, factors X1 Y1 X2 Y2. Alice measures X1 X2 in the Bell basis and
announces the outcome; Bob applies a Pauli correction on Y2 and then
measures (Y2, Y1) in the Bell basis. Post-states are written in the order
(Y2, Y1), so the teleported qubit sits where Alice's qubit was.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discrimination import Povm, relabeled_success
from .linalg import DimensionError, kron, permute_systems, trace_out
from .states import (
    DensityMatrix,
    Ensemble,
    ResourceParams,
    bell_projector,
    resource_state,
)

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

# Bob's correction on Y2 for Alice's outcomes Psi_1..Psi_4
CORRECTIONS = (I2, SZ, SX, SY)

# Outcomes Psi_3 and Psi_4 leave the resource's Schmidt weights swapped on
# Y2; sigma_x on both of Bob's qubits restores them (Bell states are
# invariant under sigma_x (x) sigma_x up to sign).
REALIGN = (np.eye(4), np.eye(4), kron(SX, SX), kron(SX, SX))


def _two_qubit(ensemble: Ensemble) -> None:
    if ensemble.dim != 4 or ensemble.cut.dims != (2, 2):
        raise DimensionError("protocol expects a two-qubit ensemble")


def run_computational_basis_protocol(ensemble: Ensemble) -> float:
    """Both parties measure in the computational basis; guess the likeliest state."""
    _two_qubit(ensemble)
    return relabeled_success(ensemble, Povm.computational(4))


@dataclass(frozen=True)
class TeleportBranch:
    outcome: int
    probability: float
    state: np.ndarray


def teleport(rho, epsilon: float, realign: bool = True) -> list[TeleportBranch]:
    """Teleport the first qubit of a two-qubit state through the resource.

    Returns one branch per Alice outcome with its probability and Bob's
    corrected, normalized state on (Y2, Y1).
    """
    ResourceParams(epsilon)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionError("teleport expects a two-qubit operator")
    tau = resource_state(epsilon).projector()
    # X1 Y1 X2 Y2 -> X1 X2 Y1 Y2
    full = permute_systems(kron(rho, tau), (2, 2, 2, 2), (0, 2, 1, 3))
    branches = []
    for a in range(1, 5):
        proj = kron(bell_projector(a), np.eye(4))
        post = trace_out(proj @ full @ proj, (2, 2, 2, 2), (0, 1))  # Y1 Y2
        post = permute_systems(post, (2, 2), (1, 0))  # Y2 Y1
        u = kron(CORRECTIONS[a - 1], I2)
        if realign:
            u = REALIGN[a - 1] @ u
        post = u @ post @ u.conj().T
        prob = float(np.trace(post).real)
        state = post / prob if prob > 0 else post
        branches.append(TeleportBranch(a, prob, state))
    return branches


def teleportation_channel(rho, epsilon: float, realign: bool = True) -> np.ndarray:
    """Outcome-averaged output of :func:`teleport`."""
    return sum(b.probability * b.state for b in teleport(rho, epsilon, realign))


@dataclass(frozen=True)
class TeleportationResult:
    post_states: tuple[DensityMatrix, ...]
    achieved_probability: float
    sigma_prime: DensityMatrix | None = None


def listed_post_states(lam: float, epsilon: float, sigma_prime) -> tuple[DensityMatrix, ...]:
    """``lam (1 (x) U_a) tau (1 (x) U_a)^dagger + (1 - lam) sigma'`` for U_a in 1, Z, X, Y."""
    tau = resource_state(epsilon).projector()
    sp = sigma_prime.matrix if isinstance(sigma_prime, DensityMatrix) else np.asarray(sigma_prime)
    out = []
    for u in (I2, SZ, SX, SY):
        k = kron(I2, u)
        out.append(DensityMatrix(lam * k @ tau @ k.conj().T + (1 - lam) * sp))
    return tuple(out)


def run_teleportation_protocol(
    ensemble: Ensemble,
    epsilon: float,
    mode: str = "simulated",
    lam: float | None = None,
    sigma=None,
    realign: bool = True,
) -> TeleportationResult:
    """Teleport Alice's qubit to Bob, then let Bob perform a Bell measurement.

    ``mode="simulated"`` pushes every ensemble member through the protocol.
    ``mode="listed"`` builds the post-states in closed form from ``lam`` and
    the teleported noise state ``sigma``; it only applies to noisy Bell
    ensembles and requires ``realign=True`` to agree with the simulation.
    """
    _two_qubit(ensemble)
    if mode == "simulated":
        posts = tuple(
            DensityMatrix(_hermitize(teleportation_channel(s.matrix, epsilon, realign)))
            for _, s in ensemble
        )
        sigma_prime = None
        if sigma is not None:
            sp = sigma.matrix if isinstance(sigma, DensityMatrix) else sigma
            sigma_prime = DensityMatrix(_hermitize(teleportation_channel(sp, epsilon, realign)))
    elif mode == "listed":
        if lam is None or sigma is None:
            raise ValueError("listed mode needs lam and sigma")
        sp = sigma.matrix if isinstance(sigma, DensityMatrix) else sigma
        sigma_prime = DensityMatrix(_hermitize(teleportation_channel(sp, epsilon, realign)))
        posts = listed_post_states(lam, epsilon, sigma_prime)
    else:
        raise ValueError(f"mode must be 'listed' or 'simulated', got {mode!r}")
    bob = Ensemble(tuple(zip(ensemble.probabilities, posts)), ensemble.cut)
    return TeleportationResult(posts, relabeled_success(bob, Povm.bell()), sigma_prime)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2
