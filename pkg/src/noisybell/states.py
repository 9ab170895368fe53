"""Bell states, the ancillary resource state, and noisy Bell ensembles.

Basis ordering is |00>, |01>, |10>, |11> throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .linalg import (
    Bipartition,
    DimensionError,
    HERMITIAN_TOL,
    as_matrix,
    dagger,
    kron,
    min_eigenvalue,
)

TRACE_TOL = 1e-12
PSD_TOL = -1e-10
NORM_TOL = 1e-12

_S = 1 / np.sqrt(2)
_BELL = np.array(
    [
        [_S, 0, 0, _S],
        [_S, 0, 0, -_S],
        [0, _S, _S, 0],
        [0, _S, -_S, 0],
    ],
    dtype=complex,
)


class InvalidStateError(ValueError):
    pass


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(a)
        if abs(norm - 1) > NORM_TOL:
            raise InvalidStateError(f"state vector has norm {norm!r}, expected 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator (validated on construction)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(as_matrix(self.matrix))
        if m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("density matrix has non-finite entries")
        herm = float(np.max(np.abs(m - dagger(m))))
        if herm > HERMITIAN_TOL:
            raise InvalidStateError(f"not Hermitian: max |m - m^dagger| = {herm:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1) > TRACE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        lo = min_eigenvalue(m)
        if lo < PSD_TOL:
            raise InvalidStateError(f"not positive semidefinite: min eigenvalue {lo:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Ensemble:
    """Prior-weighted states sharing one bipartition."""

    members: tuple[tuple[float, DensityMatrix], ...]
    cut: Bipartition = field(default_factory=Bipartition.two_qubits)

    def __post_init__(self):
        members = tuple((float(p), s if isinstance(s, DensityMatrix) else DensityMatrix(s))
                        for p, s in self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise InvalidStateError("ensemble is empty")
        probs = np.array([p for p, _ in members])
        if np.any(probs < 0) or np.any(probs > 1):
            raise InvalidStateError(f"probabilities must lie in [0, 1]: {probs}")
        if abs(probs.sum() - 1) > TRACE_TOL:
            raise InvalidStateError(f"probabilities sum to {probs.sum()!r}")
        dims = {s.dim for _, s in members}
        if len(dims) != 1:
            raise DimensionError(f"ensemble states have differing dimensions {sorted(dims)}")
        if dims.pop() != self.cut.dim:
            raise DimensionError(f"states do not match the cut dims {self.cut.dims}")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[tuple[float, DensityMatrix]]:
        return iter(self.members)

    @property
    def dim(self) -> int:
        return self.cut.dim

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.members])

    @property
    def states(self) -> np.ndarray:
        """Stack of density matrices, shape ``(N, d, d)``."""
        return np.stack([s.matrix for _, s in self.members])

    def weighted(self) -> np.ndarray:
        """Stack of ``p_i * rho_i``."""
        return self.probabilities[:, None, None] * self.states


@dataclass(frozen=True)
class NoisyBellParams:
    lam: float
    sigma: DensityMatrix

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        sigma = self.sigma if isinstance(self.sigma, DensityMatrix) else DensityMatrix(self.sigma)
        if sigma.dim != 4:
            raise DimensionError(f"noise state must be a two-qubit state, got dim {sigma.dim}")
        object.__setattr__(self, "sigma", sigma)


@dataclass(frozen=True)
class ResourceParams:
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")


def maximally_mixed(dim: int = 4) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def bell_state(i: int) -> StateVector:
    """Bell vector ``i`` in 1..4: (00+11), (00-11), (01+10), (01-10), each over sqrt(2)."""
    if i not in (1, 2, 3, 4):
        raise IndexError(f"Bell state index must be 1..4, got {i}")
    return StateVector(_BELL[i - 1])


def bell_projector(i: int) -> np.ndarray:
    return bell_state(i).projector()


def resource_state(epsilon: float) -> StateVector:
    """sqrt((1+eps)/2)|00> + sqrt((1-eps)/2)|11>."""
    ResourceParams(epsilon)
    a = np.zeros(4, dtype=complex)
    a[0] = np.sqrt((1 + epsilon) / 2)
    a[3] = np.sqrt((1 - epsilon) / 2)
    return StateVector(a)


def _sigma(sigma) -> DensityMatrix:
    if sigma is None:
        return maximally_mixed(4)
    return sigma if isinstance(sigma, DensityMatrix) else DensityMatrix(sigma)


def noisy_bell_ensemble(lam: float, sigma=None) -> Ensemble:
    """Uniform ensemble of ``lam * Psi_i + (1 - lam) * sigma``, i = 1..4.

    ``sigma`` defaults to the maximally mixed two-qubit state.
    """
    params = NoisyBellParams(lam, _sigma(sigma))
    s = params.sigma.matrix
    members = tuple(
        (0.25, DensityMatrix(lam * bell_projector(i) + (1 - lam) * s)) for i in range(1, 5)
    )
    return Ensemble(members, Bipartition.two_qubits())


def werner_ensemble(lam: float) -> Ensemble:
    return noisy_bell_ensemble(lam, maximally_mixed(4))


def attach_resource(ensemble: Ensemble, epsilon: float) -> Ensemble:
    """Tensor every member with the resource state on factors X2, Y2.

    The result is ordered X1, Y1, X2, Y2 with Alice holding X1 and X2.
    """
    if ensemble.cut != Bipartition.two_qubits():
        raise DimensionError("attach_resource expects a two-qubit ensemble cut as X1:Y1")
    tau = resource_state(epsilon).projector()
    members = tuple((p, DensityMatrix(kron(s.matrix, tau))) for p, s in ensemble)
    return Ensemble(members, Bipartition.with_resource())


def random_density_matrix(dim: int, seed: int, rank: int | None = None) -> DensityMatrix:
    """Ginibre-distributed density matrix ``G G^dagger / Tr(G G^dagger)``.

    ``rank=1`` gives a random pure state.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    rank = dim if rank is None else rank
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ dagger(g)
    m = m / np.trace(m).real
    return DensityMatrix((m + dagger(m)) / 2)
