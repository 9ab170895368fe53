"""Success probabilities, measurement bounds and dual certificates."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    Bipartition,
    DimensionError,
    HERMITIAN_TOL,
    as_matrix,
    dagger,
    eigvalsh,
    kron,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    transpose_factors,
)
from .states import (
    DensityMatrix,
    Ensemble,
    NoisyBellParams,
    ResourceParams,
    StateVector,
    bell_projector,
    maximally_mixed,
    resource_state,
)

POVM_TOL = 1e-10
FEASIBILITY_TOL = -1e-10


@dataclass(frozen=True)
class Povm:
    """Measurement operators with outcome labels.

    Operators are checked for positivity and completeness unless
    ``validate=False``.
    """

    operators: tuple[np.ndarray, ...]
    labels: tuple[int, ...] = ()
    validate: bool = True

    def __post_init__(self):
        ops = tuple(np.array(as_matrix(o)) for o in self.operators)
        if not ops:
            raise ValueError("a POVM needs at least one operator")
        d = ops[0].shape[0]
        if any(o.shape != (d, d) for o in ops):
            raise DimensionError("POVM operators must share one square shape")
        for o in ops:
            o.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        labels = tuple(self.labels) or tuple(range(1, len(ops) + 1))
        if len(labels) != len(ops):
            raise ValueError("one label per operator is required")
        object.__setattr__(self, "labels", labels)
        if self.validate:
            resid = completeness_residual(ops)
            if resid > POVM_TOL:
                raise ValueError(f"POVM operators sum to identity only within {resid:.3e}")
            for k, o in enumerate(ops):
                lo = min_eigenvalue(o, tol=POVM_TOL)
                if lo < -POVM_TOL:
                    raise ValueError(f"POVM operator {labels[k]} has eigenvalue {lo:.3e}")

    def __len__(self) -> int:
        return len(self.operators)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @classmethod
    def bell(cls) -> Povm:
        return cls(tuple(bell_projector(i) for i in range(1, 5)))

    @classmethod
    def computational(cls, dim: int = 4) -> Povm:
        eye = np.eye(dim, dtype=complex)
        return cls(tuple(np.outer(eye[k], eye[k]) for k in range(dim)))


def completeness_residual(operators: Sequence[np.ndarray]) -> float:
    """Frobenius norm of ``sum(operators) - 1``."""
    total = np.sum(np.asarray(operators), axis=0)
    return float(np.linalg.norm(total - np.eye(total.shape[0])))


def _check_dims(ensemble: Ensemble, dim: int) -> None:
    if ensemble.dim != dim:
        raise DimensionError(f"ensemble acts on dim {ensemble.dim}, operator on dim {dim}")


def _clip_probability(value: float) -> float:
    if value < -POVM_TOL or value > 1 + POVM_TOL:
        warnings.warn(f"success probability {value!r} outside [0, 1]; clipping", stacklevel=3)
    return min(max(value, 0.0), 1.0)


def povm_success(ensemble: Ensemble, povm: Povm) -> float:
    """Average success probability when outcome ``k`` guesses state ``k``."""
    if len(povm) != len(ensemble):
        raise ValueError(f"{len(povm)} outcomes for {len(ensemble)} states")
    _check_dims(ensemble, povm.dim)
    value = sum(
        p * np.vdot(m, s.matrix).real  # Tr(rho M) for Hermitian M
        for (p, s), m in zip(ensemble, povm.operators)
    )
    return _clip_probability(float(value))


def outcome_table(ensemble: Ensemble, povm: Povm) -> np.ndarray:
    """Joint probabilities ``p_i Tr(rho_i M_a)`` indexed ``[a, i]``."""
    _check_dims(ensemble, povm.dim)
    ops = np.asarray(povm.operators)
    return np.einsum("akl,ikl->ai", ops.conj(), ensemble.weighted()).real


def relabeled_success(ensemble: Ensemble, povm: Povm) -> float:
    """Success probability when each outcome is assigned to its most likely state."""
    return _clip_probability(float(outcome_table(ensemble, povm).max(axis=1).sum()))


def _check_unit(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")


def formula_p_local(lam: float) -> float:
    _check_unit("lambda", lam)
    return (1 + lam) / 4


def formula_p_global(lam: float) -> float:
    _check_unit("lambda", lam)
    return (1 + 3 * lam) / 4


def formula_p_local_assisted(lam: float, epsilon: float) -> float:
    _check_unit("lambda", lam)
    _check_unit("epsilon", epsilon)
    return (1 + lam + 2 * lam * math.sqrt(1 - epsilon**2)) / 4


@dataclass(frozen=True)
class Certificate:
    """Hermitian dual candidate with the trace it claims."""

    h: np.ndarray
    claimed_trace: float
    kind: str = "generic"

    def __post_init__(self):
        h = np.array(as_matrix(self.h))
        dev = float(np.max(np.abs(h - dagger(h))))
        if dev > HERMITIAN_TOL:
            raise ValueError(f"certificate is not Hermitian (deviation {dev:.3e})")
        tr = np.trace(h).real
        if abs(tr - self.claimed_trace) > 1e-12:
            raise ValueError(f"certificate trace {tr!r} differs from claimed {self.claimed_trace!r}")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @property
    def trace(self) -> float:
        return float(np.trace(self.h).real)


def certificate_h_lambda(lam: float, sigma=None) -> Certificate:
    """``(lam * 1 + 2 (1 - lam) sigma) / 8`` with trace ``(1 + lam) / 4``."""
    params = NoisyBellParams(lam, sigma if sigma is not None else maximally_mixed(4))
    h = (lam * np.eye(4) + 2 * (1 - lam) * params.sigma.matrix) / 8
    return Certificate(h, (1 + lam) / 4, "H_lambda")


def certificate_h_eps(epsilon: float) -> np.ndarray:
    """Resource part of the assisted certificate, on X1 Y1 X2 Y2."""
    ResourceParams(epsilon)
    tau = resource_state(epsilon).projector()
    singlet_pt = transpose_factors(bell_projector(4), (2, 2), (0,))
    eye = np.eye(4)
    return (kron(eye, tau) + math.sqrt(1 - epsilon**2) * kron(eye, singlet_pt)) / 8


def certificate_h_lambda_eps(lam: float, epsilon: float, sigma=None) -> Certificate:
    """Dual certificate for the ensemble with the resource state attached."""
    params = NoisyBellParams(lam, sigma if sigma is not None else maximally_mixed(4))
    ResourceParams(epsilon)
    tau = resource_state(epsilon).projector()
    h = lam * certificate_h_eps(epsilon) + (1 - lam) / 4 * kron(params.sigma.matrix, tau)
    return Certificate(h, formula_p_local_assisted(lam, epsilon), "H_lambda_eps")


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    worst_min_eigenvalue: float
    per_state: tuple[float, ...]


def verify_dual_feasibility(cert: Certificate, ensemble: Ensemble) -> FeasibilityReport:
    """Check that ``T_A(H - p_i rho_i)`` is positive semidefinite for every member.

    This is the sufficient condition for ``H - p_i rho_i`` to lie in the dual
    of the PPT cone. Alice's partial transpose covers all of her factors.
    """
    _check_dims(ensemble, cert.h.shape[0])
    per_state = tuple(
        float(eigvalsh(partial_transpose(cert.h - p * s.matrix, ensemble.cut, "left"))[0])
        for p, s in ensemble
    )
    worst = min(per_state)
    return FeasibilityReport(worst >= FEASIBILITY_TOL, worst, per_state)


def transposed_bell_partner(i: int) -> int:
    """Index ``k`` with ``T_A(1/2 - Psi_i) = Psi_k``, found numerically."""
    cut = Bipartition.two_qubits()
    target = partial_transpose(np.eye(4) / 2 - bell_projector(i), cut)
    for k in range(1, 5):
        if np.allclose(target, bell_projector(k), atol=1e-14):
            return k
    raise RuntimeError(f"no Bell projector matches the transposed complement of Psi_{i}")


def _entropy_bits(eigenvalues: np.ndarray) -> float:
    p = eigenvalues[eigenvalues > 1e-15]
    return float(-math.fsum(x * math.log2(x) for x in p)) + 0.0


def entanglement_entropy(vector, cut: Bipartition | None = None) -> float:
    """Von Neumann entropy (bits) of Alice's reduced state of a pure state."""
    v = vector if isinstance(vector, StateVector) else StateVector(vector)
    cut = cut or Bipartition.two_qubits()
    if v.dim != cut.dim:
        raise DimensionError(f"vector of dim {v.dim} does not match cut {cut.dims}")
    # Schmidt coefficients from the singular values of the reshaped amplitudes
    psi = v.amplitudes.reshape(cut.dims).transpose(cut.order)
    left = int(np.prod(cut.dims_left))
    s = np.linalg.svd(psi.reshape(left, -1), compute_uv=False)
    # rounding suppresses last-ulp noise in the Schmidt weights
    return _entropy_bits(np.round(s**2, 15))


def reduced_entropy(state, cut: Bipartition | None = None) -> float:
    """Von Neumann entropy (bits) of Alice's marginal of a density matrix."""
    m = state.matrix if isinstance(state, DensityMatrix) else as_matrix(state)
    cut = cut or Bipartition.two_qubits()
    return _entropy_bits(eigvalsh(partial_trace(m, cut, "left")))


def is_ppt_state(state, cut: Bipartition | None = None) -> bool:
    """Peres-Horodecki test: partial transpose has no eigenvalue below -1e-10."""
    s = state if isinstance(state, DensityMatrix) else DensityMatrix(state)
    cut = cut or Bipartition.two_qubits()
    if s.dim != cut.dim:
        raise DimensionError(f"state of dim {s.dim} does not match cut {cut.dims}")
    return min_eigenvalue(partial_transpose(s.matrix, cut)) >= FEASIBILITY_TOL
