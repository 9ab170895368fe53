"""Dense complex linear algebra on small multipartite operators.

Matrices are plain ``numpy`` arrays. Tensor factors are ordered as written
(row-major, first factor most significant), and a :class:`Bipartition`
records which factors belong to Alice and which to Bob.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12


class DimensionError(ValueError):
    """Operator shape does not match the subsystem dimensions."""


class NotHermitianError(ValueError):
    """Operator is not Hermitian within tolerance."""


@dataclass(frozen=True)
class Bipartition:
    """Assignment of tensor factors to the two parties.

    Parameters
    ----------
    dims : tuple of int
        Dimension of each tensor factor, in the order the factors appear
        in the Kronecker product.
    alice : tuple of int
        Indices of the factors held by Alice; every other factor is Bob's.
    """

    dims: tuple[int, ...]
    alice: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "alice", tuple(sorted(int(a) for a in self.alice)))
        if any(d < 1 for d in self.dims):
            raise DimensionError(f"subsystem dimensions must be positive: {self.dims}")
        if len(set(self.alice)) != len(self.alice) or any(
            a < 0 or a >= len(self.dims) for a in self.alice
        ):
            raise DimensionError(f"invalid Alice factors {self.alice} for dims {self.dims}")

    @classmethod
    def two_qubits(cls) -> Bipartition:
        """Alice holds the first qubit, Bob the second."""
        return cls((2, 2), (0,))

    @classmethod
    def with_resource(cls) -> Bipartition:
        """Factors X1, Y1, X2, Y2 with the cut {X1, X2} : {Y1, Y2}."""
        return cls((2, 2, 2, 2), (0, 2))

    @property
    def bob(self) -> tuple[int, ...]:
        return tuple(k for k in range(len(self.dims)) if k not in self.alice)

    @property
    def dims_left(self) -> tuple[int, ...]:
        return tuple(self.dims[k] for k in self.alice)

    @property
    def dims_right(self) -> tuple[int, ...]:
        return tuple(self.dims[k] for k in self.bob)

    @property
    def order(self) -> tuple[int, ...]:
        """Permutation that brings Alice's factors to the front."""
        return self.alice + self.bob

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def side(self, side: str) -> tuple[int, ...]:
        if side in ("left", "alice"):
            return self.alice
        if side in ("right", "bob"):
            return self.bob
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")


class EigDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
    return a


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more operators, left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, (as_matrix(o) for o in ops))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _check_square(m: np.ndarray, dims: Sequence[int]) -> None:
    n = int(np.prod(dims))
    if m.shape != (n, n):
        raise DimensionError(f"operator of shape {m.shape} does not act on dims {tuple(dims)}")


def transpose_factors(m, dims: Sequence[int], factors: Sequence[int]) -> np.ndarray:
    """Transpose the listed tensor factors of ``m`` in the standard basis."""
    m = as_matrix(m)
    dims = list(dims)
    _check_square(m, dims)
    n = len(dims)
    axes = list(range(2 * n))
    for k in factors:
        axes[k], axes[n + k] = axes[n + k], axes[k]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def partial_transpose(m, cut: Bipartition, side: str = "left") -> np.ndarray:
    """Transpose every factor on one side of ``cut``."""
    return transpose_factors(m, cut.dims, cut.side(side))


def permute_systems(m, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: factor ``perm[k]`` of the input becomes factor ``k``."""
    m = as_matrix(m)
    dims = list(dims)
    _check_square(m, dims)
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{perm} is not a permutation of {n} factors")
    axes = list(perm) + [n + p for p in perm]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def trace_out(m, dims: Sequence[int], factors: Sequence[int]) -> np.ndarray:
    """Partial trace over ``factors``; the remaining factors keep their order."""
    m = as_matrix(m)
    dims = list(dims)
    _check_square(m, dims)
    n = len(dims)
    keep = [k for k in range(n) if k not in set(factors)]
    t = m.reshape(dims + dims)
    # trace from the highest index down so earlier axis numbers stay valid
    live = n
    for k in sorted(set(factors), reverse=True):
        t = np.trace(t, axis1=k, axis2=k + live)
        live -= 1
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d, d)


def partial_trace(m, cut: Bipartition, keep: str = "left") -> np.ndarray:
    """Reduced operator on one side of ``cut`` (factors in their original order)."""
    discard = cut.side("right" if keep in ("left", "alice") else "left")
    return trace_out(m, cut.dims, discard)


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and float(np.max(np.abs(m - dagger(m)), initial=0.0)) <= tol


def _hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    dev = float(np.max(np.abs(m - dagger(m)), initial=0.0))
    if dev > tol:
        raise NotHermitianError(f"max |m - m^dagger| = {dev:.3e} exceeds {tol:.0e}")
    return (m + dagger(m)) / 2


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized before LAPACK's ``zheevd`` is called, so the
    result is deterministic for identical input.
    """
    w, v = np.linalg.eigh(_hermitian(m, tol))
    return EigDecomposition(w, v)


def jacobi_eig(m, tol: float = 1e-14, max_sweeps: int = 100) -> EigDecomposition:
    """Cyclic complex Jacobi eigensolver for Hermitian matrices.

    Slow but independent of LAPACK; used to cross-check :func:`hermitian_eig`.
    Each rotation first rotates away the phase of the pivot, then applies a
    real Givens rotation that annihilates it.
    """
    a = _hermitian(m).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                zeta = (a[q, q].real - a[p, p].real) / (2 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1 / np.hypot(1.0, t)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                jpp, jpq = c, s
                jqp, jqq = -s * np.conj(phase), c * np.conj(phase)
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = cp * jpp + cq * jqp
                a[:, q] = cp * jpq + cq * jqq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(jpp) * rp + np.conj(jqp) * rq
                a[q, :] = np.conj(jpq) * rp + np.conj(jqq) * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = vp * jpp + vq * jqp
                v[:, q] = vp * jpq + vq * jqq
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return EigDecomposition(w[order], v[:, order])


def eigvalsh(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return np.linalg.eigvalsh(_hermitian(m, tol))


def min_eigenvalue(m, tol: float = HERMITIAN_TOL) -> float:
    return float(eigvalsh(m, tol)[0])


def max_eigenvalue(m, tol: float = HERMITIAN_TOL) -> float:
    return float(eigvalsh(m, tol)[-1])


def psd_project(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Nearest positive semidefinite matrix in Frobenius norm."""
    w, v = hermitian_eig(m, tol)
    return (v * np.clip(w, 0.0, None)) @ dagger(v)


def psd_project_batch(ms: np.ndarray) -> np.ndarray:
    """:func:`psd_project` over a stack of Hermitian matrices, no input checks."""
    ms = (ms + dagger(ms)) / 2
    w, v = np.linalg.eigh(ms)
    return (v * np.clip(w, 0.0, None)[..., None, :]) @ dagger(v)


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    flat = m.reshape(-1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`; accepts a dict or a JSON string."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", [0.0] * (rows * cols)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionError(f"expected {rows * cols} entries for a {rows}x{cols} matrix")
    m = (re + 1j * im).reshape(rows, cols)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m
