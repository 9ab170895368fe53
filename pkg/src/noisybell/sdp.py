"""First-order solver for minimum-error discrimination over POVMs or PPT POVMs.

The primal program is

    maximize    sum_i p_i Tr(rho_i P_i)
    subject to  sum_i P_i = 1,   P_i in K,

with K the positive semidefinite cone (``cone="all"``) or the PPT cone
(``cone="ppt"``). It is solved by consensus ADMM: an affine copy X of the
measurement, a PSD copy Z and, for the PPT cone, a copy W whose partial
transpose is PSD. Every ``check_every`` iterations the affine iterate is
rounded to an exactly feasible measurement (lower bound) and the scaled
dual variables are repaired into a dual-feasible operator H (upper bound).
The solve stops when the two bounds are within ``gap_tolerance``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .discrimination import (
    Certificate,
    Povm,
    completeness_residual,
    povm_success,
    verify_dual_feasibility,
)
from .linalg import Bipartition, DimensionError, dagger, psd_project_batch
from .states import Ensemble

CONES = ("all", "ppt")
DUALITY_TOL = -1e-7


@dataclass(frozen=True)
class DiscriminationSdp:
    ensemble: Ensemble
    cone: str = "ppt"

    def __post_init__(self):
        if self.cone not in CONES:
            raise ValueError(f"cone must be one of {CONES}, got {self.cone!r}")

    @property
    def cut(self) -> Bipartition:
        return self.ensemble.cut


@dataclass(frozen=True)
class SolverOptions:
    max_iterations: int = 50_000
    primal_tolerance: float = 1e-9
    gap_tolerance: float = 1e-8
    step_parameter: float = 1.0
    seed: int | None = None
    check_every: int = 10

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.primal_tolerance <= 0 or self.gap_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.step_parameter <= 0:
            raise ValueError("step_parameter must be positive")
        if self.check_every < 1:
            raise ValueError("check_every must be at least 1")


@dataclass(frozen=True)
class SdpSolution:
    """Rounded measurement plus certified bounds on the optimum.

    ``primal_value`` is the objective of ``povm`` (a true lower bound) and
    ``dual_value`` is the trace of the dual-feasible ``dual_operator`` (a
    true upper bound).
    """

    povm: Povm
    primal_value: float
    dual_value: float
    dual_operator: np.ndarray
    constraint_residual: float
    cone_residual: float
    iterations: int
    converged: bool

    @property
    def gap(self) -> float:
        return self.dual_value - self.primal_value


def _pt_stack(ms: np.ndarray, dims: tuple[int, ...], factors: tuple[int, ...]) -> np.ndarray:
    n = len(dims)
    axes = list(range(2 * n))
    for k in factors:
        axes[k], axes[n + k] = axes[n + k], axes[k]
    lead = ms.shape[:-2]
    t = ms.reshape(lead + dims + dims)
    axes = list(range(len(lead))) + [len(lead) + a for a in axes]
    return t.transpose(axes).reshape(ms.shape)


def _min_eigs(ms: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh((ms + dagger(ms)) / 2)[..., 0]


def _initial_point(n: int, d: int, seed: int | None) -> np.ndarray:
    eye = np.eye(d, dtype=complex)
    if seed is None:
        return np.repeat(eye[None] / n, n, axis=0)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    g = g @ dagger(g)
    w, v = np.linalg.eigh(g.sum(axis=0))
    inv_sqrt = (v / np.sqrt(w)) @ dagger(v)
    return inv_sqrt @ g @ inv_sqrt


class _Problem:
    """Precomputed data shared by the iteration and the rounding steps."""

    def __init__(self, problem: DiscriminationSdp):
        self.c = problem.ensemble.weighted()
        self.n, self.d, _ = self.c.shape
        self.dims = problem.cut.dims
        self.alice = problem.cut.alice
        self.ppt = problem.cone == "ppt"
        self.eye = np.eye(self.d, dtype=complex)

    def pt(self, ms: np.ndarray) -> np.ndarray:
        return _pt_stack(ms, self.dims, self.alice)

    def affine(self, y: np.ndarray) -> np.ndarray:
        return y - (y.sum(axis=0) - self.eye) / self.n

    def round_primal(self, x: np.ndarray) -> np.ndarray:
        """Shift each operator into the cone and renormalize the sum to 1."""
        x = (x + dagger(x)) / 2
        lo = _min_eigs(x)
        if self.ppt:
            lo = np.minimum(lo, _min_eigs(self.pt(x)))
        shift = np.maximum(0.0, -lo)
        # x sums to 1, so the shifted stack sums to (1 + sum(shift)) * 1
        return (x + shift[:, None, None] * self.eye) / (1 + shift.sum())

    def objective(self, p: np.ndarray) -> float:
        return float(np.einsum("ikl,ikl->", self.c.conj(), p).real)

    def repair_dual(self, a: np.ndarray, b: np.ndarray | None) -> np.ndarray:
        """Dual-feasible H from approximate decompositions ``H - C_i = A_i + T(B_i)``.

        ``a`` and ``b`` are the unscaled multipliers of the PSD and PPT copies;
        the residual of each decomposition is absorbed by a multiple of 1.
        """
        h = (self.c + a + (0 if b is None else b)).mean(axis=0)
        h = (h + dagger(h)) / 2
        a_psd = psd_project_batch(a)
        rest = h - self.c - a_psd
        if b is not None:
            rest = rest - self.pt(psd_project_batch(self.pt(b)))
        t = max(0.0, float(-_min_eigs(rest).min()))
        return h + t * self.eye


def solve(
    problem: DiscriminationSdp,
    options: SolverOptions | None = None,
    certificate: Certificate | None = None,
    diagnostics: TextIO | None = None,
) -> SdpSolution:
    """Solve the discrimination SDP.

    Parameters
    ----------
    problem : DiscriminationSdp
        Ensemble and cone.
    options : SolverOptions, optional
        Iteration limits and tolerances.
    certificate : Certificate, optional
        A known dual-feasible operator. If it passes
        :func:`verify_dual_feasibility` its trace is used as an extra upper
        bound in the stopping test.
    diagnostics : file-like, optional
        Receives one CSV row per convergence check.

    Returns
    -------
    SdpSolution
        ``converged`` is False when the gap did not close within
        ``max_iterations``; the best rounded iterate is still returned.
    """
    opts = options or SolverOptions()
    prob = _Problem(problem)
    rho = opts.step_parameter
    c = prob.c

    cert_bound = np.inf
    if certificate is not None:
        if certificate.h.shape != (prob.d, prob.d):
            raise DimensionError("certificate does not act on the ensemble space")
        if problem.cone == "all":
            ok = all(np.linalg.eigvalsh(certificate.h - ci)[0] >= -1e-10 for ci in c)
        else:
            ok = verify_dual_feasibility(certificate, problem.ensemble).feasible
        if ok:
            cert_bound = certificate.trace

    writer = None
    if diagnostics is not None:
        writer = csv.writer(diagnostics)
        writer.writerow(["iteration", "objective", "primal_residual", "dual_residual",
                         "lower_bound", "upper_bound"])

    x = _initial_point(prob.n, prob.d, opts.seed)
    z = x.copy()
    u = np.zeros_like(x)
    w = x.copy() if prob.ppt else None
    v = np.zeros_like(x) if prob.ppt else None

    best_p, best_lo = None, -np.inf
    best_h, best_hi = None, np.inf
    it = 0
    for it in range(1, opts.max_iterations + 1):
        if prob.ppt:
            x = prob.affine((z - u + w - v) / 2 + c / (2 * rho))
        else:
            x = prob.affine(z - u + c / rho)
        z_old = z
        z = psd_project_batch(x + u)
        u = u + x - z
        r_primal = np.linalg.norm(x - z)
        r_dual = rho * np.linalg.norm(z - z_old)
        if prob.ppt:
            w_old = w
            w = prob.pt(psd_project_batch(prob.pt(x + v)))
            v = v + x - w
            r_primal += np.linalg.norm(x - w)
            r_dual += rho * np.linalg.norm(w - w_old)

        if it % opts.check_every and it != opts.max_iterations:
            continue
        p = prob.round_primal(x)
        lo = prob.objective(p)
        if lo > best_lo:
            best_p, best_lo = p, lo
        h = prob.repair_dual(-rho * u, -rho * v if prob.ppt else None)
        hi = float(np.trace(h).real)
        if hi < best_hi:
            best_h, best_hi = h, hi
        if writer is not None:
            writer.writerow([it, repr(lo), repr(float(r_primal)), repr(float(r_dual)),
                             repr(best_lo), repr(min(best_hi, cert_bound))])
        if min(best_hi, cert_bound) - best_lo <= opts.gap_tolerance:
            break

    povm = Povm(tuple(best_p), validate=False)
    value = povm_success(problem.ensemble, povm)
    constraint = completeness_residual(best_p)
    cone = min(0.0, float(_min_eigs(best_p).min()))
    if prob.ppt:
        cone = min(cone, float(_min_eigs(prob.pt(best_p)).min()))
    upper = min(best_hi, cert_bound)
    converged = (
        upper - value <= opts.gap_tolerance
        and constraint < opts.primal_tolerance
        and cone > -opts.primal_tolerance
    )
    return SdpSolution(
        povm=povm,
        primal_value=value,
        dual_value=float(upper),
        dual_operator=best_h,
        constraint_residual=constraint,
        cone_residual=cone,
        iterations=it,
        converged=converged,
    )


def solve_ensemble(ensemble: Ensemble, cone: str = "ppt", options: SolverOptions | None = None,
                   certificate: Certificate | None = None) -> SdpSolution:
    return solve(DiscriminationSdp(ensemble, cone), options, certificate)


@dataclass(frozen=True)
class DualityReport:
    gap: float
    ok: bool


def verify_weak_duality(solution: SdpSolution, certificate: Certificate) -> DualityReport:
    """Gap between a certificate's claimed trace and a solved primal value."""
    if certificate.h.shape != solution.povm.operators[0].shape:
        raise DimensionError("certificate and solution act on different spaces")
    gap = certificate.claimed_trace - solution.primal_value
    return DualityReport(gap, gap >= DUALITY_TOL)


@dataclass(frozen=True)
class PovmReport:
    completeness_residual: float
    min_eigenvalues: tuple[float, ...]
    pt_min_eigenvalues: tuple[float, ...] | None
    passes: bool


def verify_povm(povm: Povm, cone: str = "all", cut: Bipartition | None = None,
                tol: float = 1e-10) -> PovmReport:
    """Completeness and cone membership of each measurement operator."""
    if cone not in CONES:
        raise ValueError(f"cone must be one of {CONES}, got {cone!r}")
    ops = np.asarray(povm.operators)
    resid = completeness_residual(ops)
    mins = tuple(float(x) for x in _min_eigs(ops))
    pt_mins = None
    ok = resid <= tol and min(mins) >= -tol
    if cone == "ppt":
        cut = cut or Bipartition.two_qubits()
        if cut.dim != povm.dim:
            raise DimensionError(f"cut dims {cut.dims} do not match POVM dim {povm.dim}")
        pt_mins = tuple(float(x) for x in _min_eigs(_pt_stack(ops, cut.dims, cut.alice)))
        ok = ok and min(pt_mins) >= -tol
    return PovmReport(resid, mins, pt_mins, ok)
