"""Assemble closed forms, solver values, protocols and certificates into one row."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Iterable, TextIO

from .discrimination import (
    certificate_h_lambda,
    certificate_h_lambda_eps,
    formula_p_global,
    formula_p_local,
    formula_p_local_assisted,
    verify_dual_feasibility,
)
from .protocols import run_computational_basis_protocol, run_teleportation_protocol
from .sdp import SolverOptions, solve_ensemble
from .states import attach_resource, maximally_mixed, noisy_bell_ensemble

CHAIN_TOL = 1e-9
REPORT_OPTIONS = SolverOptions(gap_tolerance=1e-10)

CSV_COLUMNS = (
    "lambda",
    "epsilon",
    "p_local",
    "p_local_assisted",
    "p_ppt_sdp",
    "p_global_sdp",
    "p_formula_local",
    "p_formula_global",
    "gap",
    "certificate_trace",
    "feasible",
)


class SolverNotConverged(RuntimeError):
    pass


@dataclass(frozen=True)
class SuccessReport:
    """Success probabilities for one noisy Bell ensemble.

    ``p_local`` and ``p_local_assisted`` are achieved by explicit LOCC
    protocols, ``p_ppt_upper`` is a certified upper bound on the PPT optimum
    and ``p_global`` is the rounded solver value over all measurements.
    """

    lam: float
    epsilon: float | None
    p_global: float
    p_ppt_sdp: float
    p_ppt_upper: float
    p_local: float
    p_local_assisted: float | None
    p_formula_local: float
    p_formula_global: float
    p_formula_local_assisted: float | None
    certificate_trace: float
    feasible: bool
    worst_min_eigenvalue: float

    @property
    def gap(self) -> float:
        return self.p_global - self.p_local

    def chain_holds(self, tol: float = CHAIN_TOL) -> bool:
        return self.p_local <= self.p_ppt_upper + tol and self.p_ppt_upper <= self.p_global + tol

    def csv_row(self) -> dict:
        return {
            "lambda": self.lam,
            "epsilon": "" if self.epsilon is None else self.epsilon,
            "p_local": self.p_local,
            "p_local_assisted": "" if self.p_local_assisted is None else self.p_local_assisted,
            "p_ppt_sdp": self.p_ppt_sdp,
            "p_global_sdp": self.p_global,
            "p_formula_local": self.p_formula_local,
            "p_formula_global": self.p_formula_global,
            "gap": self.gap,
            "certificate_trace": self.certificate_trace,
            "feasible": self.feasible,
        }

    def as_dict(self) -> dict:
        d = asdict(self)
        d["gap"] = self.gap
        return d


def success_report(lam: float, epsilon: float | None = None, sigma=None,
                   options: SolverOptions | None = None) -> SuccessReport:
    """Solve, simulate and certify one instance.

    Without ``epsilon`` the certificate is the unassisted one and bounds the
    PPT value; with ``epsilon`` it is the assisted certificate, which bounds
    the local value with the resource attached.
    """
    sigma = sigma if sigma is not None else maximally_mixed(4)
    opts = options or REPORT_OPTIONS
    ensemble = noisy_bell_ensemble(lam, sigma)
    cert = certificate_h_lambda(lam, sigma)
    ppt = solve_ensemble(ensemble, "ppt", opts, cert)
    glob = solve_ensemble(ensemble, "all", opts)
    for name, sol in (("ppt", ppt), ("all", glob)):
        if not sol.converged:
            raise SolverNotConverged(f"{name} solve stopped after {sol.iterations} iterations "
                                     f"with gap {sol.gap:.3e}")
    feas = verify_dual_feasibility(cert, ensemble)
    p_ppt_upper = min(ppt.dual_value, cert.trace) if feas.feasible else ppt.dual_value

    assisted = formula_assisted = None
    if epsilon is not None:
        assisted = run_teleportation_protocol(ensemble, epsilon).achieved_probability
        formula_assisted = formula_p_local_assisted(lam, epsilon)
        cert = certificate_h_lambda_eps(lam, epsilon, sigma)
        feas = verify_dual_feasibility(cert, attach_resource(ensemble, epsilon))

    return SuccessReport(
        lam=lam,
        epsilon=epsilon,
        p_global=glob.primal_value,
        p_ppt_sdp=ppt.primal_value,
        p_ppt_upper=p_ppt_upper,
        p_local=run_computational_basis_protocol(ensemble),
        p_local_assisted=assisted,
        p_formula_local=formula_p_local(lam),
        p_formula_global=formula_p_global(lam),
        p_formula_local_assisted=formula_assisted,
        certificate_trace=cert.trace,
        feasible=feas.feasible,
        worst_min_eigenvalue=feas.worst_min_eigenvalue,
    )


def write_csv(reports: Iterable[SuccessReport], out: TextIO) -> int:
    """Write reports as CSV rows (values with ``repr`` precision); returns the row count."""
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    n = 0
    for r in reports:
        writer.writerow({k: _fmt(v) for k, v in r.csv_row().items()})
        n += 1
    return n


def _fmt(v) -> str:
    if isinstance(v, bool) or v == "":
        return str(v)
    if isinstance(v, float) and math.isfinite(v):
        return repr(v)
    return str(v)
