"""Acceptance gate.

Each criterion is a function returning ``(passed, detail)``. Under pytest every
criterion is its own test and prints one PASS/FAIL line; run this file
directly to print the whole table.
"""

import math
import time

import numpy as np
import pytest

from noisybell.discrimination import (
    certificate_h_lambda,
    certificate_h_lambda_eps,
    entanglement_entropy,
    formula_p_global,
    formula_p_local,
    formula_p_local_assisted,
    is_ppt_state,
    verify_dual_feasibility,
)
from noisybell.linalg import hermitian_eig
from noisybell.protocols import run_computational_basis_protocol, run_teleportation_protocol
from noisybell.report import success_report
from noisybell.sdp import solve_ensemble, verify_weak_duality
from noisybell.states import (
    Ensemble,
    attach_resource,
    bell_state,
    maximally_mixed,
    noisy_bell_ensemble,
    random_density_matrix,
    resource_state,
    werner_ensemble,
)

GRID = [k / 10 for k in range(11)]
COARSE = [0.0, 0.25, 0.5, 0.75, 1.0]


def sigma_family():
    return [
        maximally_mixed(4),
        random_density_matrix(4, 11),
        random_density_matrix(4, 12),
        random_density_matrix(4, 13),
        random_density_matrix(4, 14, rank=1),
    ]


def _grid_errors(cone, formula):
    worst, start = 0.0, time.perf_counter()
    for sigma in sigma_family():
        for lam in GRID:
            value = solve_ensemble(noisy_bell_ensemble(lam, sigma), cone).primal_value
            worst = max(worst, abs(value - formula(lam)))
    return worst, time.perf_counter() - start


def criterion_1():
    worst, secs = _grid_errors("ppt", formula_p_local)
    return worst <= 1e-6 and secs < 10, f"max |p_PPT - (1+lam)/4| = {worst:.2e} in {secs:.1f}s"


def criterion_2():
    worst, secs = _grid_errors("all", formula_p_global)
    return worst <= 1e-6, f"max |p - (1+3lam)/4| = {worst:.2e} in {secs:.1f}s"


def criterion_3():
    start = time.perf_counter()
    sim = 0.0
    for sigma in sigma_family():
        for lam in GRID:
            ens = noisy_bell_ensemble(lam, sigma)
            for eps in GRID:
                got = run_teleportation_protocol(ens, eps).achieved_probability
                sim = max(sim, abs(got - formula_p_local_assisted(lam, eps)))
    sdp = 0.0
    for lam in COARSE:
        for eps in COARSE:
            ens = attach_resource(noisy_bell_ensemble(lam), eps)
            got = solve_ensemble(ens, "ppt").primal_value
            sdp = max(sdp, abs(got - formula_p_local_assisted(lam, eps)))
    secs = time.perf_counter() - start
    ok = sim <= 1e-10 and sdp <= 1e-5 and secs < 120
    return ok, f"teleportation err {sim:.2e}, attached PPT err {sdp:.2e} in {secs:.1f}s"


def criterion_4():
    worst_eig, gaps = math.inf, []
    for sigma in sigma_family():
        for lam in GRID:
            ens = noisy_bell_ensemble(lam, sigma)
            cert = certificate_h_lambda(lam, sigma)
            worst_eig = min(worst_eig, verify_dual_feasibility(cert, ens).worst_min_eigenvalue)
            gaps.append(verify_weak_duality(solve_ensemble(ens, "ppt"), cert).gap)
    for lam in COARSE:
        for eps in COARSE:
            ens = attach_resource(noisy_bell_ensemble(lam), eps)
            cert = certificate_h_lambda_eps(lam, eps)
            worst_eig = min(worst_eig, verify_dual_feasibility(cert, ens).worst_min_eigenvalue)
            gaps.append(verify_weak_duality(solve_ensemble(ens, "ppt"), cert).gap)
    ok = worst_eig >= -1e-10 and min(gaps) >= -1e-7 and max(gaps) <= 1e-5
    return ok, f"worst min eigenvalue {worst_eig:.2e}, gaps in [{min(gaps):.2e}, {max(gaps):.2e}]"


def criterion_5():
    bell = noisy_bell_ensemble(1.0)
    local = run_computational_basis_protocol(bell)
    glob = solve_ensemble(bell, "all").primal_value
    ppt = solve_ensemble(bell, "ppt").primal_value
    errs = (abs(local - 0.5), abs(glob - 1.0), abs(ppt - 0.5))
    return max(errs) <= 1e-6, f"p_L={local:.9f} p={glob:.9f} p_PPT={ppt:.9f}"


def criterion_6():
    ok = True
    worst = math.inf
    for lam in GRID:
        ens = noisy_bell_ensemble(lam)
        glob = solve_ensemble(ens, "all").primal_value
        for eps in GRID:
            assisted = run_teleportation_protocol(ens, eps).achieved_probability
            deficit = glob - assisted
            bound = lam * (1 - math.sqrt(1 - eps**2)) / 2
            worst = min(worst, deficit - bound)
            if eps == 0:
                ok &= abs(deficit) <= 1e-6
            else:
                ok &= deficit >= bound - 1e-9
                if lam > 0:
                    ok &= deficit > 1e-6
    entropy = entanglement_entropy(resource_state(0.0))
    ok &= entropy == 1.0
    return ok, f"min(deficit - bound) = {worst:.2e}, S(tau_0) = {entropy!r}"


def criterion_7():
    lo, hi = 1 / 3 - 1e-6, 1 / 3 + 1e-6
    flips = (all(is_ppt_state(s) for s in werner_ensemble(lo).states)
             and not any(is_ppt_state(s) for s in werner_ensemble(hi).states))
    errs = [abs(solve_ensemble(werner_ensemble(lam), "ppt").primal_value - formula_p_local(lam))
            for lam in (lo, hi)]
    return flips and max(errs) <= 1e-6, f"PPT flip at 1/3: {flips}, p_PPT err {max(errs):.2e}"


def criterion_8():
    checks = {}
    rng = np.random.default_rng(8)
    worst = 0.0
    for n in (2, 4, 8, 16):
        for _ in range(5):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            m = (a + a.conj().T) / 2
            e = hermitian_eig(m)
            rec = (e.eigenvectors * e.eigenvalues) @ e.eigenvectors.conj().T
            worst = max(worst, np.linalg.norm(rec - m) / np.linalg.norm(m))
    checks["reconstruction"] = worst < 1e-10

    argmax = True
    for seed in range(50):
        states = noisy_bell_ensemble(0.5, random_density_matrix(4, 1000 + seed)).states
        for j in range(1, 5):
            psi = bell_state(j).amplitudes
            argmax &= int(np.argmax([np.vdot(psi, s @ psi).real for s in states])) == j - 1
    checks["argmax"] = argmax

    chain = True
    for sigma in sigma_family()[:2]:
        for lam in (0.0, 0.3, 0.7, 1.0):
            chain &= success_report(lam, 0.5, sigma).chain_holds()
    checks["chain"] = chain

    listed = 0.0
    for seed in range(10):
        r = np.random.default_rng(seed)
        lam, eps = r.uniform(), r.uniform()
        sigma = random_density_matrix(4, 500 + seed)
        ens = noisy_bell_ensemble(lam, sigma)
        a = run_teleportation_protocol(ens, eps, "simulated", sigma=sigma).post_states
        b = run_teleportation_protocol(ens, eps, "listed", lam, sigma).post_states
        listed = max(listed, max(np.abs(x.matrix - y.matrix).max() for x, y in zip(a, b)))
    checks["teleportation"] = listed <= 1e-10

    helstrom = 0.0
    for seed in range(5):
        r1, r2 = random_density_matrix(4, 40 + seed), random_density_matrix(4, 80 + seed)
        ens = Ensemble(((0.5, r1), (0.5, r2)))
        oracle = 0.5 + np.abs(np.linalg.eigvalsh(r1.matrix - r2.matrix)).sum() / 4
        helstrom = max(helstrom, abs(solve_ensemble(ens, "all").primal_value - oracle))
    checks["helstrom"] = helstrom <= 1e-6

    failed = [k for k, v in checks.items() if not v]
    return not failed, "all properties hold" if not failed else f"failed: {', '.join(failed)}"


CRITERIA = [
    ("1 PPT value (1+lam)/4", criterion_1),
    ("2 global value (1+3lam)/4", criterion_2),
    ("3 assisted value", criterion_3),
    ("4 certificate feasibility", criterion_4),
    ("5 Bell-basis anchors", criterion_5),
    ("6 one-ebit endpoint", criterion_6),
    ("7 Werner boundary", criterion_7),
    ("8 property suite", criterion_8),
]


def _line(name, passed, detail):
    return f"{'PASS' if passed else 'FAIL'}  criterion {name}: {detail}"


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_acceptance(name, check, capsys):
    passed, detail = check()
    with capsys.disabled():
        print("\n" + _line(name, passed, detail))
    assert passed, detail


if __name__ == "__main__":
    for name, check in CRITERIA:
        print(_line(name, *check()), flush=True)
