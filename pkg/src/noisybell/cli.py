"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 verification failure,
3 solver did not converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import discrimination as disc
from .linalg import Bipartition, matrix_from_json, matrix_to_json
from .protocols import run_teleportation_protocol
from .report import CSV_COLUMNS, SolverNotConverged, success_report, write_csv
from .sdp import DiscriminationSdp, SolverOptions, solve, verify_weak_duality
from .states import (
    DensityMatrix,
    Ensemble,
    attach_resource,
    maximally_mixed,
    noisy_bell_ensemble,
    random_density_matrix,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_SOLVER = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _unit(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"{x} is outside [0, 1]")
    return x


def parse_grid(text: str) -> list[float]:
    """``"0,0.5,1"`` or ``"start:stop:count"`` (inclusive linspace)."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            values = np.linspace(float(start), float(stop), int(count)).tolist()
        else:
            values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError(f"grid {text!r} must be nonempty with values in [0, 1]")
    return [round(v, 12) for v in values]


def load_sigmas(source: str, seed: int | None, samples: int) -> list[DensityMatrix]:
    if source == "maximally-mixed":
        return [maximally_mixed(4)]
    if source == "random":
        if seed is None:
            raise UsageError("--sigma random requires --seed")
        return [random_density_matrix(4, seed + k) for k in range(samples)]
    path = Path(source)
    try:
        m = matrix_from_json(path.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read sigma from {path}: {exc}")
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad matrix JSON in {path}: {exc}")
    try:
        return [DensityMatrix(m)]
    except ValueError as exc:
        raise UsageError(f"sigma in {path} is not a two-qubit density matrix: {exc}")


def load_ensemble(path: str) -> Ensemble:
    """Ensemble JSON: ``{"dims": [...], "alice": [...], "members": [{"p": .., "state": matrix}]}``."""
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read ensemble from {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad JSON in {path}: {exc}")
    try:
        cut = Bipartition(tuple(obj["dims"]), tuple(obj.get("alice", [0])))
        members = tuple((float(m["p"]), matrix_from_json(m["state"])) for m in obj["members"])
        return Ensemble(members, cut)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid ensemble in {path}: {exc}")


def _options(args) -> SolverOptions:
    kw = {}
    if getattr(args, "max_iters", None) is not None:
        kw["max_iterations"] = args.max_iters
    return SolverOptions(**kw)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        print(text)
        return
    try:
        Path(out).write_text(text + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}")


def cmd_report(args) -> int:
    sigma = load_sigmas(args.sigma, args.seed, 1)[0]
    r = success_report(args.lam, args.epsilon, sigma)
    rows = [
        ("p_local (computational-basis protocol)", r.p_local),
        ("p_ppt (solver)", r.p_ppt_sdp),
        ("p_ppt upper bound", r.p_ppt_upper),
        ("p_global (solver)", r.p_global),
        ("formula p_local", r.p_formula_local),
        ("formula p_global", r.p_formula_global),
    ]
    if r.p_local_assisted is not None:
        rows += [
            ("p_local_assisted (teleportation)", r.p_local_assisted),
            ("formula p_local_assisted", r.p_formula_local_assisted),
        ]
    rows += [("gap p_global - p_local", r.gap), ("certificate trace", r.certificate_trace)]
    width = max(len(k) for k, _ in rows)
    lines = [f"lambda = {_fmt(r.lam)}"
             + ("" if r.epsilon is None else f", epsilon = {_fmt(r.epsilon)}")]
    lines += [f"{k:<{width}}  {_fmt(v)}" for k, v in rows]
    lines.append(f"{'certificate feasible':<{width}}  {r.feasible}")
    text = "\n".join(lines)
    if args.csv:
        import io

        buf = io.StringIO()
        write_csv([r], buf)
        text += "\n" + buf.getvalue().rstrip("\n")
    _emit(text, args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    sigma = load_sigmas(args.sigma, args.seed, 1)[0]
    ensemble = noisy_bell_ensemble(args.lam, sigma)
    if args.epsilon is None:
        cert = disc.certificate_h_lambda(args.lam, sigma)
    else:
        cert = disc.certificate_h_lambda_eps(args.lam, args.epsilon, sigma)
        ensemble = attach_resource(ensemble, args.epsilon)
    feas = disc.verify_dual_feasibility(cert, ensemble)
    sol = solve(DiscriminationSdp(ensemble, "ppt"), _options(args),
                diagnostics=sys.stderr if args.verbose else None)
    duality = verify_weak_duality(sol, cert)
    lines = [
        f"certificate {cert.kind}: trace {_fmt(cert.trace)}",
        "per-state min eigenvalues: " + ", ".join(_fmt(x) for x in feas.per_state),
        f"feasible: {feas.feasible}",
        f"ppt solver value: {_fmt(sol.primal_value)} (converged {sol.converged}, "
        f"{sol.iterations} iterations)",
        f"duality gap: {_fmt(duality.gap)}",
    ]
    _emit("\n".join(lines), args.out)
    if not feas.feasible or not duality.ok or duality.gap > args.tolerance:
        return EXIT_VERIFY
    if not sol.converged:
        return EXIT_SOLVER
    return EXIT_OK


def cmd_sweep(args) -> int:
    sigmas = load_sigmas(args.sigma, args.seed, args.samples)
    eps_grid = args.epsilon if args.epsilon is not None else [None]
    reports = (
        success_report(lam, eps, s) for lam in args.lam for eps in eps_grid for s in sigmas
    )
    if args.out is None:
        n = write_csv(reports, sys.stdout)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                n = write_csv(reports, fh)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}")
        print(f"wrote {n} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    ensemble = load_ensemble(args.input)
    opts = _options(args)
    if args.tolerance is not None:
        opts = SolverOptions(max_iterations=opts.max_iterations, gap_tolerance=args.tolerance)
    sol = solve(DiscriminationSdp(ensemble, args.cone), opts,
                diagnostics=sys.stderr if args.verbose else None)
    result = {
        "cone": args.cone,
        "primal_value": sol.primal_value,
        "dual_value": sol.dual_value,
        "gap": sol.gap,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "constraint_residual": sol.constraint_residual,
        "cone_residual": sol.cone_residual,
        "povm": [matrix_to_json(m) for m in sol.povm.operators],
    }
    _emit(json.dumps(result, indent=2), args.out)
    return EXIT_OK if sol.converged else EXIT_SOLVER


def cmd_teleport(args) -> int:
    sigma = load_sigmas(args.sigma, args.seed, 1)[0]
    ensemble = noisy_bell_ensemble(args.lam, sigma)
    res = run_teleportation_protocol(ensemble, args.epsilon, args.mode, args.lam, sigma)
    result = {
        "lambda": args.lam,
        "epsilon": args.epsilon,
        "mode": args.mode,
        "achieved_probability": res.achieved_probability,
        "formula": disc.formula_p_local_assisted(args.lam, args.epsilon),
        "post_states": [matrix_to_json(s.matrix) for s in res.post_states],
    }
    _emit(json.dumps(result, indent=2), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noisybell",
                     description="Noisy Bell ensemble discrimination: solver, certificates, protocols.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, lam_type=_unit, eps_type=_unit, lam_required=True):
        p.add_argument("--lambda", dest="lam", type=lam_type, required=lam_required)
        p.add_argument("--epsilon", type=eps_type, default=None)
        p.add_argument("--sigma", default="maximally-mixed",
                       help="'maximally-mixed', 'random' (with --seed) or a matrix JSON path")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)

    p = sub.add_parser("report", help="success probabilities for one instance")
    common(p)
    p.add_argument("--csv", action="store_true", help="also print the CSV row")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("certify", help="check the dual certificate and the duality gap")
    common(p)
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="CSV over a (lambda, epsilon) grid")
    common(p, lam_type=parse_grid, eps_type=parse_grid)
    p.add_argument("--samples", type=int, default=1, help="number of random sigma samples")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("solve", help="raw discrimination SDP on a JSON ensemble")
    p.add_argument("--input", required=True)
    p.add_argument("--cone", choices=("all", "ppt"), default="ppt")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("teleport", help="dump teleportation post-states")
    common(p)
    p.add_argument("--mode", choices=("listed", "simulated"), default="simulated")
    p.set_defaults(func=cmd_teleport)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "teleport" and args.epsilon is None:
        parser.error("teleport requires --epsilon")
    if getattr(args, "samples", 1) < 1:
        parser.error("--samples must be at least 1")
    if getattr(args, "max_iters", None) is not None and args.max_iters < 1:
        parser.error("--max-iters must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"noisybell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverNotConverged as exc:
        print(f"noisybell: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
