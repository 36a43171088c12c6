"""Command-line front end dispatching to the library and emitting JSON/CSV."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import classical as cl
from . import httesting as ht
from . import qdivergences as qd
from . import serialize as io
from .applications import ThermalSpec, clausius_report, cramer_rao, km_perturbation, speed_limit, thermal_state
from .errors import QigError, ValidationError
from .qmetrics import g_metric, parse_g_tag
from .states import gibbs


def _parse_priors(text: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError("--priors expects two comma-separated numbers") from exc
    return a, b


def _parse_thetas(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise ValidationError("--theta expects comma-separated numbers") from exc


def _cmd_classical_div(args) -> dict:
    p = io.load_probdist(args.p)
    q = io.load_probdist(args.q)
    kind = args.kind
    if kind == "tv":
        value = cl.tv_distance(p, q)
    elif kind == "kl":
        value = cl.kl_divergence(p, q)
    elif kind.startswith("hellinger:"):
        value = cl.hellinger_divergence(p, q, float(kind.split(":")[1]))
    elif kind.startswith("renyi:"):
        value = cl.renyi_divergence(p, q, float(kind.split(":")[1]))
    elif kind.startswith("f:"):
        value = cl.f_divergence(p, q, cl.generator_from_name(kind[2:]))
    else:
        raise ValidationError(f"unknown classical divergence kind {kind!r}")
    return {"kind": kind, "value": value}


def _cmd_quantum_div(args) -> dict:
    rho = io.load_density(args.rho)
    sigma = io.load_density(args.sigma)
    kind = args.kind
    if kind == "trace":
        value = qd.trace_distance(rho, sigma)
    elif kind == "fidelity":
        value = qd.fidelity(rho, sigma)
    elif kind == "affinity":
        value = qd.affinity(rho, sigma)
    elif kind == "relent":
        value = qd.q_relative_entropy(rho, sigma)
    elif kind.startswith("tsallis:"):
        value = qd.tsallis(rho, sigma, float(kind.split(":")[1]))
    elif kind.startswith("renyi:"):
        value = qd.q_renyi(rho, sigma, float(kind.split(":")[1]))
    else:
        raise ValidationError(f"unknown quantum divergence kind {kind!r}")
    return {"kind": kind, "value": value}


def _cmd_metric(args) -> dict:
    family, meta = io.load_family(args.family)
    theta = _parse_thetas(args.theta) if args.theta is not None else np.array([meta["theta0"]])
    g = parse_g_tag(args.g)
    result = g_metric(family, theta, g)
    return {
        "g": args.g,
        "theta": list(theta),
        "matrix": result.matrix,
        "classical_part": result.classical_part,
        "quantum_part": result.quantum_part,
        "divergent": result.divergent,
        "scalar": result.scalar if result.matrix.shape == (1, 1) else None,
    }


def _cmd_chernoff(args) -> dict:
    if args.classical:
        if not args.p or not args.q:
            raise ValidationError("chernoff --classical needs --p and --q")
        res = cl.chernoff(io.load_probdist(args.p), io.load_probdist(args.q))
    else:
        if not args.rho or not args.sigma:
            raise ValidationError("chernoff needs --rho and --sigma")
        res = qd.q_chernoff(io.load_density(args.rho), io.load_density(args.sigma))
    return {"xi": res.xi, "alpha_star": res.alpha_star, "C": res.information}


def _cmd_ht(args) -> dict:
    rho = io.load_density(args.rho)
    sigma = io.load_density(args.sigma)
    priors = _parse_priors(args.priors)
    result = ht.ncopy_discrimination(rho, sigma, priors[0], priors[1], n_max=args.n)
    payload = {"ncopy": result.to_dict()}
    if args.simulate:
        povm = ht.helstrom_povm(rho, sigma, priors[0], priors[1])
        sim = ht.simulate_ht(
            rho, sigma, povm, priors[0], priors[1], trials=args.simulate, seed=args.seed
        )
        payload["simulation"] = sim.to_dict()
    return payload


def _cmd_audit(args) -> dict:
    if args.classical:
        if not args.p or not args.q:
            raise ValidationError("audit --classical needs --p and --q")
        report = cl.audit_classical(io.load_probdist(args.p), io.load_probdist(args.q))
    else:
        if not args.rho or not args.sigma:
            raise ValidationError("audit needs --rho and --sigma")
        report = qd.audit_quantum(io.load_density(args.rho), io.load_density(args.sigma))
    return report.to_dict()


def _cmd_estimate_bound(args) -> dict:
    family, meta = io.load_family(args.family)
    theta = args.theta if args.theta is not None else meta["theta0"]
    return cramer_rao(family, theta, nu=args.nu).to_dict()


def _cmd_speed_limit(args) -> dict:
    family, meta = io.load_family(args.trajectory)
    result = speed_limit(family, tau=meta["tau"], g=args.g, steps=args.steps)
    return result.to_dict()


def _cmd_thermo(args) -> dict:
    h = io.load_hermitian(args.hamiltonian)
    v = io.load_hermitian(args.perturbation)
    spec = ThermalSpec(hamiltonian=h, beta=args.beta, perturbation=v)
    pert = km_perturbation(spec, args.lam)
    final = gibbs(spec.beta * spec.hamiltonian - args.lam * spec.perturbation, 1.0)
    clausius = clausius_report(spec, final)
    return {
        "thermal_populations": list(np.linalg.eigvalsh(thermal_state(spec).matrix)),
        "perturbation": pert.to_dict(),
        "clausius": clausius.to_dict(),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qig",
        description="Statistical distances, monotone metrics and discrimination tools.",
    )
    parser.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    parser.add_argument("--out", help="write the report to a file instead of stdout")
    parser.add_argument(
        "--require-finite",
        action="store_true",
        help="exit with code 3 if the report contains an infinite value",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical-div", help="divergence between probability files")
    p.add_argument("--kind", required=True, help="tv|kl|hellinger:<a>|renyi:<a>|f:<name>")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(handler=_cmd_classical_div)

    p = sub.add_parser("quantum-div", help="divergence between density-matrix files")
    p.add_argument("--kind", required=True, help="trace|fidelity|affinity|relent|tsallis:<a>|renyi:<a>")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.set_defaults(handler=_cmd_quantum_div)

    p = sub.add_parser("metric", help="monotone metric of a state family")
    p.add_argument("--g", required=True, help="qfi|rld|wyd:<a>|km")
    p.add_argument("--family", required=True)
    p.add_argument("--theta", help="comma-separated parameter values")
    p.set_defaults(handler=_cmd_metric)

    p = sub.add_parser("chernoff", help="Chernoff bound, argmin and information")
    p.add_argument("--classical", action="store_true")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--rho")
    p.add_argument("--sigma")
    p.set_defaults(handler=_cmd_chernoff)

    p = sub.add_parser("ht", help="exact n-copy discrimination, optional simulation")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--priors", default="0.5,0.5")
    p.add_argument("--simulate", type=int, default=0, help="Monte Carlo trial count")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_ht)

    p = sub.add_parser("audit", help="full inequality report")
    p.add_argument("--classical", action="store_true")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--rho")
    p.add_argument("--sigma")
    p.set_defaults(handler=_cmd_audit)

    p = sub.add_parser("estimate-bound", help="estimation error bound of a family")
    p.add_argument("--family", required=True)
    p.add_argument("--theta", type=float)
    p.add_argument("--nu", type=int, default=1)
    p.set_defaults(handler=_cmd_estimate_bound)

    p = sub.add_parser("speed-limit", help="evolution-time bound along a trajectory")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--g", default="qfi", help="qfi|wyd:0.5")
    p.add_argument("--steps", type=int, default=200)
    p.set_defaults(handler=_cmd_speed_limit)

    p = sub.add_parser("thermo", help="thermal perturbation and entropy balance")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--perturbation", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(handler=_cmd_thermo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except ValidationError as exc:
        sys.stdout.write(io.dumps({"error": str(exc), "command": args.command}) + "\n")
        return 2
    except QigError as exc:
        sys.stdout.write(
            io.dumps({"error": str(exc), "command": args.command, "kind": type(exc).__name__})
            + "\n"
        )
        return 2
    text = io.to_csv(payload) if args.csv else io.dumps(payload) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.require_finite and io.contains_infinity(payload):
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
