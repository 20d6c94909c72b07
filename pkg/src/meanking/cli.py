"""Command-line surface: verify, optimize, simulate, report, export-vaa.

Exit codes: 0 success, 1 invariant/acceptance failure, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import inference, optics, qstate, reporting, tuner, vaa
from .errors import MeanKingError, NotOddPrime


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanking",
        description="Simulate and tune linear-optical Mean King's Problem setups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_dim=True):
        if needs_dim:
            p.add_argument("--dim", type=int, required=True, help="odd prime dimension")
        p.add_argument("--setup", help="path to a setup JSON (default: builtin template)")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("verify", help="run the analytic invariant suites")
    common(p)

    p = sub.add_parser("optimize", help="tune phases and persist the best run")
    common(p)
    p.add_argument("--restarts", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objective", default="p_v", choices=tuner.OBJECTIVES)
    p.add_argument("--strategy", default="vaa-map", choices=inference.STRATEGIES)
    p.add_argument("--post-select", action="store_true")
    p.add_argument("--subset", help="comma-separated basis subset for p_m_subset")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("simulate", help="click distribution for one input state")
    common(p)
    p.add_argument("--input", default="bell", help="bell | collapsed:m,j | vaa:k")
    p.add_argument("--phases", help="run JSON file with phases (default: all zero)")
    p.add_argument("--format", default="json", choices=("json", "csv"))

    p = sub.add_parser("report", help="Table-style CSV from a saved run")
    common(p)
    p.add_argument("phase_file", help="run JSON produced by optimize")
    p.add_argument("--percent", action="store_true")

    p = sub.add_parser("export-vaa", help="dump the VAA basis and mapping table")
    common(p)
    return parser


def _load_setup(args) -> optics.SetupModel:
    if args.setup:
        setup = optics.load_setup(args.setup)
        if setup.dim != args.dim:
            raise ValueError(f"setup file is for D={setup.dim}, expected D={args.dim}")
        return setup
    return optics.build_setup(args.dim)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- verify

def invariant_report(dim: int, setup: optics.SetupModel) -> list[tuple[str, float, float]]:
    """(name, max deviation, tolerance) per invariant suite."""
    mubs = qstate.build_mub(dim)
    basis = vaa.build_vaa_basis(dim, mubs)
    d2 = dim * dim
    checks = []

    gram_dev = max(
        np.abs(mubs.bases[m] @ mubs.bases[m].conj().T - np.eye(dim)).max()
        for m in range(dim + 1)
    )
    checks.append(("mub_orthonormality", gram_dev, 1e-12))
    unbias = 0.0
    for m in range(dim + 1):
        for mp in range(m + 1, dim + 1):
            ov = np.abs(mubs.bases[m] @ mubs.bases[mp].conj().T) ** 2
            unbias = max(unbias, np.abs(ov - 1 / dim).max())
    checks.append(("mub_unbiasedness", unbias, 1e-12))

    ref = qstate.bell_state(dim, mubs, 0).amps
    bell_dev = max(
        np.abs(qstate.bell_state(dim, mubs, m).amps - ref).max() for m in range(dim + 1)
    )
    checks.append(("bell_mub_independence", bell_dev, 1e-12))
    overlap_dev = max(
        abs(np.vdot(ref, qstate.collapsed_state(mubs, m, j).amps) - 1 / np.sqrt(dim))
        for m in range(dim + 1)
        for j in range(dim)
    )
    checks.append(("bell_collapsed_overlap", overlap_dev, 1e-12))

    checks.append(("vaa_gram", np.abs(basis.gram() - np.eye(d2)).max(), 1e-10))
    checks.append(("vaa_overlap_delta", vaa.vaa_overlap_check(basis, mubs), 1e-10))
    checks.append(("vaa_completeness", vaa.completeness_deviation(basis), 1e-10))
    checks.append(("mols_bijections", 0.0 if vaa.mols_check(basis.mapping) else 1.0, 0.5))

    rng = np.random.default_rng(0)
    phases = rng.uniform(0, 2 * np.pi, setup.phase_count)
    coin, dbl = optics.click_probabilities(setup, phases, basis.states)
    checks.append(("distribution_sum", np.abs(coin.sum(1) + dbl.sum(1) - 1).max(), 1e-9))

    shifted = optics.cyclic_variant(setup, 1 % dim)
    state = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    state /= np.linalg.norm(state)
    permuted = np.roll(np.roll(state, 1, axis=0), 1, axis=1)
    c1, d1 = optics.click_probabilities(setup, phases, state[None])
    c2, d2_ = optics.click_probabilities(shifted, phases, permuted[None])
    equiv = max(np.abs(c1 - c2).max(), np.abs(d1 - d2_).max())
    checks.append(("cyclic_equivariance", equiv, 1e-12))
    return checks


def cmd_verify(args) -> int:
    qstate.require_odd_prime(args.dim)
    setup = _load_setup(args)
    lines = []
    failed = False
    for name, dev, tol in invariant_report(args.dim, setup):
        ok = dev <= tol
        failed |= not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: max deviation {dev:.3e} (tol {tol:.0e})")
    _emit("\n".join(lines) + "\n", args.out)
    return 1 if failed else 0


# -------------------------------------------------------------- optimize

def cmd_optimize(args) -> int:
    qstate.require_odd_prime(args.dim)
    setup = _load_setup(args)
    mubs = qstate.build_mub(args.dim)
    basis = vaa.build_vaa_basis(args.dim, mubs)
    subset = [int(s) for s in args.subset.split(",")] if args.subset else None
    run = tuner.optimize(
        setup,
        basis,
        mubs,
        objective=args.objective,
        restarts=args.restarts,
        seed=args.seed,
        strategy=args.strategy,
        post_select=args.post_select,
        subset=subset,
        workers=args.workers,
    )
    p_v = inference.pv_value(setup, run.best_phases, basis, args.post_select)
    values = inference.pm_values(
        setup, run.best_phases, mubs, basis, args.strategy, args.post_select
    )
    p_m = {m: float(v) for m, v in enumerate(values)}
    payload = reporting.run_to_json(args.dim, run, p_v, p_m)
    out = args.out or f"mkp_run_d{args.dim}.json"
    reporting.save_run(out, payload)
    agg = reporting.aggregate(p_m)
    print(f"wrote {out}")
    print(f"p_V = {reporting.sig6(p_v)}")
    for m, v in p_m.items():
        print(f"p_M(m={m}) = {reporting.sig6(v)}")
    print(f"average = {reporting.sig6(agg['average'])}")
    m1, m2 = agg["best_pair"]
    print(f"best 2-subset = {{{m1},{m2}}} at {reporting.sig6(agg['best_pair_value'])}")
    return 0


# -------------------------------------------------------------- simulate

def _parse_input(spec: str, dim: int, mubs, basis) -> np.ndarray:
    if spec == "bell":
        return qstate.bell_state(dim, mubs, dim).amps
    kind, _, rest = spec.partition(":")
    if kind == "collapsed":
        m, j = (int(v) for v in rest.split(","))
        return qstate.collapsed_state(mubs, m, j).amps
    if kind == "vaa":
        return basis.states[int(rest)]
    raise ValueError(f"unknown input spec {spec!r}")


def cmd_simulate(args) -> int:
    qstate.require_odd_prime(args.dim)
    setup = _load_setup(args)
    mubs = qstate.build_mub(args.dim)
    basis = vaa.build_vaa_basis(args.dim, mubs)
    if args.phases:
        data = reporting.load_run(args.phases)
        reporting.check_run_dim(data, args.dim)
        phases = np.asarray(data["phases"], dtype=float)
    else:
        phases = np.zeros(setup.phase_count)
    amps = _parse_input(args.input, args.dim, mubs, basis)
    dist = optics.simulate(setup, phases, qstate.TwoPhotonState(args.dim, amps))
    items = sorted(dist.probs.items(), key=lambda kv: -kv[1])
    if args.format == "json":
        text = json.dumps(
            {f"{u}+{v}": float(p) for (u, v), p in items}, indent=2, sort_keys=True
        ) + "\n"
    else:
        text = "pattern,probability\n" + "".join(
            f"{u}+{v},{reporting.sig6(p)}\n" for (u, v), p in items
        )
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------- report

def cmd_report(args) -> int:
    qstate.require_odd_prime(args.dim)
    data = reporting.load_run(args.phase_file)
    reporting.check_run_dim(data, args.dim)
    p_m = {int(m): float(v) for m, v in data["p_m"].items()}
    _emit(reporting.report_csv(args.dim, p_m, percent=args.percent), args.out)
    return 0


def cmd_export_vaa(args) -> int:
    qstate.require_odd_prime(args.dim)
    mubs = qstate.build_mub(args.dim)
    basis = vaa.build_vaa_basis(args.dim, mubs)
    _emit(json.dumps(vaa.mapping_to_json(basis), indent=2) + "\n", args.out)
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "optimize": cmd_optimize,
    "simulate": cmd_simulate,
    "report": cmd_report,
    "export-vaa": cmd_export_vaa,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (NotOddPrime, ValueError, OSError, json.JSONDecodeError, MeanKingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
