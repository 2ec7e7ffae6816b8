"""Command-line front end: run walks, emit figure data, run verifications.

Angles are radians; literals like ``pi/2``, ``3pi/4`` or plain floats are
accepted.  Every command writes CSV data with a JSON metadata sidecar and
is deterministic given its flags.  Exit codes: 0 success, 2 usage error,
3 numerical-verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import circuits, engine, momentum, observables
from .coins import CoinSpec
from .lattice import (
    WEYL_MAJORANA,
    InitialStateSpec,
    Lattice,
    WalkerState,
    build_state,
    change_basis,
    dirac_plane_wave,
    majorana_plane_wave,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION = 3

_ANGLE_RE = re.compile(r"([+-]?)(\d+(?:\.\d*)?)?\*?pi(?:/(\d+(?:\.\d*)?))?")


def parse_angle(text: str) -> float:
    """Parse a radian value: a float or a pi fraction like 'pi/2' or '-3pi/4'."""
    cleaned = text.strip().lower().replace(" ", "")
    try:
        return float(cleaned)
    except ValueError:
        pass
    match = _ANGLE_RE.fullmatch(cleaned)
    if not match:
        raise ValueError(f"cannot parse angle {text!r}")
    sign = -1.0 if match.group(1) == "-" else 1.0
    numerator = float(match.group(2)) if match.group(2) else 1.0
    denominator = float(match.group(3)) if match.group(3) else 1.0
    return sign * numerator * math.pi / denominator


@dataclass
class RunConfig:
    """Everything one spacetime run needs; assembled from CLI flags."""

    op: engine.WalkOperatorSpec
    steps: int
    lattice: Lattice
    init_spec: str
    out_dir: str
    prefix: str
    seed: int


def _build_operator(args) -> engine.WalkOperatorSpec:
    variant = args.op.lower()
    theta = parse_angle(args.theta)
    phi = parse_angle(args.phi)
    if variant == "sqw":
        if args.theta2 is None:
            raise ValueError("sqw needs --theta2 (and optionally --phi2)")
        phi2 = parse_angle(args.phi2) if args.phi2 is not None else phi
        return engine.WalkOperatorSpec(
            "sqw",
            coin1=CoinSpec(theta, phi),
            coin2=CoinSpec(parse_angle(args.theta2), phi2),
        )
    return engine.WalkOperatorSpec(variant, coin=CoinSpec(theta, phi))


def _parse_init(text: str, lat: Lattice, basis_phi: float) -> WalkerState:
    """Build the initial state from a spec like 'theta0=pi/2,phi0=0' or
    'majorana-plane,delta=pi/4'."""
    tokens = [t for t in text.split(",") if t]
    kind = "point"
    fields: dict[str, str] = {}
    for token in tokens:
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key.strip()] = value.strip()
        else:
            kind = token.strip().lower()
    if kind in ("point", "uniform"):
        theta0 = parse_angle(fields.get("theta0", "0"))
        phi0 = parse_angle(fields.get("phi0", "0"))
        if kind == "uniform":
            profile = np.full(lat.n_sites, 1.0 / math.sqrt(lat.n_sites), dtype=complex)
            spec = InitialStateSpec(theta0, phi0, profile=profile)
        else:
            spec = InitialStateSpec(theta0, phi0, u0=int(fields.get("u0", "0")))
        return build_state(spec, lat, basis_phi)
    if kind == "majorana-plane":
        state = majorana_plane_wave(lat, parse_angle(fields.get("delta", "0")))
    elif kind == "dirac-plane":
        state = dirac_plane_wave(lat, int(fields.get("sign", "1")))
    elif kind == "profile":
        with open(fields["path"]) as handle:
            data = json.load(handle)
        profile = np.array([complex(re_, im_) for re_, im_ in data])
        spec = InitialStateSpec(
            parse_angle(fields.get("theta0", "0")),
            parse_angle(fields.get("phi0", "0")),
            profile=profile,
        )
        return build_state(spec, lat, basis_phi)
    else:
        raise ValueError(f"unknown init kind {kind!r}")
    # plane waves are built in the all-real basis; re-express if needed
    if abs((basis_phi - WEYL_MAJORANA) % (2 * math.pi)) > 1e-12:
        state = change_basis(state, basis_phi - WEYL_MAJORANA)
    return state


def _out_dir(args) -> str:
    out = args.out or os.environ.get("DIRACWALK_OUT", ".")
    os.makedirs(out, exist_ok=True)
    return out


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_run(args) -> int:
    op = _build_operator(args)
    lat = Lattice(args.qubits)
    state = _parse_init(args.init, lat, engine.op_basis_phi(op))
    record = engine.evolve(state, op, args.steps)
    out = _out_dir(args)
    csv_path = os.path.join(out, f"{args.prefix}.csv")
    json_path = os.path.join(out, f"{args.prefix}.json")
    engine.write_spacetime_csv(record, csv_path)
    engine.write_spacetime_sidecar(record, json_path)
    if record.metadata["wraparound"]:
        print(
            f"warning: {args.steps} steps wrap the {lat.n_sites}-site ring; "
            "signed positions suppressed",
            file=sys.stderr,
        )
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def cmd_dispersion(args) -> int:
    theta = parse_angle(args.theta)
    op = engine.WalkOperatorSpec(args.op, coin=CoinSpec(theta, parse_angle(args.phi)))
    out = _out_dir(args)
    path = os.path.join(out, args.file)
    rows = []
    worst = 0.0
    for j in range(args.kpoints):
        k = -math.pi + 2.0 * math.pi * (j + 1) / args.kpoints
        plus, minus = momentum.eigenphases(momentum.walk_block(op, k))
        formula = momentum.dispersion_omega(theta, k)
        worst = max(worst, abs(abs(plus) - formula), abs(abs(minus) - formula))
        rows.append([repr(k), repr(plus), repr(minus), repr(formula)])
    _write_csv(path, ["k", "omega_plus", "omega_minus", "omega_formula"], rows)
    print(f"wrote {path}; max |eigenphase - formula| = {worst:.3e}")
    if worst > 1e-10:
        print("dispersion check FAILED (tolerance 1e-10)", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_order(args) -> int:
    eps_list = [float(e) for e in args.eps.split(",")]
    report = momentum.order_fit(
        args.op, args.kappa, args.m, parse_angle(args.phi), eps_list
    )
    out = _out_dir(args)
    path = os.path.join(out, args.file)
    _write_csv(
        path,
        ["eps", "error"],
        [[repr(e), repr(err)] for e, err in zip(report.epsilons, report.errors)],
    )
    expected = momentum.EXPECTED_LOCAL_ORDER[report.variant]
    ok = abs(report.fitted_slope - expected) <= 0.1
    print(
        f"wrote {path}; {report.variant} slope {report.fitted_slope:.4f} "
        f"(expected {expected:.1f}) -> {'pass' if ok else 'FAIL'}"
    )
    return EXIT_OK if ok else EXIT_VERIFICATION


_ALPHA_T1_CLOSED_FORM = {
    "sb": lambda theta: theta,
    "bsb": lambda theta: theta / 2.0,
    "sbs": lambda theta: 0.0,
    "bs": lambda theta: 0.0,
}


def cmd_alpha(args) -> int:
    lat = Lattice(args.qubits)
    thetas = [parse_angle(t) for t in args.thetas.split(",")]
    rows = []
    for name in args.ops.split(","):
        name = name.strip().lower()
        for theta in thetas:
            op = engine.WalkOperatorSpec(name, coin=CoinSpec(theta, math.pi / 2.0))
            alpha = observables.alpha_shift(op, args.steps, lat)
            formula = _ALPHA_T1_CLOSED_FORM.get(name)
            reference = repr(formula(theta)) if formula else ""
            rows.append([name, repr(theta), repr(alpha), reference])
    out = _out_dir(args)
    path = os.path.join(out, args.file)
    _write_csv(path, ["operator", "theta", "alpha", "alpha_single_step_reference"], rows)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_entropy(args) -> int:
    lat = Lattice(args.qubits)
    theta = parse_angle(args.theta)
    phi0s = [0.0, math.pi / 4.0, math.pi / 2.0]
    lo, hi = args.window
    rows = []
    summary = {}
    for name in args.ops.split(","):
        name = name.strip().lower()
        op = engine.WalkOperatorSpec(name, coin=CoinSpec(theta, math.pi / 2.0))
        for phi0 in phi0s:
            state = build_state(
                InitialStateSpec(math.pi / 2.0, phi0), lat, WEYL_MAJORANA
            )
            record = engine.evolve(state, op, args.steps, observe=("entropy",))
            series = record.entropy_bits
            for t, value in enumerate(series):
                rows.append([name, repr(phi0), t, repr(float(value))])
            window = series[lo : hi + 1]
            summary[f"{name},phi0={phi0:.6f}"] = {
                "mean": float(np.mean(window)),
                "variance": float(np.var(window)),
                "window": [lo, hi],
            }
    out = _out_dir(args)
    path = os.path.join(out, args.file)
    _write_csv(path, ["operator", "phi0", "t", "entropy"], rows)
    side = os.path.splitext(path)[0] + ".json"
    with open(side, "w") as handle:
        json.dump(summary, handle, indent=2)
        handle.write("\n")
    print(f"wrote {path} and {side}")
    return EXIT_OK


def cmd_circuit(args) -> int:
    op = _build_operator(args)
    k = args.qubits
    lat = Lattice(k)
    prep = None
    if args.init is not None:
        tokens = dict(
            t.split("=", 1) for t in args.init.split(",") if "=" in t
        )
        kind = "uniform" if "uniform" in args.init else "point"
        prep = circuits.compile_state_prep(
            parse_angle(tokens.get("theta0", "0")),
            parse_angle(tokens.get("phi0", "0")),
            kind,
            k,
        )
    program = circuits.compile_walk_circuit(op, k, args.steps, prep)
    out = _out_dir(args)
    qasm_path = os.path.join(out, f"{args.prefix}.qasm")
    report_path = os.path.join(out, f"{args.prefix}_gates.json")
    with open(qasm_path, "w") as handle:
        handle.write(circuits.export_qasm(program))
    report = circuits.gate_count_report(program)

    verdict = "skipped (k > 3; rerun with --qubits <= 3 for the dense check)"
    status = EXIT_OK
    if k <= 3:
        deviation = circuits.verify(
            circuits.compile_step(op, k), engine.dense_walk_matrix(op, lat)
        )
        ok = deviation < 1e-10
        verdict = f"{'pass' if ok else 'FAIL'} (step deviation {deviation:.3e})"
        if not ok:
            status = EXIT_VERIFICATION
    if k + 1 <= 12:
        # cross-check the full program against the engine on a seeded state
        rng = np.random.default_rng(args.seed)
        amps = rng.normal(size=(2, lat.n_sites)) + 1j * rng.normal(size=(2, lat.n_sites))
        amps /= np.linalg.norm(amps)
        state = WalkerState(amps, lat, engine.op_basis_phi(op))
        reference = state
        for _ in range(args.steps):
            reference = engine.step(reference, op)
        steps_only = circuits.compile_walk_circuit(op, k, args.steps)
        vec = circuits.simulate(steps_only, circuits.grid_to_statevector(state.amplitudes))
        drift = float(
            np.max(np.abs(circuits.statevector_to_grid(vec) - reference.amplitudes))
        )
        verdict += f"; statevector vs engine max deviation {drift:.3e}"
        if drift > 1e-10:
            status = EXIT_VERIFICATION
    report["verification"] = verdict
    with open(report_path, "w") as handle:
        json.dump(report, handle, indent=2)
        handle.write("\n")
    print(f"wrote {qasm_path} and {report_path}")
    print(f"verification: {verdict}")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracwalk",
        description="Lattice Dirac/Majorana quantum-walk simulator and circuit compiler",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None, help="output directory (default: $DIRACWALK_OUT or .)")

    run = sub.add_parser("run", help="evolve a walker and write the spacetime data")
    run.add_argument("--op", default="sb", choices=engine.VARIANTS)
    run.add_argument("--theta", default="pi/2")
    run.add_argument("--phi", default="pi/2")
    run.add_argument("--theta2", default=None, help="second coin angle (sqw only)")
    run.add_argument("--phi2", default=None, help="second coin basis angle (sqw only)")
    run.add_argument("--steps", type=int, default=7)
    run.add_argument("--qubits", type=int, default=7)
    run.add_argument("--init", default="theta0=pi/2,phi0=0")
    run.add_argument("--prefix", default="spacetime")
    run.add_argument("--seed", type=int, default=0)
    add_common(run)
    run.set_defaults(func=cmd_run)

    disp = sub.add_parser("dispersion", help="tabulate omega(k) from blocks and closed form")
    disp.add_argument("--theta", required=True)
    disp.add_argument("--phi", default="pi/2")
    disp.add_argument("--op", default="sb", choices=("sb", "bs", "bsb", "sbs"))
    disp.add_argument("--kpoints", type=int, default=64)
    disp.add_argument("--file", default="dispersion.csv")
    add_common(disp)
    disp.set_defaults(func=cmd_dispersion)

    order = sub.add_parser("order", help="fit the per-step splitting-error order")
    order.add_argument("--op", required=True, choices=("sb", "bs", "bsb", "sbs"))
    order.add_argument("--kappa", type=float, default=1.0)
    order.add_argument("--m", type=float, default=1.0)
    order.add_argument("--phi", default="pi/2")
    order.add_argument("--eps", default="0.1,0.05,0.02,0.01,0.005,0.002")
    order.add_argument("--file", default="order.csv")
    add_common(order)
    order.set_defaults(func=cmd_order)

    alpha = sub.add_parser("alpha", help="shift angle per operator and mass angle")
    alpha.add_argument("--ops", default="sb,bsb,sbs")
    alpha.add_argument("--thetas", default="0,pi/8,pi/4,pi/2,3pi/4")
    alpha.add_argument("--steps", type=int, default=7)
    alpha.add_argument("--qubits", type=int, default=5)
    alpha.add_argument("--file", default="alpha.csv")
    add_common(alpha)
    alpha.set_defaults(func=cmd_alpha)

    entropy = sub.add_parser("entropy", help="coin-position entanglement series")
    entropy.add_argument("--ops", default="sb,bsb,sbs")
    entropy.add_argument("--theta", default="pi/2")
    entropy.add_argument("--steps", type=int, default=100)
    entropy.add_argument("--qubits", type=int, default=8)
    entropy.add_argument("--window", type=int, nargs=2, default=[10, 100])
    entropy.add_argument("--file", default="entropy.csv")
    add_common(entropy)
    entropy.set_defaults(func=cmd_entropy)

    circuit = sub.add_parser("circuit", help="compile, export and verify a gate program")
    circuit.add_argument("--op", default="sb", choices=engine.VARIANTS)
    circuit.add_argument("--theta", default="pi/2")
    circuit.add_argument("--phi", default="pi/2")
    circuit.add_argument("--theta2", default=None)
    circuit.add_argument("--phi2", default=None)
    circuit.add_argument("--steps", type=int, default=7)
    circuit.add_argument("--qubits", type=int, default=4)
    circuit.add_argument("--init", default=None, help="optional state prep, e.g. theta0=pi/2,phi0=0")
    circuit.add_argument("--prefix", default="walk")
    circuit.add_argument("--seed", type=int, default=0)
    add_common(circuit)
    circuit.set_defaults(func=cmd_circuit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
