"""Command-line front end: schedule | verify | estimate | stats.

Stats go to stdout as stable ``key: value`` lines; the schedule itself is
written only to the requested file.  Exit codes: 0 success, 1 verification
failure, 2 usage error.  SCHED_THREADS caps the per-clique emission fan-out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import circuits as circuits_mod
from . import cover as cover_mod
from . import graphcheck as graph_mod
from . import sim as sim_mod
from .universe import (
    Hamiltonian,
    build_universe,
    classify_terms,
    decompose,
    load_hamiltonian,
    route_term,
)


def _threads() -> int:
    raw = os.environ.get("SCHED_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _print_stats(stats: dict) -> None:
    for key, value in stats.items():
        if isinstance(value, dict):
            value = " ".join(f"{k}:{v}" for k, v in value.items())
        print(f"{key}: {value}")


def _build_schedule(n: int, mapping: str):
    universe = build_universe(n)
    return circuits_mod.emit_schedule(universe, mapping, threads=_threads())


def cmd_schedule(args: argparse.Namespace) -> int:
    schedule = _build_schedule(args.orbitals, args.mapping)
    try:
        circuits_mod.write_schedule(schedule, args.out)
    except OSError as exc:
        print(f"error: cannot write schedule to {args.out}: {exc}", file=sys.stderr)
        return 1
    _print_stats(schedule.stats())
    print(f"schedule_file: {args.out}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    schedule = _build_schedule(args.orbitals, args.mapping)
    _print_stats(schedule.stats())
    if args.grid:
        pi = schedule.universe.pi
        from .plane import ascii_grid

        print("label_grid:")
        print(ascii_grid(pi, cover_mod.place_s_points(pi)))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    n = args.orbitals
    failures: list[str] = []

    universe = build_universe(n)
    pi = universe.pi
    if not cover_mod.check_no_three_collinear(pi):
        failures.append("three placed labels found on one line")
    if not cover_mod.check_unique_tangent(pi):
        failures.append("a placed label lacks a unique tangent")
    print(f"lemma_checks: {'pass' if not failures else 'fail'} (order {pi})")

    graph = graph_mod.build_graph(n)
    report = graph_mod.verify_cover(graph, universe.anchor_groups)
    print(f"cover_check: {'pass' if report.ok else 'fail'}")
    if not report.ok:
        failures.append("cover verification failed")
        print(report.summary())
    print(f"cover_lower_bound: {graph_mod.lower_bound(n)}")
    print(f"cover_size: {len(universe.anchor_groups)}")

    try:
        for term in classify_terms(n):
            route_term(term, universe)
        print("routing_check: pass")
    except Exception as exc:  # noqa: BLE001 - report and fail
        failures.append(f"routing failed: {exc}")
        print("routing_check: fail")

    try:
        schedule = circuits_mod.emit_schedule(universe, args.mapping, threads=_threads())
        print("emission_check: pass")
    except circuits_mod.DiagonalizationError as exc:
        failures.append(f"emission failed: {exc}")
        print("emission_check: fail")
        schedule = None

    if schedule is not None and 2 * n <= 12:
        worst = 0.0
        for mc, circ in zip(universe.cliques, schedule.circuits):
            for op in mc.ops:
                conj = sim_mod.conjugate_by_circuit(
                    sim_mod.operator_matrix(op, args.mapping, n), circ.gates, 2 * n
                )
                worst = max(worst, sim_mod.offdiagonal_norm(conj))
        ok = worst <= circuits_mod.DIAG_TOL
        print(f"conjugation_tripwire: {'pass' if ok else 'fail'} (max offdiag {worst:.2e})")
        if not ok:
            failures.append("conjugation tripwire failed")
    elif schedule is not None:
        print("conjugation_tripwire: skipped (system above 12 qubits; local checks ran at emission)")

    if args.out:
        try:
            data = circuits_mod.load_schedule_dict(args.out)
            problems = circuits_mod.verify_schedule_dict(data)
        except (OSError, json.JSONDecodeError) as exc:
            problems = [f"unreadable schedule file: {exc}"]
        print(f"schedule_file_check: {'pass' if not problems else 'fail'}")
        for p in problems:
            print(f"schedule_file_problem: {p}")
        failures.extend(problems)

    print(f"verify_result: {'pass' if not failures else 'fail'}")
    return 0 if not failures else 1


def _parse_state(spec: str, n_qubits: int) -> np.ndarray:
    if spec.startswith("random:"):
        return sim_mod.random_occupation_state(n_qubits, int(spec.split(":", 1)[1]))
    if spec.startswith("basis:"):
        bits = spec.split(":", 1)[1]
        if len(bits) != n_qubits:
            raise ValueError(f"basis spec needs {n_qubits} bits, got {len(bits)}")
        return sim_mod.basis_occupation_state(bits)
    with open(spec) as f:
        data = json.load(f)
    amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
    if amps.shape != (1 << n_qubits,):
        raise ValueError(f"amplitude file has {amps.shape[0]} entries, expected {1 << n_qubits}")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-9:
        amps = amps / norm
    return amps


def _family_contributions(primitives, schedule, ham: Hamiltonian) -> dict[str, float]:
    const, coeffs = decompose(ham)
    contributions = {"nuclear": const, "part": 0.0, "one_body": 0.0,
                     "diff_spin": 0.0, "same_spin": 0.0}
    for term, c in coeffs.items():
        family = schedule.universe.cliques[route_term(term, schedule.universe)].family
        contributions[family] += c * primitives[term]
    return contributions


def cmd_estimate(args: argparse.Namespace) -> int:
    try:
        ham = load_hamiltonian(args.hamiltonian)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot load Hamiltonian from {args.hamiltonian}: {exc}", file=sys.stderr)
        return 1
    n = ham.n_orbitals
    if args.orbitals is not None and args.orbitals != n:
        print(f"error: --orbitals {args.orbitals} but Hamiltonian has {n}", file=sys.stderr)
        return 2
    try:
        sim_mod._check_size(2 * n)
    except sim_mod.SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    schedule = _build_schedule(n, args.mapping)
    try:
        occ = _parse_state(args.state, 2 * n)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad state spec {args.state!r}: {exc}", file=sys.stderr)
        return 2
    state = sim_mod.occupation_to_qubit_state(occ, args.mapping, 2 * n)
    print(f"orbitals: {n}")
    print(f"mapping: {args.mapping}")
    print(f"state: {args.state}")
    if args.shots == 0:
        primitives = sim_mod.primitive_expectations(state, schedule)
        report = sim_mod.assemble_report(primitives, schedule, ham)
        for family, value in _family_contributions(primitives, schedule, ham).items():
            print(f"energy_{family}: {value:.12f}")
        print(f"energy: {report.energy:.12f}")
    else:
        energy, stderr = sim_mod.estimate_energy_sampled(
            state, schedule, ham, args.shots, args.seed
        )
        print(f"shots_per_clique: {args.shots}")
        print(f"seed: {args.seed}")
        print(f"energy: {energy:.12f}")
        print(f"energy_stderr: {stderr:.12f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planesched",
        description="Measurement scheduling for molecular Hamiltonians "
        "via finite projective planes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, orbitals_required: bool = True) -> None:
        p.add_argument("--orbitals", type=int, required=orbitals_required,
                       help="number of spatial orbitals N (2N spin orbitals)")
        p.add_argument("--mapping", choices=("jw", "parity"), default="jw")

    p_sched = sub.add_parser("schedule", help="emit all measurement circuits to a file")
    common(p_sched)
    p_sched.add_argument("--out", required=True, help="output schedule path (JSON)")
    p_sched.set_defaults(func=cmd_schedule)

    p_stats = sub.add_parser("stats", help="print clique and circuit statistics")
    common(p_stats)
    p_stats.add_argument("--grid", action="store_true",
                         help="also print the label placement grid")
    p_stats.set_defaults(func=cmd_stats)

    p_verify = sub.add_parser("verify", help="run construction and circuit checks")
    common(p_verify)
    p_verify.add_argument("--out", help="schedule file to cross-check, if any")
    p_verify.set_defaults(func=cmd_verify)

    p_est = sub.add_parser("estimate", help="estimate the energy of a state")
    common(p_est, orbitals_required=False)
    p_est.add_argument("--hamiltonian", required=True, help="Hamiltonian JSON file")
    p_est.add_argument("--state", default="random:0",
                       help="random:<seed>, basis:<bits>, or an amplitude file")
    p_est.add_argument("--shots", type=int, default=0, help="0 for exact estimation")
    p_est.add_argument("--seed", type=int, default=0, help="sampling seed")
    p_est.set_defaults(func=cmd_estimate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "orbitals", None) is not None and args.orbitals < 2:
        build_parser().error("--orbitals must be at least 2")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
