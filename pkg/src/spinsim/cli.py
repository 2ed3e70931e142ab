"""Command line driver: input description file in, artifacts out.

``spinsim run input.txt`` parses the description, builds the circuits,
executes them on the statevector backend and writes ``results.csv``,
``results.svg`` and ``manifest.json`` into the output directory.  The
directory comes from ``--out``, else the ``SPINSIM_OUTPUT_DIR``
environment variable, else the file's ``output_dir`` key.

Exit codes: 0 success, 2 bad input description, 3 recognized but
unsupported feature, 4 system too large for dense simulation, 5 I/O
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .backend import (
    estimate_with_sigma,
    expectation,
    product_state,
    run_statevector,
    sample_counts,
)
from .config import (
    SimulationConfig,
    build_hamiltonian,
    parse_input,
    serialize,
    with_overrides,
)
from .errors import ConfigError, TooLargeError, UnsupportedFeatureError
from .hamiltonian import AXES, HeisenbergHamiltonian, PauliTerm, snapshot
from .ir import Program, export_text, h as h_gate, lower_to_native, rx as rx_gate
from .observables import (
    ResultSeries,
    energy_observable,
    excitation_displacement_observable,
    site_magnetization_observable,
    write_csv,
    write_manifest,
    write_plot,
)
from .optimizer import optimize
from .oracle import evolve_exact, evolve_imaginary_exact
from .qite import QiteParams, run_qite
from .trotter import TrotterParams, build_evolution_program

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSUPPORTED = 3
EXIT_TOO_LARGE = 4
EXIT_IO = 5

OUTPUT_DIR_ENV = "SPINSIM_OUTPUT_DIR"


def _observable_terms(cfg: SimulationConfig, hamiltonian, t: float) -> list[PauliTerm]:
    name = cfg.observable
    if name == "excitation-displacement":
        return excitation_displacement_observable(cfg.num_spins)
    if name == "energy":
        return energy_observable(hamiltonian, t)
    axis = name[len("site-magnetization(")]
    return site_magnetization_observable(cfg.num_spins, axis)


def _derived_int_seed(base: int, *salts: int) -> int:
    return int(np.random.SeedSequence([base, *salts]).generate_state(1)[0])


def _sampled_estimate(
    program: Program,
    terms: list[PauliTerm],
    shots: int,
    base_seed: int,
    step_index: int,
) -> tuple[float, float]:
    """Measure a single-axis-per-term observable by sampling.

    Terms are grouped by axis; x and y groups get basis-change gates
    appended before measurement so every group reads out in the z
    basis.  Each group is sampled with its own ``shots`` draws.
    """
    constant = sum(t.coefficient for t in terms if not t.factors)
    groups: dict[str, list[PauliTerm]] = {}
    for term in terms:
        if not term.factors:
            continue
        axes_used = {axis for _, axis in term.factors}
        if len(axes_used) != 1:
            raise UnsupportedFeatureError(
                "sampled estimation needs single-axis terms; use shots: 0"
            )
        groups.setdefault(axes_used.pop(), []).append(term)

    value = constant
    variance = 0.0
    for axis_index, axis in enumerate(AXES):
        group = groups.get(axis)
        if not group:
            continue
        gates = list(program.gates)
        sites = sorted({site for term in group for site, _ in term.factors})
        for site in sites:
            if axis == "x":
                gates.append(h_gate(site - 1))
            elif axis == "y":
                gates.append(rx_gate(math.pi / 2, site - 1))
        measured = Program(program.num_qubits, tuple(gates), measured=True)
        state = run_statevector(measured)
        seed = _derived_int_seed(base_seed, step_index, axis_index)
        counts = sample_counts(state, shots, seed)
        z_terms = [
            PauliTerm(t.coefficient, tuple((site, "z") for site, _ in t.factors))
            for t in group
        ]
        mean, sigma = estimate_with_sigma(counts, z_terms)
        value += mean
        variance += sigma**2
    return value, float(np.sqrt(variance))


def _finalize_program(program: Program, cfg: SimulationConfig) -> Program:
    program = lower_to_native(program)
    if cfg.optimizer_level == "peephole":
        program = optimize(program)
    if cfg.shots > 0:
        program = Program(program.num_qubits, program.gates, measured=True)
    return program


def _run_real_time(cfg: SimulationConfig, hamiltonian: HeisenbergHamiltonian, seed: int):
    params = TrotterParams(cfg.total_time, cfg.num_steps)
    last_step = cfg.num_steps if cfg.total_time > 0.0 else 0
    points = []
    programs = []
    for k in range(last_step + 1):
        t_k = k * params.dt
        program = build_evolution_program(hamiltonian, params, k, cfg.initial_state)
        program = _finalize_program(program, cfg)
        programs.append(program)
        if cfg.backend_mode != "QS":
            continue
        terms = _observable_terms(cfg, hamiltonian, t_k)
        if cfg.shots == 0:
            value = expectation(run_statevector(program), terms)
            points.append((t_k, value, None))
        else:
            value, sigma = _sampled_estimate(program, terms, cfg.shots, seed, k)
            points.append((t_k, value, sigma))
    return points, programs, params


def _run_imaginary_time(cfg: SimulationConfig, hamiltonian: HeisenbergHamiltonian, seed: int):
    dbeta = cfg.total_time / cfg.num_steps
    params = QiteParams(
        dbeta=dbeta, num_steps=cfg.num_steps, shots=cfg.shots, seed=seed
    )
    reports = run_qite(hamiltonian, params, cfg.initial_state)
    points = [(r.step * dbeta, r.energy, None) for r in reports]
    programs = [_finalize_program(r.program, cfg) for r in reports]
    return points, programs, params


def _ground_truth_points(cfg: SimulationConfig, hamiltonian, points):
    initial = product_state(cfg.initial_state)
    truth = []
    if cfg.mode == "real-time":
        for k, (t_k, _, _) in enumerate(points):
            substeps = max(10 * k, 1)
            state = evolve_exact(hamiltonian, t_k, initial, substeps=substeps)
            terms = _observable_terms(cfg, hamiltonian, t_k)
            truth.append((t_k, expectation(state, terms), None))
    else:
        terms = snapshot(hamiltonian, 0.0)
        for beta, _, _ in points:
            if beta == 0.0:
                truth.append((beta, expectation(initial, terms), None))
            else:
                _, energy = evolve_imaginary_exact(terms, beta, initial)
                truth.append((beta, energy, None))
    return truth


def run_simulation(args: argparse.Namespace) -> int:
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        cfg = parse_input(text)
        cfg = with_overrides(cfg, seed=args.seed, shots=args.shots)
    except ConfigError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.constant_depth:
        print(
            "error: constant_depth circuit synthesis is not implemented; "
            "set constant_depth: False",
            file=sys.stderr,
        )
        return EXIT_UNSUPPORTED

    out_dir = args.out or os.environ.get(OUTPUT_DIR_ENV) or cfg.output_dir
    out_path = Path(out_dir)
    seed = cfg.rng_seed if cfg.rng_seed is not None else 0
    config_text = serialize(cfg)
    config_hash = hashlib.sha256(config_text.encode()).hexdigest()[:12]

    try:
        hamiltonian = build_hamiltonian(cfg)
        if cfg.mode == "real-time":
            points, programs, _ = _run_real_time(cfg, hamiltonian, seed)
            axis_label = "t"
            observable_name = cfg.observable
        else:
            points, programs, _ = _run_imaginary_time(cfg, hamiltonian, seed)
            axis_label = "beta"
            observable_name = "energy"

        out_path.mkdir(parents=True, exist_ok=True)
        written: list[str] = []

        export_programs = args.export or cfg.backend_mode == "export-only"
        if export_programs:
            circuit_dir = out_path / "circuits"
            circuit_dir.mkdir(exist_ok=True)
            for k, program in enumerate(programs):
                name = f"circuits/step_{k:04d}.qasm"
                (out_path / name).write_text(export_text(program), encoding="utf-8")
                written.append(name)

        if cfg.backend_mode == "QS":
            metadata = {
                "observable": observable_name,
                "mode": cfg.mode,
                "seed": str(seed),
                "config": config_hash,
            }
            series = ResultSeries(axis_label, tuple(points), metadata)
            extra_columns = None
            if args.ground_truth:
                truth = _ground_truth_points(cfg, hamiltonian, points)
                extra_columns = {"ground_truth": [v for _, v, _ in truth]}
            write_csv(series, out_path / "results.csv", extra_columns=extra_columns)
            write_plot(series, out_path / "results.svg")
            written += ["results.csv", "results.svg"]

        write_manifest(
            out_path / "manifest.json",
            config_text=config_text,
            seed=cfg.rng_seed,
            shots=cfg.shots,
            mode=cfg.mode,
            observable=observable_name,
            output_files=written,
            version=__version__,
        )
        written.append("manifest.json")
    except UnsupportedFeatureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except OSError as exc:
        print(f"error: cannot write artifacts: {exc}", file=sys.stderr)
        return EXIT_IO

    for name in written:
        print(f"wrote {out_path / name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinsim",
        description="Simulate spin-chain dynamics from a plain-text description.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one simulation described by an input file")
    run.add_argument("input", help="path to the input description file")
    run.add_argument("--out", help="output directory (overrides file and environment)")
    run.add_argument("--seed", type=int, help="override the file's rng_seed")
    run.add_argument("--shots", type=int, help="override the file's shots")
    run.add_argument(
        "--export", action="store_true", help="also write every circuit as text"
    )
    run.add_argument(
        "--ground-truth",
        action="store_true",
        help="add an exact reference series computed by dense diagonalization",
    )
    run.set_defaults(func=run_simulation)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
