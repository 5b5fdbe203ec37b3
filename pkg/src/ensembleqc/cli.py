"""Command-line front end for reproducible batch runs.

Subcommands: ``truth-table``, ``blockade-sweep``, ``compile``, ``simulate``,
``fidelity``.  Global flags: ``--config <path.json>``, ``--json``,
``--seed <u64>``, ``--out <dir>``.  Exit codes: 0 all embedded verifications
pass, 1 a verification failed, 2 usage or parse error.

Every command is deterministic given the config and seed; reports embed a
hash of the resolved configuration.  Numeric output uses 12 significant
digits so verification tolerances stay visible in logs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import compiler, decoherence, dynamics, gates, presets, simulator
from .physical import PhysicalParams, check_interference_condition, derive_couplings

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2

_FMT = "{:.12g}"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep, either an explicit value list or a linear grid."""

    parameter: str
    values: tuple[float, ...]

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepSpec":
        parameter = raw.get("parameter")
        if not isinstance(parameter, str) or not parameter:
            raise ConfigError("sweep needs a 'parameter' name")
        if "values" in raw:
            values = tuple(float(v) for v in raw["values"])
            if not values:
                raise ConfigError("sweep 'values' must be nonempty")
        else:
            try:
                lo, hi, steps = float(raw["min"]), float(raw["max"]), int(raw["steps"])
            except KeyError as missing:
                raise ConfigError(f"sweep is missing {missing}") from None
            if steps < 1:
                raise ConfigError("sweep steps must be >= 1")
            values = tuple(np.linspace(lo, hi, steps).tolist())
        return cls(parameter=parameter, values=values)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    physical_params: PhysicalParams
    decoherence_params: decoherence.DecoherenceParams
    sweep: SweepSpec | None
    output_dir: str | None
    seed: int

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "physical_params": json.loads(self.physical_params.to_json()),
            "decoherence_params": {
                "gamma_atomic": self.decoherence_params.gamma_atomic,
                "gamma_cavity": self.decoherence_params.gamma_cavity,
                "delta": self.decoherence_params.delta,
            },
            "sweep": (
                {"parameter": self.sweep.parameter, "values": list(self.sweep.values)}
                if self.sweep
                else None
            ),
            "output_dir": self.output_dir,
            "seed": self.seed,
        }

    def hash(self) -> str:
        canonical = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


_SWEEPABLE = {"pi_to_s_ratio", "gamma_atomic", "gamma_cavity", "time"}


def default_config(seed: int = 0) -> ScenarioConfig:
    """Built-in reference scenario with the canonical blockade-ratio grid."""
    return ScenarioConfig(
        scenario="reference",
        physical_params=presets.reference_params(),
        decoherence_params=presets.reference_decoherence(),
        sweep=SweepSpec(
            parameter="pi_to_s_ratio",
            values=(0.0, presets.SQRT3, 10.0, 100.0),
        ),
        output_dir=None,
        seed=seed,
    )


def load_config(path: str | None, seed_override: int | None, out_override: str | None) -> ScenarioConfig:
    if path is None:
        base = default_config()
        raw: dict = {}
    else:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        base = default_config()
    params = base.physical_params
    if "physical_params" in raw:
        params = PhysicalParams.from_json(json.dumps(raw["physical_params"]))
    deco = base.decoherence_params
    if "decoherence_params" in raw:
        d = raw["decoherence_params"]
        deco = decoherence.DecoherenceParams(
            gamma_atomic=float(d["gamma_atomic"]),
            gamma_cavity=float(d["gamma_cavity"]),
            delta=float(d["delta"]),
        )
    sweep = base.sweep
    if "sweep" in raw:
        sweep = SweepSpec.from_dict(raw["sweep"]) if raw["sweep"] is not None else None
    if sweep is not None and sweep.parameter not in _SWEEPABLE:
        raise ConfigError(
            f"unknown sweep parameter {sweep.parameter!r}; expected one of "
            f"{sorted(_SWEEPABLE)}"
        )
    seed = seed_override if seed_override is not None else int(raw.get("seed", base.seed))
    out = out_override if out_override is not None else raw.get("output_dir", base.output_dir)
    return ScenarioConfig(
        scenario=str(raw.get("scenario", base.scenario)),
        physical_params=params,
        decoherence_params=deco,
        sweep=sweep,
        output_dir=out,
        seed=seed,
    )


def _entry_polar(z: complex) -> str:
    return f"{abs(z):.12g}\u2220{np.degrees(np.angle(z)):.6f}\u00b0"


def _latex_matrix(m: np.ndarray) -> str:
    rows = []
    for row in m:
        cells = []
        for z in row:
            if abs(z) < 1e-14:
                cells.append("0")
            elif abs(z.imag) < 1e-14:
                cells.append(f"{z.real:.6g}")
            elif abs(z.real) < 1e-14:
                cells.append(f"{z.imag:.6g}i")
            else:
                cells.append(f"{z.real:.6g}{z.imag:+.6g}i")
        rows.append(" & ".join(cells))
    body = " \\\\\n".join(rows)
    return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"


def _emit(report: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        for line in lines:
            print(line)


def _out_dir(config: ScenarioConfig) -> Path | None:
    if config.output_dir is None:
        return None
    path = Path(config.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_truth_table(args, config: ScenarioConfig) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        couplings = derive_couplings(config.physical_params)
    diag_warnings = [str(w.message) for w in caught]
    interference = check_interference_condition(config.physical_params)
    resonance = couplings.resonance_residual()
    deviation_from_tuning = dynamics.blockade_condition_deviation(couplings)
    if deviation_from_tuning > 1e-9 and not args.force:
        print(
            "error: blockade tuning |Omega_1^(pi)| = sqrt(3)|S| violated "
            f"(relative deviation {deviation_from_tuning:.3e}); rerun with --force",
            file=sys.stderr,
        )
        return EXIT_VERIFICATION_FAILED
    gate = dynamics.extract_controlled_iswap(couplings, enforce_condition=False)
    m = gate.matrix

    tol = args.tol
    deviations = {
        "n0_diag": max(abs(m[0, 0]), abs(m[1, 1])),
        "n0_offdiag_vs_minus_i": max(abs(m[0, 1] + 1j), abs(m[1, 0] + 1j)),
        "n1_offdiag": max(abs(m[2, 3]), abs(m[3, 2])),
        "n1_diag_modulus": max(abs(abs(m[2, 2]) - 1.0), abs(abs(m[3, 3]) - 1.0)),
        "cross_sector": float(np.max(np.abs(m[:2, 2:])) + np.max(np.abs(m[2:, :2]))),
    }
    max_deviation = max(deviations.values())
    passed = max_deviation < tol

    report = {
        "command": "truth-table",
        "config_hash": config.hash(),
        "seed": config.seed,
        "matrix": gates.matrix_to_json(gate),
        "deviations": deviations,
        "max_deviation": max_deviation,
        "tolerance": tol,
        "pass": bool(passed),
        "resonance_residual": resonance,
        "interference_residuals": list(interference),
        "warnings": diag_warnings,
    }
    lines = [f"controlled-swap gate, config {config.hash()}"]
    for w in diag_warnings:
        lines.append(f"warning: {w}")
    basis = ["psi1 n=0", "psi2 n=0", "psi1 n=1", "psi2 n=1"]
    for i, label in enumerate(basis):
        row = "  ".join(_entry_polar(m[i, j]) for j in range(4))
        lines.append(f"{label:>10}: {row}")
    lines.append(f"resonance residual: {_FMT.format(resonance)} rad/s")
    lines.append(
        "interference residuals: "
        + ", ".join(_FMT.format(r) for r in interference)
        + " rad/s"
    )
    for name, value in deviations.items():
        lines.append(f"deviation {name}: {value:.3e}")
    lines.append(f"{'PASS' if passed else 'FAIL'} max deviation {max_deviation:.3e} (tol {tol:g})")
    if args.latex:
        lines.append(_latex_matrix(m))
    _emit(report, args.json, lines)
    out = _out_dir(config)
    if out is not None:
        (out / "truth_table.json").write_text(json.dumps(report, indent=2))
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def _blockade_row(base: PhysicalParams, ratio: float) -> tuple[float, float, float]:
    params = presets.rescale_pi_coupling(base, ratio)
    couplings = derive_couplings(params)
    err = dynamics.blockade_error(couplings)
    t_swap = np.pi / (2.0 * abs(couplings.s_coupling))
    c2 = abs(dynamics.sector_propagator(couplings, 1, t_swap)[1, 0])
    return ratio, err, float(c2)


def cmd_blockade_sweep(args, config: ScenarioConfig) -> int:
    if config.sweep is None or config.sweep.parameter != "pi_to_s_ratio":
        print(
            "error: blockade-sweep needs a sweep over 'pi_to_s_ratio'",
            file=sys.stderr,
        )
        return EXIT_USAGE
    ratios = config.sweep.values
    if any(r < 0 for r in ratios):
        print("error: blockade ratios must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    base = config.physical_params
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(lambda r: _blockade_row(base, r), ratios))
        else:
            rows = [_blockade_row(base, r) for r in ratios]
    lines = ["ratio,blockade_error,c2_at_swap_time"]
    for ratio, err, c2 in rows:
        lines.append(",".join(_FMT.format(v) for v in (ratio, err, c2)))
    text = "\n".join(lines) + "\n"
    out = _out_dir(config)
    if out is not None:
        (out / "blockade_sweep.csv").write_text(text)
        print(f"wrote {out / 'blockade_sweep.csv'}")
    if args.json:
        print(
            json.dumps(
                {
                    "command": "blockade-sweep",
                    "config_hash": config.hash(),
                    "rows": [list(r) for r in rows],
                },
                indent=2,
            )
        )
    else:
        print(text, end="")
    return EXIT_OK


def cmd_compile(args, config: ScenarioConfig) -> int:
    try:
        text = Path(args.circuit).read_text()
    except OSError as exc:
        print(f"error: cannot read circuit file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        circuit = compiler.parse_circuit(text)
    except compiler.CircuitParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.fixed_set:
        return _compile_fixed_set(args, config, circuit)

    program = compiler.lower_circuit(circuit)
    error = _logical_equivalence_error(program, circuit)
    passed = error < 1e-9
    report = {
        "command": "compile",
        "config_hash": config.hash(),
        "mode": "exact",
        "op_count": len(program.ops),
        "equivalence_error": error,
        "pass": bool(passed),
    }
    lines = [
        f"compiled {len(circuit)} gate(s) to {len(program.ops)} native op(s)",
        program.disassemble().rstrip("\n"),
        f"logical equivalence error: {error:.3e}",
        f"{'PASS' if passed else 'FAIL'}",
    ]
    _emit(report, args.json, lines)
    out = _out_dir(config)
    if out is not None:
        (out / "program.json").write_text(program.to_json())
        (out / "program.txt").write_text(program.disassemble())
        (out / "compile_report.json").write_text(json.dumps(report, indent=2))
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def _compile_fixed_set(args, config: ScenarioConfig, circuit) -> int:
    ops: list[compiler.NativeOp] = []
    phase = 1.0 + 0.0j
    worst = 0.0
    details = []
    max_target = 0
    for name, targets in circuit:
        max_target = max(max_target, *targets)
        if name == "CNOT":
            ops.append(compiler.NativeOp(compiler.CISWAP_KIND, tuple(targets)))
            continue
        result = compiler.approximate_fixed_set(
            gates.standard_gate(name), epsilon=args.epsilon, max_depth=args.max_depth
        )
        if not result.found:
            print(
                f"error: no fixed-set word within epsilon {args.epsilon:g} at "
                f"max depth {args.max_depth} for gate {name}; best distance "
                f"{result.distance:.3e}",
                file=sys.stderr,
            )
            return EXIT_VERIFICATION_FAILED
        ops.extend(
            compiler.NativeOp(op.kind, (targets[0],), op.angles)
            for op in result.program.ops
        )
        phase *= result.program.global_phase
        worst = max(worst, result.distance)
        details.append({"gate": name, "depth": result.depth, "distance": result.distance,
                        "word": list(result.word)})
    program = compiler.NativeProgram(
        qubit_count=max_target + 1, ops=ops, global_phase=phase
    )
    program.validate()
    passed = worst <= args.epsilon
    report = {
        "command": "compile",
        "config_hash": config.hash(),
        "mode": "fixed-set",
        "epsilon": args.epsilon,
        "max_depth": args.max_depth,
        "op_count": len(program.ops),
        "max_gate_distance": worst,
        "gates": details,
        "pass": bool(passed),
    }
    lines = [
        f"compiled {len(details)} single-qubit gate(s) via the fixed set",
        program.disassemble().rstrip("\n"),
        f"max per-gate distance: {worst:.3e} (epsilon {args.epsilon:g})",
        f"{'PASS' if passed else 'FAIL'}",
    ]
    _emit(report, args.json, lines)
    out = _out_dir(config)
    if out is not None:
        (out / "program.json").write_text(program.to_json())
        (out / "program.txt").write_text(program.disassemble())
        (out / "compile_report.json").write_text(json.dumps(report, indent=2))
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def _logical_circuit_matrix(circuit, qubit_count: int) -> np.ndarray:
    """Direct logical-space evaluation of a standard circuit (little-endian)."""
    dim = 2**qubit_count
    m = np.eye(dim, dtype=complex)
    for name, targets in circuit:
        g = np.eye(dim, dtype=complex)
        if name == "CNOT":
            c, t = targets
            g = np.zeros((dim, dim), dtype=complex)
            for i in range(dim):
                j = i ^ (1 << t) if (i >> c) & 1 else i
                g[j, i] = 1.0
        else:
            u = gates.standard_gate(name).matrix
            q = targets[0]
            g = np.zeros((dim, dim), dtype=complex)
            for i in range(dim):
                b = (i >> q) & 1
                for b_out in (0, 1):
                    j = (i & ~(1 << q)) | (b_out << q)
                    g[j, i] = u[b_out, b]
        m = g @ m
    return m


def _logical_equivalence_error(program: compiler.NativeProgram, circuit) -> float:
    """Max deviation between the simulated program and the direct logical
    evaluation, over all logical basis inputs, tracked phase included."""
    k = program.qubit_count
    target = _logical_circuit_matrix(circuit, k)
    worst = 0.0
    for idx in range(2**k):
        bits = "".join("1" if (idx >> j) & 1 else "0" for j in range(k))
        final, _ = simulator.run_program(program, bits)
        column = simulator.decode(final)
        worst = max(worst, float(np.max(np.abs(column - target[:, idx]))))
    return worst


def cmd_simulate(args, config: ScenarioConfig) -> int:
    if (args.program is None) == (args.circuit is None):
        print("error: pass exactly one of --program or --circuit", file=sys.stderr)
        return EXIT_USAGE
    if args.program is not None:
        try:
            program = compiler.NativeProgram.from_json(Path(args.program).read_text())
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            print(f"error: cannot load program: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        try:
            circuit = compiler.parse_circuit(Path(args.circuit).read_text())
        except (OSError, compiler.CircuitParseError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        program = compiler.lower_circuit(circuit)
    initial = args.initial if args.initial is not None else "0" * program.qubit_count
    if len(initial) != program.qubit_count or any(b not in "01" for b in initial):
        print(
            f"error: initial bitstring must have {program.qubit_count} bits over 0/1",
            file=sys.stderr,
        )
        return EXIT_USAGE

    state = simulator.encode_basis(initial)
    max_leak = simulator.leakage(state)
    trace_lines = []
    for i, op in enumerate(program.ops):
        state = simulator.apply_op(state, op)
        leak = simulator.leakage(state)
        max_leak = max(max_leak, leak)
        if args.trace:
            trace_lines.append(f"op {i:3d} {op.format():<28} leakage {leak:.3e}")
    state = simulator.PhysicalState(
        amplitudes=state.amplitudes * program.global_phase,
        qubit_count=state.qubit_count,
    )
    norm_defect = abs(state.norm() - 1.0)
    passed = max_leak < 1e-10 and norm_defect < 1e-10

    out = _out_dir(config)
    state_ref = None
    if out is not None:
        state_ref = str(out / "state.json")
        (out / "state.json").write_text(json.dumps(simulator.state_to_json(state)))
    report = {
        "command": "simulate",
        "config_hash": config.hash(),
        "seed": config.seed,
        "stats": {
            "op_count": len(program.ops),
            "max_leakage": max_leak,
            "norm_defect": norm_defect,
            "global_phase": [program.global_phase.real, program.global_phase.imag],
        },
        "final_state_ref": state_ref,
        "pass": bool(passed),
    }
    lines = trace_lines + [
        f"ran {len(program.ops)} op(s) on |{initial}>",
        f"max leakage: {max_leak:.3e}",
        f"norm defect: {norm_defect:.3e}",
        f"{'PASS' if passed else 'FAIL'}",
    ]
    if state_ref:
        lines.append(f"state written to {state_ref}")
    _emit(report, args.json, lines)
    if out is not None:
        (out / "run_report.json").write_text(json.dumps(report, indent=2))
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def cmd_fidelity(args, config: ScenarioConfig) -> int:
    deco = config.decoherence_params
    couplings = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        couplings = derive_couplings(config.physical_params)
    omega_sigma = abs(couplings.omega_cap_sigma)
    t_gate = decoherence.gate_time(config.physical_params.n_atoms_1, omega_sigma)

    sweep = config.sweep
    if sweep is None or sweep.parameter == "pi_to_s_ratio":
        boundary_gamma = decoherence.FAULT_TOLERANCE_BUDGET / (2.0 * t_gate)
        sweep = SweepSpec(
            parameter="gamma_atomic",
            values=tuple(np.linspace(0.0, 2.0 * boundary_gamma, 21).tolist()),
        )

    rows = []
    for v in sweep.values:
        gamma_a, gamma_c, t = deco.gamma_atomic, deco.gamma_cavity, t_gate
        if sweep.parameter == "gamma_atomic":
            gamma_a = v
        elif sweep.parameter == "gamma_cavity":
            gamma_c = v
        elif sweep.parameter == "time":
            t = v
        else:
            print(f"error: fidelity cannot sweep {sweep.parameter!r}", file=sys.stderr)
            return EXIT_USAGE
        d = decoherence.DecoherenceParams(
            gamma_atomic=gamma_a, gamma_cavity=gamma_c, delta=deco.delta
        )
        rows.append(
            (
                gamma_a,
                gamma_c,
                deco.delta,
                t,
                decoherence.iswap_fidelity(d, t),
                decoherence.fault_tolerance_margin(d, t),
            )
        )

    lines = ["gamma_atomic,gamma_cavity,delta,t,fidelity,margin"]
    for row in rows:
        lines.append(",".join(_FMT.format(v) for v in row))
    frontier = [
        i
        for i in range(1, len(rows))
        if (rows[i - 1][5] >= 0.0) != (rows[i][5] >= 0.0)
    ]
    text = "\n".join(lines) + "\n"
    out = _out_dir(config)
    if out is not None:
        (out / "fidelity_sweep.csv").write_text(text)
        print(f"wrote {out / 'fidelity_sweep.csv'}")
    if args.json:
        print(
            json.dumps(
                {
                    "command": "fidelity",
                    "config_hash": config.hash(),
                    "gate_time": t_gate,
                    "omega_sigma": omega_sigma,
                    "rows": [list(r) for r in rows],
                    "frontier_rows": frontier,
                },
                indent=2,
            )
        )
    else:
        print(text, end="")
        print(f"# gate time {_FMT.format(t_gate)} s with exchange rate {_FMT.format(omega_sigma)} rad/s")
        for i in frontier:
            print(f"# error-budget frontier between rows {i - 1} and {i}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensembleqc",
        description="Simulator and compiler for the two-ensemble-per-qubit swap architecture.",
    )
    parser.add_argument("--config", help="scenario config JSON")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--seed", type=int, default=None, help="random seed (recorded in reports)")
    parser.add_argument("--out", default=None, help="directory for output files")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("truth-table", help="extract and verify the controlled-swap gate")
    p.add_argument("--force", action="store_true", help="extract even if the blockade tuning is off")
    p.add_argument("--tol", type=float, default=1e-10, help="structure tolerance")
    p.add_argument("--latex", action="store_true", help="also render the matrix as LaTeX")
    p.set_defaults(func=cmd_truth_table)

    p = sub.add_parser("blockade-sweep", help="blockade error vs pi-coupling ratio")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (deterministic output)")
    p.set_defaults(func=cmd_blockade_sweep)

    p = sub.add_parser("compile", help="lower a circuit file to native operations")
    p.add_argument("circuit", help="circuit file: one 'NAME target [target2]' per line")
    p.add_argument("--fixed-set", action="store_true", help="approximate with the fixed-angle gates")
    p.add_argument("--epsilon", type=float, default=1e-9, help="fixed-set target distance")
    p.add_argument("--max-depth", type=int, default=8, help="fixed-set search depth limit")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="run a native program or circuit file")
    p.add_argument("--program", help="native program JSON")
    p.add_argument("--circuit", help="circuit file to lower and run")
    p.add_argument("--initial", help="initial logical bitstring (default all zeros)")
    p.add_argument("--trace", action="store_true", help="stream per-op leakage")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fidelity", help="fidelity and error-budget sweep")
    p.set_defaults(func=cmd_fidelity)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config, args.seed, args.out)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args, config)


def entry_point() -> None:  # pragma: no cover - console-script shim
    sys.exit(main())
