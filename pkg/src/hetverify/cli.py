"""Command-line entry point: configure an experiment, run it, emit reports.

Exit codes are a stable contract: 0 success/accept, 1 usage error,
2 verdict reject, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .circuits import NoiseModel
from .protocols import (
    CopyPlan,
    HeterodyneSetting,
    protocol1_run,
    protocol2_run,
    protocol3_verify,
)
from .qkd import BALANCED_QKD_ZETA, mode_label, qkd_table, threshold_verdict
from .reference_data import hardware_reference
from .tomography import reconstruct_multi_qubit, tomography_sweep
from .circuits import Circuit

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REJECT = 2
EXIT_RUNTIME = 3

_ANGLE_RE = re.compile(r"^(-?)(\d*)pi(?:/(\d+))?$")


class UsageError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Angles as decimals or symbolic pi fractions: 'pi/3', '2pi/3', '-pi'."""
    text = text.strip().lower().replace(" ", "")
    match = _ANGLE_RE.match(text)
    if match:
        sign = -1.0 if match.group(1) else 1.0
        numerator = float(match.group(2) or 1)
        denominator = float(match.group(3) or 1)
        return sign * numerator * math.pi / denominator
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def format_angle(value: float) -> str:
    """Symbolic form when the angle is a simple pi fraction."""
    for num in range(-4, 5):
        for den in (1, 2, 3, 4, 6):
            if num and math.gcd(abs(num), den) == 1 \
                    and abs(value - num * math.pi / den) < 1e-12:
                frac = "pi" if abs(num) == 1 else f"{abs(num)}pi"
                sign = "-" if num < 0 else ""
                return f"{sign}{frac}/{den}" if den > 1 else f"{sign}{frac}"
    if value == 0:
        return "0"
    return repr(value)


@dataclass
class ExperimentConfig:
    command: str
    parameters: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        params = dict(self.parameters)
        for key in ("zeta",):
            if key in params and isinstance(params[key], float):
                params[key] = format_angle(params[key])
        return {"command": self.command, "parameters": params}


@dataclass
class ReportBundle:
    config: ExperimentConfig
    payload: dict
    emitted_files: list
    exit_code: int


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="hetverify",
                     description="Heterodyne-style state verification experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, threshold=None, zeta="pi/2"):
        p.add_argument("--shots", type=int, default=8192,
                       help="shots per measurement setting (default 8192)")
        p.add_argument("--exact", action="store_true",
                       help="use exact probabilities instead of sampling")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--noise-1q", type=float, default=0.0,
                       help="depolarizing probability per single-qubit gate")
        p.add_argument("--noise-2q", type=float, default=0.0,
                       help="depolarizing probability per two-qubit gate")
        p.add_argument("--readout-flip", type=float, default=0.0,
                       help="per-bit readout flip probability")
        p.add_argument("--zeta", default=zeta,
                       help="detection rotation angle (e.g. 0, pi/3, pi/2)")
        p.add_argument("--output-dir", default=".",
                       help="directory for report files")
        if threshold is not None:
            p.add_argument("--threshold", type=float, default=threshold)

    p1 = sub.add_parser("protocol1", help="single-mode fidelity estimation")
    p1.add_argument("--initial", default="1",
                    help="'1' or 'alpha,beta' amplitude pair")
    p1.add_argument("--copies", type=int, nargs=2, default=(5, 5),
                    metavar=("N", "M"))
    common(p1)

    p2 = sub.add_parser("protocol2", help="multi-mode witness estimation")
    p2.add_argument("--initial", default="1100",
                    help="4-bit string such as 1100")
    p2.add_argument("--copies", type=int, nargs=2, default=(1, 1),
                    metavar=("N", "M"))
    common(p2)

    p3 = sub.add_parser("protocol3", help="threshold verification")
    p3.add_argument("--photons", type=int, default=2)
    p3.add_argument("--modes", type=int, default=4)
    common(p3, threshold=0.6)

    qs = sub.add_parser("qkd-single", help="single-qubit basis fidelity table")
    qs.add_argument("--initial", choices=["0", "1"], default="0")
    common(qs, threshold=0.8, zeta="pi/3")

    qb = sub.add_parser("qkd-bell", help="Bell-basis fidelity table")
    common(qb, threshold=0.7, zeta="pi/3")

    tm = sub.add_parser("tomography", help="reconstruct a circuit output")
    tm.add_argument("circuit", help="circuit description JSON file")
    common(tm)
    return parser


def parse_config(argv) -> ExperimentConfig:
    args = _build_parser().parse_args(argv)
    params = vars(args)
    command = params.pop("command")
    if "zeta" in params:
        params["zeta"] = parse_angle(str(params["zeta"]))
    for key in ("noise_1q", "noise_2q", "readout_flip"):
        if not 0.0 <= params.get(key, 0.0) <= 1.0:
            raise UsageError(f"--{key.replace('_', '-')} must be a probability")
    if "threshold" in params and not 0.0 <= params["threshold"] <= 1.0:
        raise UsageError("--threshold must be in [0, 1]")
    if "copies" in params:
        n, m = params["copies"]
        if n < 1 or m < 1:
            raise UsageError("--copies requires N >= 1 and M >= 1")
    if params.get("shots", 1) < 1:
        raise UsageError("--shots must be at least 1")
    if params.get("exact"):
        params["shots"] = None
    params.pop("exact", None)
    if command == "protocol1" and params["initial"] != "1":
        try:
            alpha, beta = (complex(v) for v in params["initial"].split(","))
        except ValueError:
            raise UsageError(
                "--initial must be '1' or 'alpha,beta'") from None
        params["initial"] = (alpha, beta)
    if command == "protocol2":
        if not re.fullmatch("[01]{4}", params["initial"]):
            raise UsageError("--initial must be a 4-bit string")
    if command == "protocol3" and not 1 <= params["photons"] <= params["modes"] <= 4:
        raise UsageError("need 1 <= photons <= modes <= 4")
    return ExperimentConfig(command, params)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as err:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise OSError(f"cannot write {path}: {err}") from err


def emit_plot_data(series, path) -> None:
    """Two-column fidelity-vs-copy table, fixed 6-decimal precision."""
    series = list(series)
    if not series:
        raise ValueError("plot series is empty")
    lines = [f"{int(index)} {value:.6f}" for index, value in series]
    _atomic_write(path, "\n".join(lines) + "\n")


def _noise_from(params) -> NoiseModel:
    return NoiseModel(params["noise_1q"], params["noise_2q"],
                      params["readout_flip"])


def run_and_report(config: ExperimentConfig) -> ReportBundle:
    """Dispatch a validated config, write its report files, and return
    the bundle with the process exit code."""
    params = config.parameters
    outdir = params.get("output_dir", ".")
    os.makedirs(outdir, exist_ok=True)
    noise = _noise_from(params)
    shots, seed = params.get("shots"), params.get("seed", 0)
    emitted = []
    exit_code = EXIT_OK

    if config.command == "protocol1":
        plan = CopyPlan(*params["copies"])
        report = protocol1_run(params["initial"], HeterodyneSetting(params["zeta"]),
                               plan, shots=shots, seed=seed, noise=noise)
        payload = report.to_json()
        series = [(i + 1, f) for i, f in enumerate(
            report.groups[0].copy_fidelities + report.groups[1].copy_fidelities)]
        plot_path = os.path.join(outdir, "fidelity_vs_copy.txt")
        emit_plot_data(series, plot_path)
        emitted.append(plot_path)
    elif config.command == "protocol2":
        plan = CopyPlan(*params["copies"])
        report = protocol2_run(list(params["initial"]),
                               HeterodyneSetting(params["zeta"]),
                               plan, shots=shots, seed=seed, noise=noise)
        payload = report.to_json()
    elif config.command == "protocol3":
        report = protocol3_verify(params["photons"], params["modes"],
                                  setting=HeterodyneSetting(params["zeta"]),
                                  threshold=params["threshold"],
                                  shots=shots, seed=seed, noise=noise)
        payload = report.to_json()
        if report.verdict == "reject":
            exit_code = EXIT_REJECT
    elif config.command in ("qkd-single", "qkd-bell"):
        kind = "single" if config.command == "qkd-single" else "bell"
        initial = params.get("initial", "00")
        table = qkd_table(initial=initial,
                          modes=(BALANCED_QKD_ZETA, math.pi / 2, "simple"),
                          shots=shots, seed=seed, noise=noise, kind=kind)
        verdicts = threshold_verdict(table, BALANCED_QKD_ZETA,
                                     params["threshold"])
        payload = {
            "table": table.to_json(),
            "verdicts": {f"{e}-{d}": v for (e, d), v in verdicts.items()},
            "verdict_mode": mode_label(BALANCED_QKD_ZETA),
        }
        csv_path = os.path.join(outdir, f"{config.command}_table.csv")
        table.write_csv(csv_path)
        emitted.append(csv_path)
    elif config.command == "tomography":
        circuit = Circuit.load(params["circuit"])
        expectations = tomography_sweep(circuit, shots=shots, seed=seed,
                                        noise=noise)
        rho = reconstruct_multi_qubit(expectations, len(circuit.system_qubits))
        payload = {"expectations": expectations,
                   "reconstruction": rho.to_json()}
    else:  # pragma: no cover - parser restricts commands
        raise UsageError(f"unknown command {config.command!r}")

    reference = hardware_reference(config.command,
                                   str(params.get("initial", "0")))
    bundle_json = {
        "config": config.to_json(),
        "result": payload,
        "hardware_reference": reference,
        "provenance": {
            "version": __version__,
            "seed": seed,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        },
    }
    report_path = os.path.join(outdir, f"{config.command.replace('-', '_')}_report.json")
    _atomic_write(report_path, json.dumps(bundle_json, indent=2))
    emitted.append(report_path)
    bundle_json["emitted_files"] = emitted
    return ReportBundle(config, bundle_json, emitted, exit_code)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        bundle = run_and_report(config)
    except (UsageError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"runtime failure: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    for path in bundle.emitted_files:
        print(f"wrote {path}")
    if bundle.exit_code == EXIT_REJECT:
        print("verdict: reject")
    return bundle.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
