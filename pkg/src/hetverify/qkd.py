"""Encoding/decoding basis experiments for key-distribution channels.

A sender encodes a computational state in some basis, the receiver
decodes in (possibly) another, and the fidelity of the result against
the original state scores how well the two frames match.  Estimation
runs in one of three modes: "simple" (no detection stage) or a
heterodyne stage with a chosen rotation angle; zeta = pi/3 gives the
best matched-vs-mismatched separation, zeta = pi/2 is reported but
excluded from verdicts.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, NoiseModel, cu3, u3, x
from .metrics import fidelity
from .protocols import HeterodyneSetting, heterodyne_stage
from .states import StateVector
from .tomography import (
    reconstruct_multi_qubit,
    reconstruct_single_qubit,
    tomography_sweep,
)

BALANCED_QKD_ZETA = math.pi / 3
SINGLE_BASES = ("z", "x", "y")
BELL_LABELS = ("b00", "b01", "b10", "b11")

SINGLE_PAIR_ORDER = [
    (e, d) for e in SINGLE_BASES for d in SINGLE_BASES
]
BELL_PAIR_ORDER = [("b00", d) for d in BELL_LABELS]

# Encoders as U3 angle triples: z is the identity frame, x the Hadamard,
# y the frame mapping |0> to (|0> + i|1>)/sqrt(2).
_ENCODE_ANGLES = {
    "z": None,
    "x": (math.pi / 2, 0.0, math.pi),
    "y": (math.pi / 2, math.pi / 2, math.pi),
}

DEFAULT_THRESHOLDS = {
    ("single", "pi/3"): 0.8,
    ("single", "simple"): 0.9,
    ("bell", "pi/3"): 0.7,
    ("bell", "simple"): 0.25,
}


def _dagger_angles(angles) -> tuple:
    theta, phi, lam = angles
    return (-theta, -lam, -phi)


def _single_encode_gates(basis: str, qubit: int):
    if basis not in SINGLE_BASES:
        raise ValueError(f"unknown basis {basis!r}")
    angles = _ENCODE_ANGLES[basis]
    return [] if angles is None else [u3(qubit, *angles)]


def _single_decode_gates(basis: str, qubit: int):
    angles = _ENCODE_ANGLES[basis]
    return [] if angles is None else [u3(qubit, *_dagger_angles(angles))]


def mode_label(mode) -> str:
    """Canonical column label: 'simple' or a symbolic zeta fraction."""
    if mode == "simple":
        return "simple"
    zeta = float(mode)
    for num, den in ((1, 3), (1, 2), (1, 4), (1, 6), (2, 3)):
        if abs(zeta - num * math.pi / den) < 1e-12:
            return f"pi/{den}" if num == 1 else f"{num}pi/{den}"
    return f"{zeta:.6f}"


def single_qkd_circuit(initial, encode: str, decode: str, mode) -> Circuit:
    """System qubit 0; ancilla 1 present only in heterodyne modes."""
    prep = [] if initial in ("0", 0) else [x(0)]
    gates = prep + _single_encode_gates(encode, 0) + _single_decode_gates(decode, 0)
    if mode == "simple":
        return Circuit(1, gates)
    circuit = Circuit(2, gates, ancilla=1)
    return heterodyne_stage(circuit, HeterodyneSetting(float(mode)))


_HADAMARD = (math.pi / 2, 0.0, math.pi)
_PAULI_Z = (0.0, 0.0, math.pi)
_CX = (math.pi, 0.0, math.pi)


def _bell_encode_gates(label: str):
    """Entangler for b00 followed by the Pauli frame of the label."""
    if label not in BELL_LABELS:
        raise ValueError(f"unknown Bell label {label!r}")
    a, b = int(label[1]), int(label[2])
    gates = [u3(0, *_HADAMARD), cu3(0, 1, *_CX)]
    if a:
        gates.append(u3(0, *_PAULI_Z))
    if b:
        gates.append(x(1))
    return gates


def _bell_decode_gates(label: str):
    """Inverse of the encoder: undo the Pauli frame, then disentangle."""
    a, b = int(label[1]), int(label[2])
    gates = []
    if b:
        gates.append(x(1))
    if a:
        gates.append(u3(0, *_PAULI_Z))
    gates += [cu3(0, 1, *_CX), u3(0, *_HADAMARD)]
    return gates


def bell_qkd_circuit(encode: str, decode: str, mode) -> Circuit:
    """Two system qubits starting in |00>; ancilla 2 in heterodyne modes."""
    gates = _bell_encode_gates(encode) + _bell_decode_gates(decode)
    if mode == "simple":
        return Circuit(2, gates)
    circuit = Circuit(3, gates, ancilla=2)
    return heterodyne_stage(circuit, HeterodyneSetting(float(mode)))


def qkd_single_run(initial, encode: str, decode: str, mode,
                   shots: int = None, seed: int = 0,
                   noise: NoiseModel = None) -> float:
    """Fidelity of the decoded single qubit against the initial state."""
    circuit = single_qkd_circuit(initial, encode, decode, mode)
    expectations = tomography_sweep(circuit, measured=[0], shots=shots,
                                    seed=seed, noise=noise)
    reconstruction = reconstruct_single_qubit(expectations)
    target = StateVector.computational("1" if initial in ("1", 1) else "0")
    return fidelity(reconstruction, target.density())


def qkd_bell_run(encode: str, decode: str, mode, shots: int = None,
                 seed: int = 0, noise: NoiseModel = None) -> float:
    """Fidelity of the decoded two-qubit register against |00>."""
    circuit = bell_qkd_circuit(encode, decode, mode)
    expectations = tomography_sweep(circuit, measured=[0, 1], shots=shots,
                                    seed=seed, noise=noise)
    reconstruction = reconstruct_multi_qubit(expectations, 2)
    return fidelity(reconstruction, StateVector.computational("00").density())


@dataclass
class QkdTable:
    """Fidelity per (encode, decode) pair and estimation mode."""

    kind: str                      # "single" | "bell"
    initial: str
    modes: list                    # mode labels, column order
    rows: dict = field(default_factory=dict)  # (enc, dec) -> {label: fidelity}

    @property
    def pair_order(self) -> list:
        return SINGLE_PAIR_ORDER if self.kind == "single" else BELL_PAIR_ORDER

    def value(self, pair, label: str) -> float:
        return self.rows[pair][label]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "initial": self.initial,
            "modes": list(self.modes),
            "rows": {f"{e}-{d}": vals for (e, d), vals in self.rows.items()},
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["encode-decode"] + list(self.modes))
            for pair in self.pair_order:
                row = self.rows[pair]
                writer.writerow([f"{pair[0]}-{pair[1]}"]
                                + [f"{row[m]:.6f}" for m in self.modes])


def qkd_table(initial="0", modes=(BALANCED_QKD_ZETA, math.pi / 2, "simple"),
              shots: int = None, seed: int = 0, noise: NoiseModel = None,
              kind: str = "single") -> QkdTable:
    """Evaluate every encode/decode pair in every requested mode.

    Each cell gets its own child seed, so the table is reproducible and
    cells are independent.
    """
    if kind not in ("single", "bell"):
        raise ValueError(f"kind must be 'single' or 'bell', got {kind!r}")
    pairs = SINGLE_PAIR_ORDER if kind == "single" else BELL_PAIR_ORDER
    labels = [mode_label(m) for m in modes]
    table = QkdTable(kind, str(initial), labels)
    children = iter(np.random.SeedSequence(seed).spawn(len(pairs) * len(modes)))
    for pair in pairs:
        row = {}
        for mode, label in zip(modes, labels):
            child = next(children)
            if kind == "single":
                row[label] = qkd_single_run(initial, *pair, mode, shots=shots,
                                            seed=child, noise=noise)
            else:
                row[label] = qkd_bell_run(*pair, mode, shots=shots,
                                          seed=child, noise=noise)
        table.rows[pair] = row
    return table


def threshold_verdict(table: QkdTable, mode, threshold: float = None) -> dict:
    """Accept/reject each pair by comparing one mode column to a threshold."""
    label = mode_label(mode)
    if label not in table.modes:
        raise ValueError(f"table has no column for mode {label!r}")
    if threshold is None:
        try:
            threshold = DEFAULT_THRESHOLDS[(table.kind, label)]
        except KeyError:
            raise ValueError(f"no default threshold for {table.kind}/{label}; "
                             "pass one explicitly") from None
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    return {
        pair: ("accept" if table.rows[pair][label] >= threshold else "reject")
        for pair in table.pair_order
    }
