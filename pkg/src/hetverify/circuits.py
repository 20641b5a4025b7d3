"""Gate model, exact simulation backends, measurement, and shot sampling.

Supported gates are X, the three-angle single-qubit rotation U3, and its
controlled version CU3 -- enough to express every circuit the protocols
build.  Systems stay small (at most 6 qubits), so both backends work
with dense matrices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .states import (
    DensityMatrix,
    ProbabilityDistribution,
    StateVector,
    index_to_bits,
)

MAX_QUBITS = 6

_I2 = np.eye(2, dtype=complex)
_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# Maps the +1 eigenstate of Y, (|0> + i|1>)/sqrt(2), onto |0>.
_Y_ROT = _H @ np.diag([1, -1j]).astype(complex)

BASIS_ROTATIONS = {"X": _H, "Y": _Y_ROT, "Z": _I2}


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """Three-angle single-qubit rotation in the hardware-standard form."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


@dataclass(frozen=True)
class Gate:
    kind: str                 # "x" | "u3" | "cu3"
    qubits: tuple             # (target,) or (control, target)
    angles: tuple = ()        # (theta, phi, lam) for u3/cu3

    def __post_init__(self):
        if self.kind not in ("x", "u3", "cu3"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        expected = 2 if self.kind == "cu3" else 1
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind} gate acts on {expected} qubit(s)")
        if self.kind == "cu3" and self.qubits[0] == self.qubits[1]:
            raise ValueError("control and target must differ")
        if self.kind != "x" and len(self.angles) != 3:
            raise ValueError(f"{self.kind} gate takes three angles")
        if any(not np.isfinite(a) for a in self.angles):
            raise ValueError("gate angles must be finite")

    def matrix_2x2(self) -> np.ndarray:
        """Local action on the target qubit."""
        return _X if self.kind == "x" else u3_matrix(*self.angles)


def x(qubit: int) -> Gate:
    return Gate("x", (qubit,))


def u3(qubit: int, theta: float, phi: float, lam: float) -> Gate:
    return Gate("u3", (qubit,), (theta, phi, lam))


def cu3(control: int, target: int, theta: float, phi: float, lam: float) -> Gate:
    return Gate("cu3", (control, target), (theta, phi, lam))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple = ()
    ancilla: int = None  # type: ignore[assignment]

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            if any(q < 0 or q >= self.num_qubits for q in gate.qubits):
                raise ValueError(f"gate {gate} out of range for {self.num_qubits} qubits")
        if self.ancilla is not None and not 0 <= self.ancilla < self.num_qubits:
            raise ValueError(f"ancilla index {self.ancilla} out of range")

    def appended(self, *gates: Gate) -> "Circuit":
        return replace(self, gates=self.gates + tuple(gates))

    @property
    def system_qubits(self) -> tuple:
        return tuple(q for q in range(self.num_qubits) if q != self.ancilla)

    def to_json(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "gates": [
                {"kind": g.kind, "qubits": list(g.qubits), "angles": list(g.angles)}
                for g in self.gates
            ],
            "ancilla": self.ancilla,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Circuit":
        gates = tuple(
            Gate(g["kind"], tuple(g["qubits"]), tuple(g.get("angles", ())))
            for g in data["gates"]
        )
        return cls(data["num_qubits"], gates, data.get("ancilla"))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)

    @classmethod
    def load(cls, path) -> "Circuit":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _embed(ops: dict, num_qubits: int) -> np.ndarray:
    """Kronecker chain with the given 2x2 operators at their qubit slots."""
    full = np.array([[1.0 + 0j]])
    for q in range(num_qubits):
        full = np.kron(full, ops.get(q, _I2))
    return full


def gate_unitary(gate: Gate, num_qubits: int) -> np.ndarray:
    """Full 2^n x 2^n unitary of a gate embedded in the register."""
    if gate.kind == "cu3":
        control, target = gate.qubits
        return _embed({control: _P0}, num_qubits) + _embed(
            {control: _P1, target: gate.matrix_2x2()}, num_qubits
        )
    return _embed({gate.qubits[-1]: gate.matrix_2x2()}, num_qubits)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    return StateVector(state.num_qubits,
                       gate_unitary(gate, state.num_qubits) @ state.amplitudes)


def run_statevector(circuit: Circuit) -> StateVector:
    """Exact pure-state simulation from |0...0>."""
    amps = np.zeros(2**circuit.num_qubits, dtype=complex)
    amps[0] = 1.0
    state = StateVector(circuit.num_qubits, amps)
    for gate in circuit.gates:
        state = apply_gate(state, gate)
    return state


@dataclass(frozen=True)
class NoiseModel:
    """Depolarization after each gate plus classical readout flips.

    A depolarizing event replaces the state of the gate's qubit(s) with
    the maximally mixed state: rho -> (1-p) rho + p * mixed.
    """

    depolarizing_prob_1q: float = 0.0
    depolarizing_prob_2q: float = 0.0
    readout_flip_prob: float = 0.0

    def __post_init__(self):
        for name in ("depolarizing_prob_1q", "depolarizing_prob_2q", "readout_flip_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p}")

    @property
    def is_trivial(self) -> bool:
        return (self.depolarizing_prob_1q == 0.0
                and self.depolarizing_prob_2q == 0.0
                and self.readout_flip_prob == 0.0)

    def to_json(self) -> dict:
        return {
            "depolarizing_prob_1q": self.depolarizing_prob_1q,
            "depolarizing_prob_2q": self.depolarizing_prob_2q,
            "readout_flip_prob": self.readout_flip_prob,
        }


def _permute_qubits(matrix: np.ndarray, order: list, num_qubits: int) -> np.ndarray:
    """Reorder a matrix whose current qubit order is `order` to 0..n-1."""
    position = {q: i for i, q in enumerate(order)}
    perm = [position[q] for q in range(num_qubits)]
    tensor = matrix.reshape([2] * (2 * num_qubits))
    tensor = tensor.transpose(perm + [p + num_qubits for p in perm])
    dim = 2**num_qubits
    return tensor.reshape(dim, dim)


def depolarize(rho_mat: np.ndarray, qubits, prob: float, num_qubits: int) -> np.ndarray:
    """Mix the named qubits toward maximally mixed with probability `prob`."""
    if prob == 0.0:
        return rho_mat
    qubits = list(qubits)
    rest = [q for q in range(num_qubits) if q not in qubits]
    n_traced = len(qubits)
    tensor = rho_mat.reshape([2] * (2 * num_qubits))
    for offset, q in enumerate(qubits):
        axis = q - sum(1 for p in qubits[:offset] if p < q)
        ncur = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=axis, axis2=axis + ncur)
    reduced = tensor.reshape(2 ** len(rest), 2 ** len(rest)) if rest else tensor
    mixed = np.kron(np.eye(2**n_traced) / 2**n_traced, reduced)
    mixed = _permute_qubits(mixed, qubits + rest, num_qubits)
    return (1.0 - prob) * rho_mat + prob * mixed


def run_density_matrix(circuit: Circuit, noise: NoiseModel = None) -> DensityMatrix:
    """Exact mixed-state simulation; equals the pure run when noise is off."""
    dim = 2**circuit.num_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    noise = noise or NoiseModel()
    for gate in circuit.gates:
        unitary = gate_unitary(gate, circuit.num_qubits)
        rho = unitary @ rho @ unitary.conj().T
        prob = (noise.depolarizing_prob_2q if gate.kind == "cu3"
                else noise.depolarizing_prob_1q)
        rho = depolarize(rho, gate.qubits, prob, circuit.num_qubits)
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(circuit.num_qubits, rho, physical=True)


def measure_in_basis(state, setting: str, qubits=None) -> ProbabilityDistribution:
    """Outcome distribution of measuring `qubits` in the given bases.

    `setting` is one letter from {X, Y, Z} per measured qubit; X and Y
    are realized by a pre-rotation into the computational basis followed
    by a Z readout.  Unmeasured qubits are marginalized.
    """
    num_qubits = state.num_qubits
    qubits = list(range(num_qubits)) if qubits is None else list(qubits)
    if len(setting) != len(qubits):
        raise ValueError(f"setting {setting!r} does not match {len(qubits)} qubits")
    bad = set(setting) - set("XYZ")
    if bad:
        raise ValueError(f"invalid basis character(s) {sorted(bad)}")

    rotations = {q: BASIS_ROTATIONS[letter] for q, letter in zip(qubits, setting)}
    rot = _embed(rotations, num_qubits)
    if isinstance(state, StateVector):
        probs_full = np.abs(rot @ state.amplitudes) ** 2
    elif isinstance(state, DensityMatrix):
        probs_full = np.real(np.diag(rot @ state.matrix @ rot.conj().T))
    else:
        raise TypeError(f"cannot measure a {type(state).__name__}")

    tensor = probs_full.reshape([2] * num_qubits)
    unmeasured = tuple(q for q in range(num_qubits) if q not in qubits)
    marginal = tensor.sum(axis=unmeasured) if unmeasured else tensor
    # Report outcomes in the caller's qubit order.
    kept = [q for q in range(num_qubits) if q in qubits]
    marginal = marginal.transpose([kept.index(q) for q in qubits]).reshape(-1)
    marginal = np.clip(marginal, 0.0, None)
    marginal /= marginal.sum()
    outcomes = tuple(index_to_bits(i, len(qubits)) for i in range(marginal.size))
    return ProbabilityDistribution(outcomes, marginal)


@dataclass(frozen=True)
class ShotTable:
    """Counts of measured bitstrings for one basis setting."""

    setting: str
    counts: dict
    shots: int

    def __post_init__(self):
        object.__setattr__(self, "counts", dict(self.counts))
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to the declared shot total")

    def frequencies(self) -> dict:
        return {bits: c / self.shots for bits, c in self.counts.items()}

    def postselect(self, bit: int, value: int) -> "ShotTable":
        """Keep shots whose `bit` reads `value` and drop that bit."""
        kept = {}
        for bits, count in self.counts.items():
            if int(bits[bit]) == value:
                reduced = bits[:bit] + bits[bit + 1:]
                kept[reduced] = kept.get(reduced, 0) + count
        return ShotTable(self.setting[:bit] + self.setting[bit + 1:],
                         kept, sum(kept.values()))

    def to_csv_rows(self):
        for bits in sorted(self.counts):
            yield (self.setting, bits, self.counts[bits])


def _flip_distribution(probs: np.ndarray, num_bits: int, flip: float) -> np.ndarray:
    """Push a distribution through independent per-bit symmetric flips."""
    tensor = probs.reshape([2] * num_bits)
    for axis in range(num_bits):
        flipped = np.flip(tensor, axis=axis)
        tensor = (1.0 - flip) * tensor + flip * flipped
    return tensor.reshape(-1)


def sample_shots(dist: ProbabilityDistribution, shots: int, seed,
                 readout_flip_prob: float = 0.0, setting: str = None) -> ShotTable:
    """Seeded multinomial draw from a distribution, with optional readout flips.

    Flips are folded into the distribution before sampling, which is
    statistically identical to flipping each sampled bit independently.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    num_bits = len(dist.outcomes[0])
    probs = dist.probabilities
    if readout_flip_prob:
        probs = _flip_distribution(probs, num_bits, readout_flip_prob)
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs / probs.sum())
    counts = {bits: int(c) for bits, c in zip(dist.outcomes, draws) if c > 0}
    return ShotTable(setting if setting is not None else "Z" * num_bits,
                     counts, shots)


def shot_tables_to_csv(tables, path) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["setting", "bitstring", "count"])
        for table in tables:
            writer.writerows(table.to_csv_rows())


def shot_tables_from_csv(path):
    import csv

    grouped = {}
    with open(path) as fh:
        for row in csv.DictReader(fh):
            grouped.setdefault(row["setting"], {})[row["bitstring"]] = int(row["count"])
    return [
        ShotTable(setting, counts, sum(counts.values()))
        for setting, counts in grouped.items()
    ]
