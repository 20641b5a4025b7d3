"""Linear-inversion state tomography from basis-resolved shot counts.

An expectation set maps Pauli strings (over I/X/Y/Z) to real expectation
values.  Reconstruction is the standard Pauli sum
rho = (1/2^m) * sum_P <P> P; the single-qubit Bloch formula is its
m = 1 special case.
"""
from __future__ import annotations

import itertools
import json
from functools import lru_cache

import numpy as np

from .circuits import (
    Circuit,
    NoiseModel,
    measure_in_basis,
    run_density_matrix,
    run_statevector,
    sample_shots,
    ShotTable,
)
from .metrics import fidelity
from .states import DensityMatrix, StateVector, condition_on_ancilla, partial_trace

MAX_MEASURED_QUBITS = 4

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_strings(num_qubits: int):
    """All 4^m strings over {I, X, Y, Z}, 'I...I' first."""
    return ["".join(p) for p in itertools.product("IXYZ", repeat=num_qubits)]


@lru_cache(maxsize=None)
def pauli_matrix(string: str) -> np.ndarray:
    full = np.array([[1.0 + 0j]])
    for letter in string:
        full = np.kron(full, PAULI_MATRICES[letter])
    return full


def _compatible(setting: str, string: str) -> bool:
    return all(p == "I" or p == s for p, s in zip(string, setting))


def expectation_from_counts(table: ShotTable, string: str) -> float:
    """Parity-weighted average of counts for one Pauli string.

    Identity positions are marginalized; every non-identity letter must
    match the table's measurement setting.
    """
    if len(string) != len(table.setting):
        raise ValueError(f"string {string!r} does not match setting {table.setting!r}")
    if not _compatible(table.setting, string):
        raise ValueError(
            f"setting {table.setting!r} cannot estimate Pauli string {string!r}"
        )
    active = [i for i, letter in enumerate(string) if letter != "I"]
    total = 0
    for bits, count in table.counts.items():
        parity = sum(int(bits[i]) for i in active) % 2
        total += -count if parity else count
    return total / table.shots


def expectations_from_tables(tables, num_qubits: int) -> dict:
    """Assemble the full 4^m expectation set from 3^m setting tables.

    Strings with identity positions are estimated from every compatible
    setting, weighted by shot count.
    """
    by_setting = {t.setting: t for t in tables}
    expectations = {}
    for string in pauli_strings(num_qubits):
        if set(string) == {"I"}:
            expectations[string] = 1.0
            continue
        num, den = 0.0, 0
        for setting, table in by_setting.items():
            if _compatible(setting, string) and table.shots > 0:
                num += expectation_from_counts(table, string) * table.shots
                den += table.shots
        if den == 0:
            raise ValueError(f"no shot table can estimate {string!r}")
        expectations[string] = num / den
    return expectations


def reconstruct_single_qubit(expectations: dict) -> DensityMatrix:
    """Bloch-vector reconstruction from <X>, <Y>, <Z>."""
    try:
        ex, ey, ez = (expectations[k] for k in ("X", "Y", "Z"))
    except KeyError as err:
        raise ValueError(f"missing expectation {err.args[0]!r}") from None
    mat = 0.5 * np.array(
        [[1 + ez, ex - 1j * ey], [ex + 1j * ey, 1 - ez]], dtype=complex
    )
    return DensityMatrix(1, mat, physical=None)


def reconstruct_multi_qubit(expectations: dict, num_qubits: int = None) -> DensityMatrix:
    """Pauli-sum reconstruction; the result may be unphysical for noisy data."""
    if num_qubits is None:
        num_qubits = len(next(iter(expectations)))
    needed = pauli_strings(num_qubits)
    missing = [s for s in needed if s not in expectations]
    if missing:
        raise ValueError(f"incomplete expectation set, missing e.g. {missing[0]!r}")
    dim = 2**num_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    for string in needed:
        mat += expectations[string] * pauli_matrix(string)
    mat /= dim
    mat = (mat + mat.conj().T) / 2
    return DensityMatrix(num_qubits, mat, physical=None)


def save_expectations(expectations: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(expectations, fh, indent=2, sort_keys=True)


def load_expectations(path) -> dict:
    with open(path) as fh:
        return {str(k): float(v) for k, v in json.load(fh).items()}


def _conditioned_state(circuit: Circuit, noise: NoiseModel,
                       postselect_ancilla) -> DensityMatrix:
    """Exact circuit output with the ancilla conditioned away (if any)."""
    rho = run_density_matrix(circuit, noise)
    if circuit.ancilla is not None and postselect_ancilla is not None:
        rho = condition_on_ancilla(rho, circuit.ancilla, postselect_ancilla)
    return rho


def _shift_index(qubit: int, removed: int) -> int:
    return qubit - 1 if qubit > removed else qubit


def tomography_sweep(circuit: Circuit, measured=None, shots: int = None,
                     seed: int = 0, noise: NoiseModel = None,
                     postselect_ancilla: int = 1) -> dict:
    """Run all 3^k basis settings over `measured` qubits and assemble
    the full expectation set.

    shots=None uses exact probabilities; otherwise each setting is
    sampled with a child seed derived from `seed`.  When the circuit has
    an ancilla it is read out in Z and the data is conditioned on the
    requested outcome (pass postselect_ancilla=None to skip).
    """
    measured = list(circuit.system_qubits if measured is None else measured)
    if len(measured) > MAX_MEASURED_QUBITS:
        raise ValueError(
            f"at most {MAX_MEASURED_QUBITS} measured qubits supported, got {len(measured)}"
        )
    noise = noise or NoiseModel()
    postselect = circuit.ancilla is not None and postselect_ancilla is not None

    if shots is None:
        rho = _conditioned_state(circuit, noise, postselect_ancilla if postselect else None)
        if postselect:
            idx = [_shift_index(q, circuit.ancilla) for q in measured]
        else:
            idx = measured
        if len(idx) < rho.num_qubits:
            rho = partial_trace(rho, idx)
        order = [sorted(idx).index(i) for i in idx]
        expectations = {}
        for string in pauli_strings(len(measured)):
            # pauli letters follow the caller's measured-qubit order
            reordered = "".join(string[order.index(j)] for j in range(len(order)))
            value = np.trace(pauli_matrix(reordered) @ rho.matrix).real
            expectations[string] = float(value)
        return expectations

    if noise.is_trivial:
        state = run_statevector(circuit)
    else:
        state = run_density_matrix(circuit, noise)

    settings = ["".join(s) for s in itertools.product("XYZ", repeat=len(measured))]
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = seq.spawn(len(settings))
    tables = []
    for setting, child in zip(settings, children):
        if postselect:
            dist = measure_in_basis(state, setting + "Z", measured + [circuit.ancilla])
        else:
            dist = measure_in_basis(state, setting, measured)
        table = sample_shots(dist, shots, child,
                             readout_flip_prob=noise.readout_flip_prob,
                             setting=setting + ("Z" if postselect else ""))
        if postselect:
            table = table.postselect(len(measured), postselect_ancilla)
        tables.append(table)
    return expectations_from_tables(tables, len(measured))


def reduced_fidelities(rho: DensityMatrix, targets) -> list:
    """Fidelity of each single-qubit marginal against its pure target."""
    targets = list(targets)
    if len(targets) != rho.num_qubits:
        raise ValueError(
            f"need one target per qubit ({rho.num_qubits}), got {len(targets)}"
        )
    values = []
    for i, target in enumerate(targets):
        marginal = partial_trace(rho, [i])
        if isinstance(target, StateVector):
            target = target.density()
        values.append(fidelity(marginal, target))
    return values
