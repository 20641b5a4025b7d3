"""Fidelity-estimation and verification protocols.

Three runners share a common pattern: prepare a small register, append a
heterodyne-style detection stage (an ancilla prepared in |1> controlling
a U3(zeta, 0, 0) rotation on each system qubit), reconstruct the output
by tomography, and compare against targets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, NoiseModel, cu3, measure_in_basis, run_statevector, u3, x
from .metrics import fidelity, total_variation_distance, trace_distance
from .states import DensityMatrix, StateVector, condition_on_ancilla, partial_trace
from .tomography import (
    reconstruct_multi_qubit,
    reconstruct_single_qubit,
    reduced_fidelities,
    tomography_sweep,
)

BALANCED_ZETA = 0.0
UNBALANCED_ZETA = math.pi / 2
DEFAULT_THRESHOLD = 0.6
INEQUALITY_SLACK = 1e-9


@dataclass(frozen=True)
class HeterodyneSetting:
    """Detection strength: zeta=0 balanced, zeta=pi/2 unbalanced."""

    zeta: float

    @classmethod
    def balanced(cls) -> "HeterodyneSetting":
        return cls(BALANCED_ZETA)

    @classmethod
    def unbalanced(cls) -> "HeterodyneSetting":
        return cls(UNBALANCED_ZETA)

    @property
    def mode(self) -> str:
        if self.zeta == BALANCED_ZETA:
            return "balanced"
        if self.zeta == UNBALANCED_ZETA:
            return "unbalanced"
        return "custom"

    def complementary(self) -> "HeterodyneSetting":
        if self.mode == "balanced":
            return HeterodyneSetting.unbalanced()
        if self.mode == "unbalanced":
            return HeterodyneSetting.balanced()
        return self


@dataclass(frozen=True)
class CopyPlan:
    """How many state copies each measurement group receives."""

    n: int = 5
    m: int = 5
    core_cutoff: int = 2

    def __post_init__(self):
        if min(self.n, self.m, self.core_cutoff) < 1:
            raise ValueError("copy counts and core cutoff must be at least 1")


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    mid: float
    rhs: float
    holds: bool

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "mid": self.mid,
                "rhs": self.rhs, "holds": self.holds}


@dataclass
class GroupResult:
    """Results for one measurement group (one detection setting)."""

    label: str
    zeta: float
    copy_fidelities: list = field(default_factory=list)
    mean: float = None
    std: float = None
    global_fidelity: float = None
    reduced_fidelities_ideal: list = None
    witness_ideal: float = None
    reduced_fidelities_input: list = None
    witness_input: float = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass
class ProtocolReport:
    protocol: str
    groups: list
    global_fidelity: float = None
    witness: float = None
    trace_distance: float = None
    tvd: float = None
    threshold: float = None
    verdict: str = None
    bound_checks: list = None
    target_state: StateVector = None

    def to_json(self) -> dict:
        data = {"protocol": self.protocol,
                "groups": [g.to_json() for g in self.groups]}
        for key in ("global_fidelity", "witness", "trace_distance", "tvd",
                    "threshold", "verdict"):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        if self.bound_checks is not None:
            data["bound_checks"] = [b.to_json() for b in self.bound_checks]
        if self.target_state is not None:
            data["target_state"] = self.target_state.to_json()
        return data


def fidelity_witness(per_qubit_fidelities) -> float:
    """Lower bound on the global fidelity from single-qubit marginals:
    W = 1 - sum_i (1 - F_i).  Can be negative; equals 1 only when every
    marginal matches its target exactly.
    """
    fids = list(per_qubit_fidelities)
    if not fids:
        raise ValueError("need at least one per-qubit fidelity")
    return float(1.0 - sum(1.0 - f for f in fids))


def bound_check(f: float, d: float, tvd: float) -> list:
    """Evaluate the two standard inequality chains linking fidelity,
    trace distance, and total variation distance."""
    one_minus_f2 = max(0.0, 1.0 - f * f)
    one_minus_f = max(0.0, 1.0 - f)
    chains = [
        BoundCheck(
            "fuchs-van-de-graaf", 1.0 - f, d, math.sqrt(one_minus_f2),
            1.0 - f <= d + INEQUALITY_SLACK
            and d <= math.sqrt(one_minus_f2) + INEQUALITY_SLACK,
        ),
        BoundCheck(
            "tvd-trace-distance", tvd, d, math.sqrt(one_minus_f),
            tvd <= d + INEQUALITY_SLACK
            and d <= math.sqrt(one_minus_f) + INEQUALITY_SLACK,
        ),
    ]
    return chains


def heterodyne_stage(circuit: Circuit, setting: HeterodyneSetting,
                     system_qubits=None) -> Circuit:
    """Append the detection stage: prepare the ancilla in |1> (unless a
    gate already touches it) and control a U3(zeta, 0, 0) onto each
    system qubit."""
    if circuit.ancilla is None:
        raise ValueError("circuit has no designated ancilla")
    system_qubits = circuit.system_qubits if system_qubits is None else tuple(system_qubits)
    gates = []
    if not any(circuit.ancilla in g.qubits for g in circuit.gates):
        gates.append(x(circuit.ancilla))
    for q in system_qubits:
        gates.append(cu3(circuit.ancilla, q, setting.zeta, 0.0, 0.0))
    return circuit.appended(*gates)


def _prep_gates(spec, qubit: int):
    """Gates preparing one qubit: '0', '1', or an (alpha, beta) pair."""
    if spec in ("0", 0):
        return []
    if spec in ("1", 1):
        return [x(qubit)]
    alpha, beta = complex(spec[0]), complex(spec[1])
    norm = math.hypot(abs(alpha), abs(beta))
    alpha, beta = alpha / norm, beta / norm
    theta = 2.0 * math.atan2(abs(beta), abs(alpha))
    phi = float(np.angle(beta) - np.angle(alpha)) if abs(beta) > 0 else 0.0
    return [u3(qubit, theta, phi, 0.0)]


def single_mode_circuit(initial, setting: HeterodyneSetting) -> Circuit:
    """Two-qubit estimation circuit: system on qubit 0, ancilla on 1."""
    circuit = Circuit(2, ancilla=1).appended(*_prep_gates(initial, 0))
    return heterodyne_stage(circuit, setting)


def multi_mode_circuit(initial, setting: HeterodyneSetting) -> Circuit:
    """Four system qubits plus ancilla; `initial` is a bitstring or a
    list of per-qubit (alpha, beta) pairs."""
    circuit = Circuit(5, ancilla=4)
    specs = list(initial)
    if len(specs) != 4:
        raise ValueError("multi-mode preparation needs 4 per-qubit specs")
    gates = []
    for q, spec in enumerate(specs):
        gates.extend(_prep_gates(spec, q))
    return heterodyne_stage(circuit.appended(*gates), setting)


def boson_sampling_circuit(n_photons: int, m_modes: int,
                           interferometer_angles, setting: HeterodyneSetting) -> Circuit:
    """Photon inputs on the first n qubits, a U3 per mode as the linear
    interferometer, then the detection stage."""
    if not 1 <= n_photons <= m_modes:
        raise ValueError("need 1 <= n_photons <= m_modes")
    if m_modes > 4:
        raise ValueError("at most 4 modes supported")
    circuit = Circuit(m_modes + 1, ancilla=m_modes)
    gates = [x(q) for q in range(n_photons)]
    for q in range(m_modes):
        theta, phi, lam = interferometer_angles[q]
        gates.append(u3(q, theta, phi, lam))
    return heterodyne_stage(circuit.appended(*gates), setting)


def ideal_output(circuit: Circuit) -> DensityMatrix:
    """Noiseless circuit output, conditioned on the ancilla reading 1."""
    state = run_statevector(circuit).density()
    if circuit.ancilla is not None:
        state = condition_on_ancilla(state, circuit.ancilla, 1)
    return state


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _mean_std(values) -> tuple:
    arr = np.asarray(values, dtype=float)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std


def protocol1_run(initial, setting: HeterodyneSetting, plan: CopyPlan = None,
                  shots: int = None, seed: int = 0,
                  noise: NoiseModel = None) -> ProtocolReport:
    """Single-mode fidelity estimation over N + M identically prepared
    copies, each reconstructed by Bloch tomography and scored against
    the ideal post-detection state."""
    plan = plan or CopyPlan()
    circuit = single_mode_circuit(initial, setting)
    target = ideal_output(circuit)
    copies = plan.n + plan.m
    children = _seed_sequence(seed).spawn(copies)
    fidelities = []
    for child in children:
        expectations = tomography_sweep(
            circuit, shots=shots, seed=child, noise=noise)
        reconstruction = reconstruct_single_qubit(expectations)
        fidelities.append(fidelity(reconstruction, target))
    groups = []
    for label, chunk in (("N", fidelities[:plan.n]), ("M", fidelities[plan.n:])):
        mean, std = _mean_std(chunk)
        groups.append(GroupResult(label, setting.zeta, list(chunk), mean, std))
    target_vec = StateVector(1, _dominant_vector(target))
    return ProtocolReport("protocol1", groups, target_state=target_vec)


def _dominant_vector(rho: DensityMatrix) -> np.ndarray:
    eigvals, eigvecs = np.linalg.eigh(rho.matrix)
    return eigvecs[:, -1]


def _input_targets(initial) -> list:
    targets = []
    for spec in initial:
        if spec in ("0", 0):
            targets.append(StateVector.computational("0"))
        elif spec in ("1", 1):
            targets.append(StateVector.computational("1"))
        else:
            targets.append(StateVector.single_qubit(complex(spec[0]), complex(spec[1])))
    return targets


def _multi_mode_group(circuit: Circuit, label: str, zeta: float, copies: int,
                      input_targets, shots, seed, noise) -> tuple:
    """Tomograph `copies` runs of a 4-qubit circuit; returns the group
    result and the per-copy raw reconstructions."""
    target = ideal_output(circuit)
    ideal_targets = [
        partial_trace(target, [q]) for q in range(target.num_qubits)
    ]
    children = _seed_sequence(seed).spawn(copies)
    globals_, ideals, inputs, recons = [], [], [], []
    for child in children:
        expectations = tomography_sweep(circuit, shots=shots, seed=child, noise=noise)
        rho = reconstruct_multi_qubit(expectations, 4)
        recons.append(rho)
        globals_.append(fidelity(rho, target))
        ideals.append([fidelity(partial_trace(rho, [q]), t)
                       for q, t in enumerate(ideal_targets)])
        inputs.append(reduced_fidelities(rho, input_targets))
    mean, std = _mean_std(globals_)
    red_ideal = list(np.mean(ideals, axis=0))
    red_input = list(np.mean(inputs, axis=0))
    group = GroupResult(
        label, zeta, list(globals_), mean, std,
        global_fidelity=mean,
        reduced_fidelities_ideal=[float(v) for v in red_ideal],
        witness_ideal=fidelity_witness(red_ideal),
        reduced_fidelities_input=[float(v) for v in red_input],
        witness_input=fidelity_witness(red_input),
    )
    return group, recons, target


def protocol2_run(initial, setting: HeterodyneSetting, plan: CopyPlan = None,
                  shots: int = None, seed: int = 0,
                  noise: NoiseModel = None) -> ProtocolReport:
    """Multi-mode witness estimation: N copies at the requested setting,
    M copies at the complementary one, full 4-qubit tomography each."""
    plan = plan or CopyPlan(n=1, m=1)
    input_targets = _input_targets(initial)
    seeds = _seed_sequence(seed).spawn(2)
    groups = []
    for label, det, copies, child in (
        ("N", setting, plan.n, seeds[0]),
        ("M", setting.complementary(), plan.m, seeds[1]),
    ):
        circuit = multi_mode_circuit(initial, det)
        group, _, _ = _multi_mode_group(circuit, label, det.zeta, copies,
                                        input_targets, shots, child, noise)
        groups.append(group)
    head = groups[0]
    return ProtocolReport(
        "protocol2", groups,
        global_fidelity=head.global_fidelity,
        witness=head.witness_ideal,
    )


def protocol3_verify(n_photons: int = 2, m_modes: int = 4,
                     interferometer_angles=None,
                     setting: HeterodyneSetting = None,
                     threshold: float = DEFAULT_THRESHOLD,
                     shots: int = None, seed: int = 0,
                     noise: NoiseModel = None) -> ProtocolReport:
    """Threshold verification of a sampled interferometer output.

    The headline witness uses the photon-occupation targets (|1> on the
    first n modes, |0> elsewhere); the ideal-output witness is reported
    alongside.  Accept iff the global fidelity reaches the threshold.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    setting = setting or HeterodyneSetting.unbalanced()
    if interferometer_angles is None:
        interferometer_angles = [(math.pi / 2, math.pi / 2, math.pi / 2)] * m_modes
    circuit = boson_sampling_circuit(n_photons, m_modes,
                                     interferometer_angles, setting)
    input_targets = _input_targets(
        ["1"] * n_photons + ["0"] * (m_modes - n_photons))
    group, recons, target = _multi_mode_group(
        circuit, "N", setting.zeta, 1, input_targets, shots,
        np.random.SeedSequence(seed), noise)
    rho = recons[0]
    f_global = group.copy_fidelities[0]
    dist = trace_distance(rho, target)
    p_rho = measure_in_basis(rho, "Z" * m_modes)
    p_sigma = measure_in_basis(target, "Z" * m_modes)
    tvd = total_variation_distance(p_rho, p_sigma)
    verdict = "accept" if f_global >= threshold else "reject"
    return ProtocolReport(
        "protocol3", [group],
        global_fidelity=f_global,
        witness=group.witness_input,
        trace_distance=dist,
        tvd=tvd,
        threshold=threshold,
        verdict=verdict,
        bound_checks=bound_check(f_global, dist, tvd),
    )
