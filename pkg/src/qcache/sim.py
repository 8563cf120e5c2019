"""Exact statevector simulator.

Amplitude ordering is little-endian: qubit 0 is the least significant bit of
the state index.  This ordering is part of the cache payload contract, as is
the byte serialization (interleaved little-endian float64 re/im pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .circuit import Circuit, Gate, GateKind, MaxCutGraph

MAX_QUBITS = 20  # desk-scale bound


class SimError(ValueError):
    pass


_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_FIXED_1Q = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _INV_SQRT2,
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
}


def gate_matrix(gate: Gate) -> np.ndarray:
    """Unitary of a gate; two-qubit matrices use basis index (bit_a << 1) | bit_b
    for qubits (a, b) in gate order."""
    kind = gate.kind
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind]
    if kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
        t = gate.param.radians
        c, s = math.cos(t / 2), math.sin(t / 2)
        if kind is GateKind.RX:
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if kind is GateKind.RY:
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]], dtype=complex)
    if kind is GateKind.CX:
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    if kind is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    if kind is GateKind.SWAP:
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    if kind is GateKind.RZZ:
        t = gate.param.radians
        lo, hi = np.exp(-0.5j * t), np.exp(0.5j * t)
        return np.diag([lo, hi, hi, lo]).astype(complex)
    raise SimError(f"no matrix for {kind}")


def _apply_1q(psi: np.ndarray, u: np.ndarray, q: int) -> None:
    view = psi.reshape(-1, 2, 1 << q)
    a = view[:, 0, :].copy()
    b = view[:, 1, :]
    view[:, 0, :] = u[0, 0] * a + u[0, 1] * b
    view[:, 1, :] = u[1, 0] * a + u[1, 1] * b


def _apply_2q(psi: np.ndarray, u: np.ndarray, qa: int, qb: int) -> None:
    hi, lo = max(qa, qb), min(qa, qb)
    view = psi.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)

    def part(j: int) -> np.ndarray:
        bit_a, bit_b = (j >> 1) & 1, j & 1
        bit_hi, bit_lo = (bit_a, bit_b) if qa > qb else (bit_b, bit_a)
        return view[:, bit_hi, :, bit_lo, :]

    old = [part(j).copy() for j in range(4)]
    for j in range(4):
        acc = u[j, 0] * old[0]
        for k in range(1, 4):
            if u[j, k] != 0:
                acc += u[j, k] * old[k]
        part(j)[:] = acc


@dataclass(frozen=True)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (1 << self.n_qubits,):
            raise SimError(f"expected {1 << self.n_qubits} amplitudes, got {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-10:
            raise SimError(f"statevector norm {norm} deviates from 1")

    def to_bytes(self) -> bytes:
        return self.amplitudes.astype("<c16").tobytes()

    @staticmethod
    def from_bytes(n_qubits: int, data: bytes) -> "Statevector":
        expected = 2 * (1 << n_qubits) * 8
        if len(data) != expected:
            raise SimError(f"payload length {len(data)} != {expected} for {n_qubits} qubit(s)")
        return Statevector(n_qubits, np.frombuffer(data, dtype="<c16").copy())


def simulate(circuit: Circuit) -> Statevector:
    """Evolve |0...0> through the circuit's gates in order."""
    n = circuit.n_qubits
    if n > MAX_QUBITS:
        raise SimError(f"{n} qubits exceeds the desk-scale bound of {MAX_QUBITS}")
    psi = np.zeros(1 << n, dtype=np.complex128)
    psi[0] = 1.0
    for gate in circuit.gates:
        u = gate_matrix(gate)
        if len(gate.qubits) == 1:
            _apply_1q(psi, u, gate.qubits[0])
        else:
            _apply_2q(psi, u, gate.qubits[0], gate.qubits[1])
    return Statevector(n, psi)


_PAULIS = {
    "I": None,
    "X": _FIXED_1Q[GateKind.X],
    "Y": _FIXED_1Q[GateKind.Y],
    "Z": _FIXED_1Q[GateKind.Z],
}


def expectation_pauli(sv: Statevector, paulis: Mapping[int, str]) -> float:
    """<sv| P |sv> for a tensor product of single-qubit Paulis."""
    phi = sv.amplitudes.copy()
    for q, letter in paulis.items():
        if q < 0 or q >= sv.n_qubits:
            raise SimError(f"qubit {q} out of range")
        try:
            u = _PAULIS[letter.upper()]
        except KeyError:
            raise SimError(f"unknown Pauli {letter!r}") from None
        if u is not None:
            _apply_1q(phi, u, q)
    val = complex(np.vdot(sv.amplitudes, phi))
    if abs(val.imag) > 1e-10:
        raise SimError(f"expectation has imaginary residue {val.imag}")
    return val.real


def maxcut_energy(sv: Statevector, graph: MaxCutGraph) -> float:
    """Sum over edges of (1 - <Z_i Z_j>) / 2."""
    if sv.n_qubits != graph.n_vertices:
        raise SimError(f"statevector has {sv.n_qubits} qubits, graph {graph.n_vertices} vertices")
    probs = np.abs(sv.amplitudes) ** 2
    idx = np.arange(probs.size)
    energy = 0.0
    for i, j in graph.sorted_edges():
        differ = ((idx >> i) ^ (idx >> j)) & 1
        zz = float(np.sum(probs * (1.0 - 2.0 * differ)))
        energy += (1.0 - zz) / 2.0
    return energy
