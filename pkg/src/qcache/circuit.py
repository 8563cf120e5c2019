"""Circuit intermediate representation and deterministic circuit builders.

Rotation parameters are quantized at construction time onto the global grid
of multiples of pi/2**20, wrapped into (-pi, pi].  Both the hashing pipeline
and the simulator consume the quantized value, so key-equal circuits always
produce identical results.  Phases are stored as exact reduced fractions of
pi; "ticks" denote integer multiples of the quantum pi/2**20.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Iterable, Optional, Sequence

QUANT_POW = 20
QUANT_DEN = 1 << QUANT_POW          # denominator of the phase quantum
TICKS_PI = QUANT_DEN                # pi in ticks
TICKS_TWO_PI = QUANT_DEN << 1


class CircuitError(ValueError):
    pass


class CircuitParseError(CircuitError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _wrap_ticks(t: int) -> int:
    """Wrap a tick count into (-2**20, 2**20], i.e. (-pi, pi]."""
    m = t % TICKS_TWO_PI
    if m > TICKS_PI:
        m -= TICKS_TWO_PI
    return m


@dataclass(frozen=True)
class Phase:
    """Angle numerator/denominator * pi, reduced, with numerator in (-den, den]."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if den <= 0:
            raise CircuitError(f"denominator must be positive, got {den}")
        if QUANT_DEN % den != 0:
            raise CircuitError(f"denominator must divide 2**{QUANT_POW}, got {den}")
        num = num % (2 * den)
        if num > den:
            num -= 2 * den
        g = gcd(abs(num), den)
        object.__setattr__(self, "numerator", num // g)
        object.__setattr__(self, "denominator", den // g)

    @staticmethod
    def zero() -> "Phase":
        return Phase(0, 1)

    @staticmethod
    def from_ticks(t: int) -> "Phase":
        t = _wrap_ticks(t)
        g = gcd(abs(t), QUANT_DEN)
        return Phase(t // g, QUANT_DEN // g)

    @property
    def ticks(self) -> int:
        return self.numerator * (QUANT_DEN // self.denominator)

    @property
    def radians(self) -> float:
        return math.pi * self.numerator / self.denominator

    def __add__(self, other: "Phase") -> "Phase":
        return Phase.from_ticks(self.ticks + other.ticks)

    def __neg__(self) -> "Phase":
        return Phase.from_ticks(-self.ticks)

    def __mul__(self, k: int) -> "Phase":
        return Phase.from_ticks(self.ticks * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def quantize_phase(theta: float) -> Phase:
    """Snap an angle in radians to the nearest multiple of pi/2**20.

    Idempotent on already-quantized values; exact half-quantum ties follow
    round-half-to-even.
    """
    if not math.isfinite(theta):
        raise CircuitError(f"phase must be finite, got {theta}")
    return Phase.from_ticks(round(theta / (math.pi / QUANT_DEN)))


class GateKind(Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    S = "S"
    SDG = "SDG"
    T = "T"
    TDG = "TDG"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CX = "CX"
    CZ = "CZ"
    RZZ = "RZZ"
    SWAP = "SWAP"


_TWO_QUBIT = {GateKind.CX, GateKind.CZ, GateKind.RZZ, GateKind.SWAP}
_PARAMETRIC = {GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.RZZ}

ONE_QUBIT_KINDS = tuple(k for k in GateKind if k not in _TWO_QUBIT)
TWO_QUBIT_KINDS = tuple(sorted(_TWO_QUBIT, key=lambda k: k.value))


def gate_arity(kind: GateKind) -> int:
    return 2 if kind in _TWO_QUBIT else 1


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    param: Optional[Phase] = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        arity = gate_arity(self.kind)
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.kind.value} expects {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.kind.value} qubits must be distinct: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.qubits}")
        if (self.param is not None) != (self.kind in _PARAMETRIC):
            raise CircuitError(f"{self.kind.value}: parameter {'missing' if self.param is None else 'not allowed'}")

    def __str__(self) -> str:
        qs = ",".join(str(q) for q in self.qubits)
        return f"{self.kind.value} {qs}" + (f" {self.param}" if self.param is not None else "")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    label: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise CircuitError(f"n_qubits must be positive, got {self.n_qubits}")
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise CircuitError(f"gate {g} out of range for {self.n_qubits} qubit(s)")

    def to_text(self) -> str:
        lines = [f"qubits {self.n_qubits}"]
        lines.extend(str(g) for g in self.gates)
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str, label: Optional[str] = None) -> "Circuit":
        return parse_circuit(text, label=label)

    @staticmethod
    def from_qasm(text: str, label: Optional[str] = None) -> "Circuit":
        return parse_qasm(text, label=label)


def parse_circuit(text: str, label: Optional[str] = None) -> Circuit:
    """Parse the one-gate-per-line text format (header ``qubits N``)."""
    n_qubits = None
    gates: list[Gate] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n_qubits is None:
            if parts[0].lower() != "qubits" or len(parts) != 2:
                raise CircuitParseError(line_no, "expected header 'qubits N'")
            try:
                n_qubits = int(parts[1])
            except ValueError:
                raise CircuitParseError(line_no, f"bad qubit count {parts[1]!r}") from None
            continue
        try:
            kind = GateKind(parts[0].upper())
        except ValueError:
            raise CircuitParseError(line_no, f"unknown gate {parts[0]!r}") from None
        if len(parts) < 2:
            raise CircuitParseError(line_no, "missing qubit operands")
        try:
            qubits = tuple(int(q) for q in parts[1].split(","))
        except ValueError:
            raise CircuitParseError(line_no, f"bad qubit list {parts[1]!r}") from None
        param = None
        if len(parts) == 3:
            m = re.fullmatch(r"(-?\d+)/(\d+)", parts[2])
            if not m:
                raise CircuitParseError(line_no, f"bad phase {parts[2]!r}, expected num/den")
            param = Phase(int(m.group(1)), int(m.group(2)))
        elif len(parts) > 3:
            raise CircuitParseError(line_no, "too many fields")
        try:
            gates.append(Gate(kind, qubits, param))
        except CircuitError as exc:
            raise CircuitParseError(line_no, str(exc)) from None
    if n_qubits is None:
        raise CircuitParseError(1, "empty circuit file (missing 'qubits N' header)")
    try:
        return Circuit(n_qubits, tuple(gates), label=label)
    except CircuitError as exc:
        raise CircuitParseError(1, str(exc)) from None


_QASM_GATES = {
    "h": GateKind.H, "x": GateKind.X, "y": GateKind.Y, "z": GateKind.Z,
    "s": GateKind.S, "sdg": GateKind.SDG, "t": GateKind.T, "tdg": GateKind.TDG,
    "rx": GateKind.RX, "ry": GateKind.RY, "rz": GateKind.RZ,
    "cx": GateKind.CX, "cz": GateKind.CZ, "swap": GateKind.SWAP,
}

_QASM_EXPR = re.compile(r"^[0-9pi\s\.\+\-\*/\(\)]*$")


def _eval_qasm_angle(expr: str, line_no: int) -> float:
    if not _QASM_EXPR.match(expr):
        raise CircuitParseError(line_no, f"unsupported angle expression {expr!r}")
    try:
        return float(eval(expr, {"__builtins__": {}}, {"pi": math.pi}))  # noqa: S307 - charset-restricted arithmetic
    except Exception:
        raise CircuitParseError(line_no, f"bad angle expression {expr!r}") from None


def parse_qasm(text: str, label: Optional[str] = None) -> Circuit:
    """Import a minimal OpenQASM 2 subset (single register, listed gates only)."""
    n_qubits = None
    gates: list[Gate] = []
    reg = None

    def qubit_of(tok: str, line_no: int) -> int:
        m = re.fullmatch(r"(\w+)\[(\d+)\]", tok.strip())
        if not m or m.group(1) != reg:
            raise CircuitParseError(line_no, f"bad qubit reference {tok.strip()!r}")
        return int(m.group(2))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        for stmt in filter(None, (s.strip() for s in line.split(";"))):
            if stmt.startswith("OPENQASM") or stmt.startswith("include"):
                continue
            m = re.fullmatch(r"qreg\s+(\w+)\[(\d+)\]", stmt)
            if m:
                if reg is not None:
                    raise CircuitParseError(line_no, "multiple qreg declarations not supported")
                reg, n_qubits = m.group(1), int(m.group(2))
                continue
            if stmt.startswith("creg"):
                continue
            m = re.fullmatch(r"(\w+)\s*(?:\(([^)]*)\))?\s+(.+)", stmt)
            if not m:
                raise CircuitParseError(line_no, f"cannot parse statement {stmt!r}")
            name, angle, args = m.group(1), m.group(2), m.group(3)
            kind = _QASM_GATES.get(name)
            if kind is None:
                raise CircuitParseError(line_no, f"unsupported gate {name!r}")
            if reg is None:
                raise CircuitParseError(line_no, "gate before qreg declaration")
            qubits = tuple(qubit_of(a, line_no) for a in args.split(","))
            param = None
            if kind in _PARAMETRIC:
                if angle is None:
                    raise CircuitParseError(line_no, f"{name} requires an angle")
                param = quantize_phase(_eval_qasm_angle(angle, line_no))
            elif angle is not None:
                raise CircuitParseError(line_no, f"{name} takes no angle")
            try:
                gates.append(Gate(kind, qubits, param))
            except CircuitError as exc:
                raise CircuitParseError(line_no, str(exc)) from None
    if n_qubits is None:
        raise CircuitParseError(1, "missing qreg declaration")
    return Circuit(n_qubits, tuple(gates), label=label)


@dataclass(frozen=True)
class MaxCutGraph:
    n_vertices: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        norm = frozenset((min(a, b), max(a, b)) for a, b in self.edges)
        object.__setattr__(self, "edges", norm)
        if self.n_vertices < 1:
            raise CircuitError("graph needs at least one vertex")
        for a, b in norm:
            if a == b:
                raise CircuitError(f"self-loop on vertex {a}")
            if a < 0 or b >= self.n_vertices:
                raise CircuitError(f"edge ({a},{b}) out of range")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def build_hea(n_qubits: int, layers: int, params: Sequence[Phase]) -> Circuit:
    """Hardware-efficient ansatz: per layer, RY on every qubit then a CX ladder."""
    if len(params) != layers * n_qubits:
        raise CircuitError(f"expected {layers * n_qubits} parameters, got {len(params)}")
    gates: list[Gate] = []
    for layer in range(layers):
        for q in range(n_qubits):
            gates.append(Gate(GateKind.RY, (q,), params[layer * n_qubits + q]))
        for q in range(n_qubits - 1):
            gates.append(Gate(GateKind.CX, (q, q + 1)))
    return Circuit(n_qubits, tuple(gates), label=f"hea{n_qubits}x{layers}")


def build_random(n_qubits: int, depth: int, seed: int) -> Circuit:
    """Seeded random circuit with at most two operands per gate.

    Per layer, qubits are drawn from the remaining pool; the draw order
    (arity when >=2 remain, kind, operands, parameter) is fixed so identical
    seeds give identical circuits everywhere.
    """
    if n_qubits < 1 or depth < 1:
        raise CircuitError("n_qubits and depth must be >= 1")
    from .rng import Rng

    rng = Rng(seed)
    gates: list[Gate] = []
    for _ in range(depth):
        pool = list(range(n_qubits))
        while pool:
            two = len(pool) >= 2 and rng.random() < 0.5
            kind = rng.choice(TWO_QUBIT_KINDS if two else ONE_QUBIT_KINDS)
            qubits = tuple(pool.pop(rng.randbelow(len(pool))) for _ in range(2 if two else 1))
            param = quantize_phase(rng.uniform(0.0, 2 * math.pi)) if kind in _PARAMETRIC else None
            gates.append(Gate(kind, qubits, param))
    return Circuit(n_qubits, tuple(gates), label=f"random{n_qubits}d{depth}s{seed}")


def build_qaoa_maxcut(graph: MaxCutGraph, betas: Sequence[Phase], gammas: Sequence[Phase]) -> Circuit:
    """QAOA Max-Cut circuit: H layer, then per layer RZZ(2*gamma) on each edge
    (sorted order) followed by RX(2*beta) on each qubit."""
    if len(betas) != len(gammas) or not betas:
        raise CircuitError("betas and gammas must have equal positive length")
    n = graph.n_vertices
    gates: list[Gate] = [Gate(GateKind.H, (q,)) for q in range(n)]
    for beta, gamma in zip(betas, gammas):
        for a, b in graph.sorted_edges():
            gates.append(Gate(GateKind.RZZ, (a, b), 2 * gamma))
        for q in range(n):
            gates.append(Gate(GateKind.RX, (q,), 2 * beta))
    return Circuit(n, tuple(gates), label=f"qaoa{n}p{len(betas)}")
