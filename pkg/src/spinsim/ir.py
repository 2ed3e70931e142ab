"""Gate-level intermediate representation for spin-chain circuits.

Conventions used everywhere in the package:

* qubit 0 is the first spin of the chain and the most significant bit of
  a basis-state index;
* RZ(theta) = exp(-i theta sigma_z / 2), RZZ(theta) = exp(-i theta
  sigma_z x sigma_z / 2), and likewise for the x and y axes;
* global phase is not tracked, so circuit equivalence is always checked
  up to a phase (see :func:`phase_aligned_distance`);
* the native target gate set is {rz, rx, h, cnot}.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    CircuitSyntaxError,
    QubitOutOfRangeError,
    TooLargeError,
    UnknownGateError,
)

GATE_ARITY = {
    "x": 1,
    "h": 1,
    "rx": 1,
    "ry": 1,
    "rz": 1,
    "cnot": 2,
    "rxx": 2,
    "ryy": 2,
    "rzz": 2,
}

PARAMETRIC_KINDS = frozenset({"rx", "ry", "rz", "rxx", "ryy", "rzz"})
SELF_INVERSE_KINDS = frozenset({"x", "h", "cnot"})
NATIVE_KINDS = frozenset({"rz", "rx", "h", "cnot"})

UNITARY_QUBIT_LIMIT = 10


@dataclass(frozen=True)
class Gate:
    """One gate application: a kind, its operand qubits, optional angle."""

    kind: str
    qubits: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise ValueError(
                f"{self.kind} takes {GATE_ARITY[self.kind]} operand(s), got {self.qubits!r}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} operands must be distinct, got {self.qubits!r}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits!r}")
        if self.kind in PARAMETRIC_KINDS:
            if self.theta is None or not math.isfinite(self.theta):
                raise ValueError(f"{self.kind} requires a finite angle, got {self.theta!r}")
        elif self.theta is not None:
            raise ValueError(f"{self.kind} takes no angle")


def x(q: int) -> Gate:
    return Gate("x", (q,))


def h(q: int) -> Gate:
    return Gate("h", (q,))


def rx(theta: float, q: int) -> Gate:
    return Gate("rx", (q,), float(theta))


def ry(theta: float, q: int) -> Gate:
    return Gate("ry", (q,), float(theta))


def rz(theta: float, q: int) -> Gate:
    return Gate("rz", (q,), float(theta))


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def rxx(theta: float, a: int, b: int) -> Gate:
    return Gate("rxx", (a, b), float(theta))


def ryy(theta: float, a: int, b: int) -> Gate:
    return Gate("ryy", (a, b), float(theta))


def rzz(theta: float, a: int, b: int) -> Gate:
    return Gate("rzz", (a, b), float(theta))


@dataclass(frozen=True)
class Program:
    """An ordered gate list on a fixed-width qubit register.

    ``measured`` marks a terminal measurement of every qubit in the
    computational basis; it has no effect on :func:`unitary_of`.
    """

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    measured: bool = False

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("a program needs at least one qubit")
        for g in self.gates:
            if any(q >= self.num_qubits for q in g.qubits):
                raise ValueError(f"gate {g} exceeds register width {self.num_qubits}")


_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

_AXIS_MATRIX = {"x": _PAULI_X, "y": _PAULI_Y, "z": _PAULI_Z}


def pauli_matrix(axis: str) -> np.ndarray:
    """2x2 Pauli matrix for axis 'x', 'y' or 'z'."""
    return _AXIS_MATRIX[axis].copy()


def gate_matrix(gate: Gate) -> np.ndarray:
    """The gate's 2x2 or 4x4 matrix.

    For two-qubit gates the first operand is the more significant index
    of the 4-dimensional space.  This table is the single source of
    gate semantics; backend kernels and the reference unitary both
    consume it.
    """
    kind, theta = gate.kind, gate.theta
    if kind == "x":
        return _PAULI_X.copy()
    if kind == "h":
        return _HADAMARD.copy()
    if kind == "cnot":
        return _CNOT.copy()
    half = theta / 2.0
    c, s = math.cos(half), math.sin(half)
    if kind == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "ry":
        return np.array([[c, -s], [s, c]])
    if kind == "rz":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    pauli = _AXIS_MATRIX[kind[1]]
    two_site = np.kron(pauli, pauli)
    return c * np.eye(4, dtype=complex) - 1j * s * two_site


def lower_to_native(program: Program) -> Program:
    """Rewrite every gate into the native set {rz, rx, h, cnot}.

    The rewrite preserves the program's unitary up to global phase.
    """
    out: list[Gate] = []
    for g in program.gates:
        out.extend(_lower_gate(g))
    return Program(program.num_qubits, tuple(out), program.measured)


def _lower_gate(g: Gate) -> list[Gate]:
    kind = g.kind
    if kind in NATIVE_KINDS:
        return [g]
    if kind == "x":
        # equals X up to a global phase of -i
        return [rx(math.pi, g.qubits[0])]
    if kind == "ry":
        # sigma_y = RX(pi/2)^dag sigma_z RX(pi/2)
        q = g.qubits[0]
        return [rx(math.pi / 2, q), rz(g.theta, q), rx(-math.pi / 2, q)]
    a, b = g.qubits
    core = [cnot(a, b), rz(g.theta, b), cnot(a, b)]
    if kind == "rzz":
        return core
    if kind == "rxx":
        return [h(a), h(b), *core, h(a), h(b)]
    if kind == "ryy":
        return [
            rx(math.pi / 2, a),
            rx(math.pi / 2, b),
            *core,
            rx(-math.pi / 2, a),
            rx(-math.pi / 2, b),
        ]
    raise ValueError(f"no lowering rule for {kind}")


def _embed_single(u2: np.ndarray, q: int, n: int) -> np.ndarray:
    return np.kron(np.kron(np.eye(2**q), u2), np.eye(2 ** (n - 1 - q)))


def _embed_pair(u4: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    dim = 2**n
    pa, pb = n - 1 - a, n - 1 - b
    keep = ~((1 << pa) | (1 << pb))
    full = np.zeros((dim, dim), dtype=complex)
    for row in range(dim):
        ra = (row >> pa) & 1
        rb = (row >> pb) & 1
        rest = row & keep
        for ca in (0, 1):
            for cb in (0, 1):
                col = rest | (ca << pa) | (cb << pb)
                full[row, col] = u4[(ra << 1) | rb, (ca << 1) | cb]
    return full


def unitary_of(program: Program) -> np.ndarray:
    """Dense 2^n x 2^n unitary of the program, gates applied left to right.

    Built by embedding each gate matrix into the full space and
    multiplying, independently of the statevector kernels, so the two
    paths can be checked against each other.
    """
    n = program.num_qubits
    if n > UNITARY_QUBIT_LIMIT:
        raise TooLargeError(
            f"dense unitary limited to {UNITARY_QUBIT_LIMIT} qubits, got {n}"
        )
    total = np.eye(2**n, dtype=complex)
    for g in program.gates:
        m = gate_matrix(g)
        if len(g.qubits) == 1:
            full = _embed_single(m, g.qubits[0], n)
        else:
            full = _embed_pair(m, g.qubits[0], g.qubits[1], n)
        total = full @ total
    return total


def phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    """max-entry distance between u and exp(i phi) v, phi chosen so the
    largest-magnitude entry of u matches v in phase."""
    idx = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    pivot = v[idx]
    if abs(pivot) == 0.0:
        return float(np.max(np.abs(u - v)))
    phase = u[idx] / pivot
    phase /= abs(phase)
    return float(np.max(np.abs(u - phase * v)))


_EXPORT_NAME = {"cnot": "cx"}
_IMPORT_NAME = {"cx": "cnot"}


def _format_angle(theta: float) -> str:
    return f"{theta:.17g}"


def export_text(program: Program) -> str:
    """Serialize to the OpenQASM-2.0-style text dialect."""
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{program.num_qubits}];",
    ]
    if program.measured:
        lines.append(f"creg c[{program.num_qubits}];")
    for g in program.gates:
        name = _EXPORT_NAME.get(g.kind, g.kind)
        operands = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind in PARAMETRIC_KINDS:
            lines.append(f"{name}({_format_angle(g.theta)}) {operands};")
        else:
            lines.append(f"{name} {operands};")
    if program.measured:
        lines.append("measure q -> c;")
    return "\n".join(lines) + "\n"


_QREG_RE = re.compile(r"^qreg\s+q\[(\d+)\]\s*;$")
_CREG_RE = re.compile(r"^creg\s+c\[(\d+)\]\s*;$")
_GATE_RE = re.compile(
    r"^(?P<name>[a-z]+)\s*(?:\((?P<theta>[^()]+)\))?\s*"
    r"q\[(?P<a>\d+)\]\s*(?:,\s*q\[(?P<b>\d+)\])?\s*;$"
)
_MEASURE_RE = re.compile(r"^measure\s+q\s*->\s*c\s*;$")


def import_text(text: str) -> Program:
    """Parse the text dialect back into a :class:`Program`.

    Raises :class:`CircuitSyntaxError` (with a line number),
    :class:`UnknownGateError` or :class:`QubitOutOfRangeError` on bad
    input.
    """
    num_qubits: int | None = None
    gates: list[Gate] = []
    measured = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        if line == "OPENQASM 2.0;" or line.startswith("include "):
            continue
        m = _QREG_RE.match(line)
        if m:
            if num_qubits is not None:
                raise CircuitSyntaxError("duplicate qreg declaration", lineno)
            num_qubits = int(m.group(1))
            if num_qubits < 1:
                raise CircuitSyntaxError("register must hold at least one qubit", lineno)
            continue
        if _CREG_RE.match(line):
            continue
        if _MEASURE_RE.match(line):
            measured = True
            continue
        if num_qubits is None:
            raise CircuitSyntaxError("gate before qreg declaration", lineno)
        if measured:
            raise CircuitSyntaxError("gate after terminal measurement", lineno)
        m = _GATE_RE.match(line)
        if m is None:
            raise CircuitSyntaxError(f"unparseable statement {line!r}", lineno)
        name = m.group("name")
        kind = _IMPORT_NAME.get(name, name)
        if kind not in GATE_ARITY:
            raise UnknownGateError(f"unknown gate {name!r}", lineno)
        operands = [int(m.group("a"))]
        if m.group("b") is not None:
            operands.append(int(m.group("b")))
        if len(operands) != GATE_ARITY[kind]:
            raise CircuitSyntaxError(
                f"{name} takes {GATE_ARITY[kind]} operand(s)", lineno
            )
        for q in operands:
            if q >= num_qubits:
                raise QubitOutOfRangeError(
                    f"q[{q}] exceeds register of size {num_qubits}", lineno
                )
        theta_text = m.group("theta")
        if kind in PARAMETRIC_KINDS:
            if theta_text is None:
                raise CircuitSyntaxError(f"{name} requires an angle", lineno)
            try:
                theta = float(theta_text)
            except ValueError:
                raise CircuitSyntaxError(
                    f"bad angle {theta_text!r}", lineno
                ) from None
            if not math.isfinite(theta):
                raise CircuitSyntaxError(f"non-finite angle {theta_text!r}", lineno)
            gates.append(Gate(kind, tuple(operands), theta))
        else:
            if theta_text is not None:
                raise CircuitSyntaxError(f"{name} takes no angle", lineno)
            gates.append(Gate(kind, tuple(operands)))
    if num_qubits is None:
        raise CircuitSyntaxError("missing qreg declaration")
    return Program(num_qubits, tuple(gates), measured)
