"""Local statevector execution, expectation values and sampling.

Basis-state indices follow the package-wide convention: qubit 0 (spin
site 1) is the most significant bit, so the bitstring for index ``i``
on ``n`` qubits is ``format(i, f"0{n}b")`` with character j describing
qubit j ('1' means spin down).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BasisMismatchError, TooLargeError
from .hamiltonian import PauliTerm
from .ir import Gate, Program, gate_matrix, pauli_matrix

STATEVECTOR_QUBIT_LIMIT = 24


@dataclass(frozen=True)
class Statevector:
    """Amplitudes of an n-qubit pure state, unit norm up to float error."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class Counts:
    """Measurement outcomes: bitstring -> occurrences."""

    counts: dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def zero_state(num_qubits: int) -> np.ndarray:
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return amps


def product_state(spins: Sequence[str]) -> Statevector:
    """|up...> style product state; ``spins`` holds 'up'/'down' per site."""
    n = len(spins)
    index = 0
    for spin in spins:
        if spin not in ("up", "down"):
            raise ValueError(f"spins must be 'up' or 'down', got {spin!r}")
        index = (index << 1) | (1 if spin == "down" else 0)
    amps = np.zeros(2**n, dtype=complex)
    amps[index] = 1.0
    return Statevector(n, amps)


def _apply_single(amps: np.ndarray, u2: np.ndarray, q: int, n: int) -> np.ndarray:
    t = amps.reshape((2,) * n)
    t = np.tensordot(u2, t, axes=([1], [q]))
    return np.moveaxis(t, 0, q).reshape(-1)


def _apply_pair(amps: np.ndarray, u4: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    t = amps.reshape((2,) * n)
    m = u4.reshape(2, 2, 2, 2)
    t = np.tensordot(m, t, axes=([2, 3], [a, b]))
    return np.moveaxis(t, (0, 1), (a, b)).reshape(-1)


def apply_gate(amps: np.ndarray, gate: Gate, num_qubits: int) -> np.ndarray:
    """Apply one gate to an amplitude vector, returning the new vector.

    Amplitudes are updated through axis-wise tensor contractions; no
    2^n x 2^n matrix is ever formed.
    """
    m = gate_matrix(gate)
    if len(gate.qubits) == 1:
        return _apply_single(amps, m, gate.qubits[0], num_qubits)
    a, b = gate.qubits
    return _apply_pair(amps, m, a, b, num_qubits)


def run_statevector(
    program: Program, initial: Statevector | None = None, max_qubits: int = STATEVECTOR_QUBIT_LIMIT
) -> Statevector:
    """Execute a program on |0...0> (or a supplied initial state)."""
    n = program.num_qubits
    if n > max_qubits:
        raise TooLargeError(f"statevector simulation limited to {max_qubits} qubits, got {n}")
    if initial is None:
        amps = zero_state(n)
    else:
        if initial.num_qubits != n:
            raise ValueError("initial state width does not match the program")
        amps = initial.amplitudes.astype(complex, copy=True)
    for gate in program.gates:
        amps = apply_gate(amps, gate, n)
    return Statevector(n, amps)


def apply_pauli_string(
    amps: np.ndarray, factors: Iterable[tuple[int, str]], num_qubits: int
) -> np.ndarray:
    """Apply a product of single-site Pauli operators (sites are 1-based)."""
    out = amps
    for site, axis in factors:
        out = _apply_single(out, pauli_matrix(axis), site - 1, num_qubits)
    return out


def expectation(state: Statevector, terms: Sequence[PauliTerm]) -> float:
    """<state| sum of terms |state>, exactly, as a real number.

    The value of a Hermitian observable; any imaginary residue from
    float arithmetic is discarded.
    """
    amps = state.amplitudes
    total = 0.0 + 0.0j
    for term in terms:
        if term.factors:
            shifted = apply_pauli_string(amps, term.factors, state.num_qubits)
            total += term.coefficient * np.vdot(amps, shifted)
        else:
            total += term.coefficient * np.vdot(amps, amps)
    return float(total.real)


def sample_counts(state: Statevector, shots: int, seed: int) -> Counts:
    """Draw ``shots`` computational-basis outcomes from |amplitude|^2.

    Reproducible: the same (state, shots, seed) gives identical counts.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    probs = np.abs(state.amplitudes) ** 2
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    n = state.num_qubits
    counts = {
        format(i, f"0{n}b"): int(c) for i, c in enumerate(draws) if c > 0
    }
    return Counts(counts)


def outcome_value(bitstring: str, terms: Sequence[PauliTerm]) -> float:
    """Observable value a single measured bitstring contributes.

    Only valid for observables whose factors are all z-axis (plus
    identity offsets); '1' in the bitstring means eigenvalue -1.
    """
    value = 0.0
    for term in terms:
        product = term.coefficient
        for site, axis in term.factors:
            if axis != "z":
                raise BasisMismatchError(
                    f"term with sigma_{axis} cannot be read from z-basis counts"
                )
            if bitstring[site - 1] == "1":
                product = -product
        value += product
    return value


def estimate_observable_from_counts(counts: Counts, terms: Sequence[PauliTerm]) -> float:
    """Sample mean of a z-diagonal observable over measured outcomes.

    Raises :class:`BasisMismatchError` when a term involves sigma_x or
    sigma_y; callers must rotate such terms into the z basis before
    measuring.
    """
    total = counts.total
    if total == 0:
        raise ValueError("counts are empty")
    mean = 0.0
    for bits, c in counts.counts.items():
        mean += c * outcome_value(bits, terms)
    return mean / total


def estimate_with_sigma(
    counts: Counts, terms: Sequence[PauliTerm]
) -> tuple[float, float]:
    """Sample mean and standard error of a z-diagonal observable."""
    total = counts.total
    mean = 0.0
    second = 0.0
    for bits, c in counts.counts.items():
        v = outcome_value(bits, terms)
        mean += c * v
        second += c * v * v
    mean /= total
    second /= total
    variance = max(second - mean * mean, 0.0)
    return mean, float(np.sqrt(variance / total))
