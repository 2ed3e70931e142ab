"""Peephole circuit optimization.

Three rewrite rules are applied until none fires:

1. merge same-kind rotations that meet on their operand wires,
   RA(t1) RA(t2) -> RA(t1 + t2);
2. drop rotations whose angle is a multiple of 2 pi (within 1e-12),
   which equal the identity up to global phase;
3. cancel adjacent identical self-inverse gates (h, x, cnot).

Two gates "meet" when no gate between them touches any of their
qubits; gates on disjoint wires are skipped over.  Rules never add
gates, so the gate count is monotonically non-increasing and the
rewrite terminates.
"""

from __future__ import annotations

import math

from .ir import PARAMETRIC_KINDS, SELF_INVERSE_KINDS, Gate, Program

ZERO_ANGLE_TOLERANCE = 1e-12


def _is_identity_angle(theta: float) -> bool:
    remainder = math.fmod(theta, 2.0 * math.pi)
    return min(abs(remainder), 2.0 * math.pi - abs(remainder)) <= ZERO_ANGLE_TOLERANCE


def _wire_successor(gates: list[Gate], start: int) -> int | None:
    """Index of the first later gate sharing a qubit with gates[start]."""
    operands = set(gates[start].qubits)
    for j in range(start + 1, len(gates)):
        if operands & set(gates[j].qubits):
            return j
    return None


def _merge_rotations(gates: list[Gate]) -> bool:
    i = 0
    changed = False
    while i < len(gates):
        g = gates[i]
        if g.kind not in PARAMETRIC_KINDS:
            i += 1
            continue
        j = _wire_successor(gates, i)
        if j is not None and gates[j].kind == g.kind and gates[j].qubits == g.qubits:
            gates[i] = Gate(g.kind, g.qubits, g.theta + gates[j].theta)
            del gates[j]
            changed = True
        else:
            i += 1
    return changed


def _drop_identity_rotations(gates: list[Gate]) -> bool:
    kept = [
        g
        for g in gates
        if not (g.kind in PARAMETRIC_KINDS and _is_identity_angle(g.theta))
    ]
    if len(kept) != len(gates):
        gates[:] = kept
        return True
    return False


def _cancel_self_inverse_pairs(gates: list[Gate]) -> bool:
    i = 0
    changed = False
    while i < len(gates):
        g = gates[i]
        if g.kind not in SELF_INVERSE_KINDS:
            i += 1
            continue
        j = _wire_successor(gates, i)
        if j is not None and gates[j] == g:
            del gates[j]
            del gates[i]
            changed = True
            i = max(i - 1, 0)
        else:
            i += 1
    return changed


def optimize(program: Program) -> Program:
    """Apply the peephole rules to a fixed point.

    The result computes the same unitary up to global phase, never has
    more gates than the input, and is itself a fixed point, so
    ``optimize`` is idempotent.
    """
    gates = list(program.gates)
    changed = True
    while changed:
        merged = _merge_rotations(gates)
        dropped = _drop_identity_rotations(gates)
        cancelled = _cancel_self_inverse_pairs(gates)
        changed = merged or dropped or cancelled
    return Program(program.num_qubits, tuple(gates), program.measured)
