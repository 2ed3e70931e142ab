"""First-order product-formula circuits for real-time evolution.

A step from t to t+dt applies, per Hamiltonian term c, the rotation
exp(-i c dt P) with all coefficients sampled at the step midpoint.
Higher-order splittings are an extension point: add an alternative
step builder here and dispatch on an order parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import ir
from .hamiltonian import HeisenbergHamiltonian, snapshot
from .ir import Gate, Program


@dataclass(frozen=True)
class TrotterParams:
    """Step-count discretization of t_max into num_steps equal slices."""

    total_time: float
    num_steps: int

    def __post_init__(self):
        if self.total_time < 0.0:
            raise ValueError(f"total_time must be >= 0, got {self.total_time}")
        if self.num_steps < 1:
            raise ValueError(f"num_steps must be positive, got {self.num_steps}")

    @property
    def dt(self) -> float:
        return self.total_time / self.num_steps


_BOND_GATE = {"x": ir.rxx, "y": ir.ryy, "z": ir.rzz}
_FIELD_GATE = {"x": ir.rx, "y": ir.ry, "z": ir.rz}


def trotter_step(hamiltonian: HeisenbergHamiltonian, t_eval: float, dt: float) -> Program:
    """One first-order step, coefficients frozen at time t_eval.

    Terms are emitted in the snapshot order: x bonds left to right,
    then y and z bonds, then x, y, z fields.  A term c sigma sigma
    becomes a two-site rotation with angle 2 c dt, a field term a
    single-site rotation with the same angle.
    """
    gates: list[Gate] = []
    for term in snapshot(hamiltonian, t_eval):
        angle = 2.0 * term.coefficient * dt
        sites = [s for s, _ in term.factors]
        axis = term.factors[0][1]
        if len(sites) == 2:
            gates.append(_BOND_GATE[axis](angle, sites[0] - 1, sites[1] - 1))
        else:
            gates.append(_FIELD_GATE[axis](angle, sites[0] - 1))
    return Program(hamiltonian.num_spins, tuple(gates))


def state_preparation_gates(initial_state: Sequence[str]) -> tuple[Gate, ...]:
    """X gates flipping every 'down' site of a product state."""
    return tuple(ir.x(q) for q, spin in enumerate(initial_state) if spin == "down")


def build_evolution_program(
    hamiltonian: HeisenbergHamiltonian,
    params: TrotterParams,
    num_steps: int,
    initial_state: Sequence[str],
) -> Program:
    """Preparation plus ``num_steps`` Trotter steps, each a fresh run from t=0.

    Step j (1-based) evaluates coefficients at the midpoint
    (j - 1/2) dt, which keeps time-dependent schedules first-order
    accurate.
    """
    if not 0 <= num_steps <= params.num_steps:
        raise ValueError(
            f"num_steps must lie in [0, {params.num_steps}], got {num_steps}"
        )
    if len(initial_state) != hamiltonian.num_spins:
        raise ValueError("initial state length does not match the chain")
    gates = list(state_preparation_gates(initial_state))
    dt = params.dt
    for j in range(1, num_steps + 1):
        t_eval = (j - 0.5) * dt
        gates.extend(trotter_step(hamiltonian, t_eval, dt).gates)
    return Program(hamiltonian.num_spins, tuple(gates))
