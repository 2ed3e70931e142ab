"""Circuit-level real- and imaginary-time evolution of 1D spin chains.

The package turns a plain-text description of a time-dependent
Heisenberg chain into quantum circuits, optimizes them, executes them
on a built-in statevector backend and post-processes the results into
observable series, CSV tables and SVG plots.
"""

from importlib import metadata

try:
    __version__ = metadata.version("spinsim")
except metadata.PackageNotFoundError:
    __version__ = "0.0.0"

from .backend import (
    Counts,
    Statevector,
    estimate_observable_from_counts,
    expectation,
    product_state,
    run_statevector,
    sample_counts,
)
from .config import (
    CoefficientSchedule,
    ConstantSchedule,
    GaussianPulseSchedule,
    LinearRampSchedule,
    RandomUniformSchedule,
    SimulationConfig,
    build_hamiltonian,
    parse_input,
    serialize,
)
from .hamiltonian import (
    HeisenbergHamiltonian,
    PauliTerm,
    dense_matrix,
    snapshot,
)
from .ir import (
    Gate,
    Program,
    export_text,
    import_text,
    lower_to_native,
    phase_aligned_distance,
    unitary_of,
)
from .observables import (
    ResultSeries,
    energy_observable,
    excitation_displacement_observable,
    site_magnetization_observable,
    write_csv,
    write_plot,
)
from .optimizer import optimize
from .oracle import evolve_exact, evolve_imaginary_exact, ground_state
from .qite import QiteParams, QiteStepReport, fit_step_unitary, run_qite
from .trotter import TrotterParams, build_evolution_program, trotter_step

__all__ = [
    "CoefficientSchedule",
    "ConstantSchedule",
    "Counts",
    "Gate",
    "GaussianPulseSchedule",
    "HeisenbergHamiltonian",
    "LinearRampSchedule",
    "PauliTerm",
    "Program",
    "QiteParams",
    "QiteStepReport",
    "RandomUniformSchedule",
    "ResultSeries",
    "SimulationConfig",
    "Statevector",
    "TrotterParams",
    "build_evolution_program",
    "build_hamiltonian",
    "dense_matrix",
    "energy_observable",
    "estimate_observable_from_counts",
    "evolve_exact",
    "evolve_imaginary_exact",
    "excitation_displacement_observable",
    "expectation",
    "export_text",
    "fit_step_unitary",
    "ground_state",
    "import_text",
    "lower_to_native",
    "optimize",
    "parse_input",
    "phase_aligned_distance",
    "product_state",
    "run_qite",
    "run_statevector",
    "sample_counts",
    "serialize",
    "site_magnetization_observable",
    "snapshot",
    "trotter_step",
    "unitary_of",
    "write_csv",
    "write_plot",
]
