"""Plain-text simulation descriptions: parsing, validation, serialization.

An input file is a sequence of ``key: value`` lines.  Lines whose first
non-blank character is ``#`` are comments, blank lines are skipped, and
both LF and CRLF endings are accepted.  Keys may appear in any order
but at most once.  The full key set with defaults:

==================  =====================================================
key                 meaning (default)
==================  =====================================================
num_spins           chain length, required
mode                real-time | imaginary-time (real-time)
total_time          evolved time t_max, or beta_max in imaginary mode (1.0)
num_steps           number of Trotter or QITE steps (10)
J_x J_y J_z         bond coefficient schedules (0)
h_x h_y h_z         field coefficient schedules (0)
initial_state       all-up | flip-first | comma list of up/down (all-up)
QCQS                QS (local statevector) | export-only (QS)
shots               0 for exact expectations, else samples per circuit (0)
observable          site-magnetization(x|y|z) | excitation-displacement |
                    energy (site-magnetization(z))
optimizer_level     none | peephole (peephole)
constant_depth      True | False; True parses but is not executable (False)
rng_seed            integer seed for random schedules and sampling (unset)
output_dir          artifact directory for the command line driver (results)
==================  =====================================================

Coupling and field values are either a scalar (broadcast over every
bond or site), a comma-separated per-bond/per-site list, or one of the
schedule forms ``constant(v)``, ``linear-ramp(v0, v1)``,
``gaussian-pulse(amplitude, center, width)`` and
``random-uniform(lo, hi[, seed])``.  The ramp runs over [0, total_time]
and random-uniform draws one value per bond or site when the
Hamiltonian is built, reproducibly from its seed (falling back to
rng_seed when none is given inline).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConflictingKeysError,
    MissingRequiredKeyError,
    UnknownKeyError,
    ValueOutOfRangeError,
)
from .hamiltonian import (
    AXES,
    ConstantCoefficient,
    HeisenbergHamiltonian,
    PulseCoefficient,
    RampCoefficient,
)


@dataclass(frozen=True)
class ConstantSchedule:
    """Scalar broadcast to every index, or an explicit per-index tuple."""

    values: float | tuple[float, ...]

    def __post_init__(self):
        # a one-entry list means the same thing as a scalar; normalizing
        # here keeps serialize/parse round-trips exact
        if isinstance(self.values, tuple) and len(self.values) == 1:
            object.__setattr__(self, "values", self.values[0])

    @property
    def is_time_dependent(self) -> bool:
        return False

    @property
    def is_zero(self) -> bool:
        if isinstance(self.values, tuple):
            return all(v == 0.0 for v in self.values)
        return self.values == 0.0

    def resolve(self, count: int, total_time: float, fallback_seed: int):
        if isinstance(self.values, tuple):
            if len(self.values) != count:
                raise ConflictingKeysError(
                    f"list of {len(self.values)} values where {count} are needed"
                )
            return tuple(ConstantCoefficient(v) for v in self.values)
        return tuple(ConstantCoefficient(self.values) for _ in range(count))

    def render(self) -> str:
        if isinstance(self.values, tuple):
            return ", ".join(_format_number(v) for v in self.values)
        return _format_number(self.values)


@dataclass(frozen=True)
class LinearRampSchedule:
    """Interpolates from start at t=0 to stop at t=total_time."""

    start: float
    stop: float

    @property
    def is_time_dependent(self) -> bool:
        return self.start != self.stop

    @property
    def is_zero(self) -> bool:
        return self.start == 0.0 and self.stop == 0.0

    def resolve(self, count: int, total_time: float, fallback_seed: int):
        coeff = RampCoefficient(self.start, self.stop, total_time)
        return tuple(coeff for _ in range(count))

    def render(self) -> str:
        return f"linear-ramp({_format_number(self.start)}, {_format_number(self.stop)})"


@dataclass(frozen=True)
class GaussianPulseSchedule:
    amplitude: float
    center: float
    width: float

    @property
    def is_time_dependent(self) -> bool:
        return self.amplitude != 0.0

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    def resolve(self, count: int, total_time: float, fallback_seed: int):
        coeff = PulseCoefficient(self.amplitude, self.center, self.width)
        return tuple(coeff for _ in range(count))

    def render(self) -> str:
        parts = (self.amplitude, self.center, self.width)
        return f"gaussian-pulse({', '.join(_format_number(v) for v in parts)})"


@dataclass(frozen=True)
class RandomUniformSchedule:
    """One uniform draw from [low, high] per index, fixed at build time.

    When ``seed`` is None the draw is seeded from the config's rng_seed
    together with a stable per-key salt, so distinct keys get distinct
    but reproducible values.
    """

    low: float
    high: float
    seed: int | None = None

    @property
    def is_time_dependent(self) -> bool:
        return False

    @property
    def is_zero(self) -> bool:
        return False

    def resolve(self, count: int, total_time: float, fallback_seed: int):
        seed = self.seed if self.seed is not None else fallback_seed
        rng = np.random.default_rng(seed)
        draws = rng.uniform(self.low, self.high, size=count)
        return tuple(ConstantCoefficient(float(v)) for v in draws)

    def render(self) -> str:
        parts = [_format_number(self.low), _format_number(self.high)]
        if self.seed is not None:
            parts.append(str(self.seed))
        return f"random-uniform({', '.join(parts)})"


CoefficientSchedule = (
    ConstantSchedule | LinearRampSchedule | GaussianPulseSchedule | RandomUniformSchedule
)

ZERO_SCHEDULE = ConstantSchedule(0.0)

MODES = ("real-time", "imaginary-time")
BACKEND_MODES = ("QS", "export-only")
OPTIMIZER_LEVELS = ("none", "peephole")
OBSERVABLES = (
    "site-magnetization(x)",
    "site-magnetization(y)",
    "site-magnetization(z)",
    "excitation-displacement",
    "energy",
)

DEFAULT_OUTPUT_DIR = "results"

# salt per schedule-carrying key, used to derive per-key random seeds
_SCHEDULE_KEY_SALT = {"J_x": 0, "J_y": 1, "J_z": 2, "h_x": 3, "h_y": 4, "h_z": 5}


@dataclass(frozen=True)
class SimulationConfig:
    """A fully validated simulation description."""

    num_spins: int
    mode: str = "real-time"
    total_time: float = 1.0
    num_steps: int = 10
    j_x: CoefficientSchedule = ZERO_SCHEDULE
    j_y: CoefficientSchedule = ZERO_SCHEDULE
    j_z: CoefficientSchedule = ZERO_SCHEDULE
    h_x: CoefficientSchedule = ZERO_SCHEDULE
    h_y: CoefficientSchedule = ZERO_SCHEDULE
    h_z: CoefficientSchedule = ZERO_SCHEDULE
    initial_state: tuple[str, ...] = ()
    backend_mode: str = "QS"
    shots: int = 0
    observable: str = "site-magnetization(z)"
    optimizer_level: str = "peephole"
    constant_depth: bool = False
    rng_seed: int | None = None
    output_dir: str = DEFAULT_OUTPUT_DIR

    def __post_init__(self):
        if not self.initial_state:
            object.__setattr__(self, "initial_state", ("up",) * self.num_spins)
        _validate_config(self)

    def schedule(self, kind: str, axis: str) -> CoefficientSchedule:
        """The J (kind='bond') or h (kind='field') schedule for an axis."""
        prefix = "j" if kind == "bond" else "h"
        return getattr(self, f"{prefix}_{axis}")


def _validate_config(cfg: SimulationConfig) -> None:
    if cfg.num_spins < 1:
        raise ValueOutOfRangeError(f"num_spins must be positive, got {cfg.num_spins}")
    if cfg.mode not in MODES:
        raise ValueOutOfRangeError(f"mode must be one of {MODES}, got {cfg.mode!r}")
    if cfg.total_time < 0.0 or not math.isfinite(cfg.total_time):
        raise ValueOutOfRangeError(f"total_time must be finite and >= 0, got {cfg.total_time}")
    if cfg.num_steps < 1:
        raise ValueOutOfRangeError(f"num_steps must be positive, got {cfg.num_steps}")
    if cfg.backend_mode not in BACKEND_MODES:
        raise ValueOutOfRangeError(
            f"QCQS must be one of {BACKEND_MODES}, got {cfg.backend_mode!r}"
        )
    if cfg.shots < 0:
        raise ValueOutOfRangeError(f"shots must be >= 0, got {cfg.shots}")
    if cfg.observable not in OBSERVABLES:
        raise ValueOutOfRangeError(f"unknown observable {cfg.observable!r}")
    if cfg.optimizer_level not in OPTIMIZER_LEVELS:
        raise ValueOutOfRangeError(
            f"optimizer_level must be one of {OPTIMIZER_LEVELS}, got {cfg.optimizer_level!r}"
        )
    if len(cfg.initial_state) != cfg.num_spins:
        raise ConflictingKeysError(
            f"initial_state lists {len(cfg.initial_state)} spins for a chain of {cfg.num_spins}"
        )
    for spin in cfg.initial_state:
        if spin not in ("up", "down"):
            raise ValueOutOfRangeError(f"initial_state entries must be up or down, got {spin!r}")
    if cfg.rng_seed is not None and cfg.rng_seed < 0:
        raise ValueOutOfRangeError(f"rng_seed must be >= 0, got {cfg.rng_seed}")
    n = cfg.num_spins
    for key, count in _schedule_slots(n):
        spec = getattr(cfg, _FIELD_OF_KEY[key])
        if isinstance(spec, ConstantSchedule) and isinstance(spec.values, tuple):
            if len(spec.values) != count:
                raise ConflictingKeysError(
                    f"{key} lists {len(spec.values)} values but the chain has {count} "
                    f"{'bonds' if key.startswith('J') else 'sites'}"
                )
        if isinstance(spec, GaussianPulseSchedule) and spec.width <= 0.0:
            raise ValueOutOfRangeError(f"{key}: gaussian-pulse width must be positive")
        if isinstance(spec, RandomUniformSchedule):
            if spec.low > spec.high:
                raise ValueOutOfRangeError(f"{key}: random-uniform bounds are reversed")
            if spec.seed is not None and spec.seed < 0:
                raise ValueOutOfRangeError(f"{key}: random-uniform seed must be >= 0")
        if cfg.mode == "imaginary-time" and spec.is_time_dependent:
            raise ConflictingKeysError(
                f"{key} is time dependent but imaginary-time evolution needs a static Hamiltonian"
            )


_FIELD_OF_KEY = {
    "J_x": "j_x",
    "J_y": "j_y",
    "J_z": "j_z",
    "h_x": "h_x",
    "h_y": "h_y",
    "h_z": "h_z",
}


def _schedule_slots(num_spins: int) -> list[tuple[str, int]]:
    slots = [(f"J_{a}", num_spins - 1) for a in AXES]
    slots += [(f"h_{a}", num_spins) for a in AXES]
    return slots


_NUMBER_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_SCHEDULE_RE = re.compile(r"^(?P<name>[a-z-]+)\s*\(\s*(?P<args>[^()]*)\s*\)$")


def _format_number(v: float) -> str:
    return f"{v:.17g}"


def _parse_number(text: str, key: str, line: int | None) -> float:
    if not _NUMBER_RE.match(text):
        raise ValueOutOfRangeError(f"{key}: expected a number, got {text!r}", line)
    return float(text)


def _parse_int(text: str, key: str, line: int | None) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueOutOfRangeError(f"{key}: expected an integer, got {text!r}", line) from None


def _parse_schedule(text: str, key: str, line: int | None) -> CoefficientSchedule:
    m = _SCHEDULE_RE.match(text)
    if m is None:
        parts = [p.strip() for p in text.split(",")]
        values = tuple(_parse_number(p, key, line) for p in parts)
        if len(values) == 1:
            return ConstantSchedule(values[0])
        return ConstantSchedule(values)
    name = m.group("name")
    args = [a.strip() for a in m.group("args").split(",")] if m.group("args").strip() else []
    if name == "constant":
        if len(args) != 1:
            raise ValueOutOfRangeError(f"{key}: constant(v) takes one argument", line)
        return ConstantSchedule(_parse_number(args[0], key, line))
    if name == "linear-ramp":
        if len(args) != 2:
            raise ValueOutOfRangeError(f"{key}: linear-ramp(v0, v1) takes two arguments", line)
        return LinearRampSchedule(*(_parse_number(a, key, line) for a in args))
    if name == "gaussian-pulse":
        if len(args) != 3:
            raise ValueOutOfRangeError(
                f"{key}: gaussian-pulse(amplitude, center, width) takes three arguments", line
            )
        amp, center, width = (_parse_number(a, key, line) for a in args)
        if width <= 0.0:
            raise ValueOutOfRangeError(f"{key}: gaussian-pulse width must be positive", line)
        return GaussianPulseSchedule(amp, center, width)
    if name == "random-uniform":
        if len(args) not in (2, 3):
            raise ValueOutOfRangeError(
                f"{key}: random-uniform(lo, hi[, seed]) takes two or three arguments", line
            )
        low = _parse_number(args[0], key, line)
        high = _parse_number(args[1], key, line)
        if low > high:
            raise ValueOutOfRangeError(f"{key}: random-uniform bounds are reversed", line)
        seed = _parse_int(args[2], key, line) if len(args) == 3 else None
        return RandomUniformSchedule(low, high, seed)
    raise ValueOutOfRangeError(f"{key}: unknown schedule form {name!r}", line)


def _parse_initial_state(text: str, num_spins: int, line: int | None) -> tuple[str, ...]:
    if text == "all-up":
        return ("up",) * num_spins
    if text == "flip-first":
        if num_spins < 1:
            raise ValueOutOfRangeError("flip-first needs at least one spin", line)
        return ("down",) + ("up",) * (num_spins - 1)
    spins = tuple(p.strip() for p in text.split(","))
    for spin in spins:
        if spin not in ("up", "down"):
            raise ValueOutOfRangeError(
                f"initial_state entries must be up or down, got {spin!r}", line
            )
    if len(spins) != num_spins:
        raise ConflictingKeysError(
            f"initial_state lists {len(spins)} spins for a chain of {num_spins}", line
        )
    return spins


_KNOWN_KEYS = (
    "num_spins",
    "mode",
    "total_time",
    "num_steps",
    "J_x",
    "J_y",
    "J_z",
    "h_x",
    "h_y",
    "h_z",
    "initial_state",
    "QCQS",
    "shots",
    "observable",
    "optimizer_level",
    "constant_depth",
    "rng_seed",
    "output_dir",
)


def parse_input(text: str) -> SimulationConfig:
    """Parse an input description into a validated config.

    Problems raise a :class:`~spinsim.errors.ConfigError` subclass
    carrying the offending line number where one exists.
    """
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ValueOutOfRangeError(f"expected 'key: value', got {line!r}", lineno)
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key not in _KNOWN_KEYS:
            raise UnknownKeyError(f"unknown key {key!r}", lineno)
        if key in entries:
            raise ConflictingKeysError(
                f"{key!r} already set on line {entries[key][1]}", lineno
            )
        if not value:
            raise ValueOutOfRangeError(f"{key}: empty value", lineno)
        entries[key] = (value, lineno)

    if "num_spins" not in entries:
        raise MissingRequiredKeyError("num_spins is required")
    value, line = entries.pop("num_spins")
    num_spins = _parse_int(value, "num_spins", line)
    if num_spins < 1:
        raise ValueOutOfRangeError(f"num_spins must be positive, got {num_spins}", line)

    kwargs = {}
    for key, (value, line) in entries.items():
        if key == "mode":
            if value not in MODES:
                raise ValueOutOfRangeError(f"mode must be one of {MODES}, got {value!r}", line)
            kwargs["mode"] = value
        elif key == "total_time":
            total_time = _parse_number(value, key, line)
            if total_time < 0.0:
                raise ValueOutOfRangeError(f"total_time must be >= 0, got {value}", line)
            kwargs["total_time"] = total_time
        elif key == "num_steps":
            num_steps = _parse_int(value, key, line)
            if num_steps < 1:
                raise ValueOutOfRangeError(f"num_steps must be positive, got {value}", line)
            kwargs["num_steps"] = num_steps
        elif key in _FIELD_OF_KEY:
            kwargs[_FIELD_OF_KEY[key]] = _parse_schedule(value, key, line)
        elif key == "initial_state":
            kwargs["initial_state"] = _parse_initial_state(value, num_spins, line)
        elif key == "QCQS":
            if value not in BACKEND_MODES:
                hint = " (cloud hardware execution is not part of this package)" if value == "QC" else ""
                raise ValueOutOfRangeError(
                    f"QCQS must be one of {BACKEND_MODES}, got {value!r}{hint}", line
                )
            kwargs["backend_mode"] = value
        elif key == "shots":
            shots = _parse_int(value, key, line)
            if shots < 0:
                raise ValueOutOfRangeError(f"shots must be >= 0, got {value}", line)
            kwargs["shots"] = shots
        elif key == "observable":
            if value not in OBSERVABLES:
                raise ValueOutOfRangeError(
                    f"observable must be one of {OBSERVABLES}, got {value!r}", line
                )
            kwargs["observable"] = value
        elif key == "optimizer_level":
            if value not in OPTIMIZER_LEVELS:
                raise ValueOutOfRangeError(
                    f"optimizer_level must be one of {OPTIMIZER_LEVELS}, got {value!r}", line
                )
            kwargs["optimizer_level"] = value
        elif key == "constant_depth":
            lowered = value.lower()
            if lowered not in ("true", "false"):
                raise ValueOutOfRangeError(
                    f"constant_depth must be True or False, got {value!r}", line
                )
            kwargs["constant_depth"] = lowered == "true"
        elif key == "rng_seed":
            seed = _parse_int(value, key, line)
            if seed < 0:
                raise ValueOutOfRangeError(f"rng_seed must be >= 0, got {value}", line)
            kwargs["rng_seed"] = seed
        elif key == "output_dir":
            kwargs["output_dir"] = value

    return SimulationConfig(num_spins=num_spins, **kwargs)


def serialize(cfg: SimulationConfig) -> str:
    """Render a config back to input-file text.

    ``parse_input(serialize(cfg)) == cfg`` for every valid config.
    """
    lines = [
        f"num_spins: {cfg.num_spins}",
        f"mode: {cfg.mode}",
        f"total_time: {_format_number(cfg.total_time)}",
        f"num_steps: {cfg.num_steps}",
    ]
    for key, field_name in _FIELD_OF_KEY.items():
        lines.append(f"{key}: {getattr(cfg, field_name).render()}")
    lines.append(f"initial_state: {','.join(cfg.initial_state)}")
    lines.append(f"QCQS: {cfg.backend_mode}")
    lines.append(f"shots: {cfg.shots}")
    lines.append(f"observable: {cfg.observable}")
    lines.append(f"optimizer_level: {cfg.optimizer_level}")
    lines.append(f"constant_depth: {'True' if cfg.constant_depth else 'False'}")
    if cfg.rng_seed is not None:
        lines.append(f"rng_seed: {cfg.rng_seed}")
    lines.append(f"output_dir: {cfg.output_dir}")
    return "\n".join(lines) + "\n"


def build_hamiltonian(cfg: SimulationConfig) -> HeisenbergHamiltonian:
    """Materialize the chain Hamiltonian described by a config.

    Random-uniform schedules are drawn here, once per bond or site, so
    the result is deterministic for a given (config, rng_seed) pair.
    """
    n = cfg.num_spins
    base_seed = cfg.rng_seed if cfg.rng_seed is not None else 0
    bond: dict[tuple[str, int], object] = {}
    field: dict[tuple[str, int], object] = {}
    for axis in AXES:
        spec = cfg.schedule("bond", axis)
        if not spec.is_zero and n > 1:
            salt = _SCHEDULE_KEY_SALT[f"J_{axis}"]
            coeffs = spec.resolve(n - 1, cfg.total_time, _derived_seed(base_seed, salt))
            for i, coeff in enumerate(coeffs, start=1):
                bond[(axis, i)] = coeff
        spec = cfg.schedule("field", axis)
        if not spec.is_zero:
            salt = _SCHEDULE_KEY_SALT[f"h_{axis}"]
            coeffs = spec.resolve(n, cfg.total_time, _derived_seed(base_seed, salt))
            for i, coeff in enumerate(coeffs, start=1):
                field[(axis, i)] = coeff
    return HeisenbergHamiltonian(n, bond, field)


def _derived_seed(base_seed: int, salt: int) -> int:
    # stable per-key seed; SeedSequence keeps draws independent across keys
    return int(np.random.SeedSequence([base_seed, salt]).generate_state(1)[0])


def with_overrides(
    cfg: SimulationConfig,
    seed: int | None = None,
    shots: int | None = None,
    output_dir: str | None = None,
) -> SimulationConfig:
    """Apply command-line overrides on top of file values."""
    updates = {}
    if seed is not None:
        updates["rng_seed"] = seed
    if shots is not None:
        updates["shots"] = shots
    if output_dir is not None:
        updates["output_dir"] = output_dir
    return replace(cfg, **updates) if updates else cfg
