"""Sweep configuration: JSON document <-> dataclasses, strict about keys."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .model import ModelParams

SPECTRUM_SCAN = "spectrum-scan"
PARAMETER_MAP = "parameter-map"
AXIS_NAMES = ("g", "epsilon", "delta", "xi")
FORMATS = ("csv", "json", "both")


class ConfigError(ValueError):
    pass


def _take(data, allowed, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object, got {type(data).__name__}")
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    return data


@dataclass(frozen=True)
class Axis:
    """A swept parameter.  ``delta`` on an axis is the detuning ``omega - 2 Delta``."""

    name: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"axis name {self.name!r} not in {AXIS_NAMES}")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError(f"axis {self.name!r}: count must be an integer >= 2")

    def values(self):
        return np.linspace(self.min, self.max, int(self.count))


@dataclass(frozen=True)
class StateSelection:
    indices: tuple | None = None
    count: int | None = None
    energy_window: tuple | None = None

    def __post_init__(self):
        chosen = [x is not None for x in (self.indices, self.count, self.energy_window)]
        if sum(chosen) != 1:
            raise ConfigError("states: give exactly one of indices, count, energy_window")
        if self.count is not None and self.count < 1:
            raise ConfigError("states.count must be >= 1")
        if self.indices is not None and any(i < 0 for i in self.indices):
            raise ConfigError("states.indices must be non-negative")
        if self.energy_window is not None and len(self.energy_window) != 2:
            raise ConfigError("states.energy_window needs [low, high]")

    def select(self, energies, omega):
        """Indices of the selected states (energies in absolute units)."""
        n = len(energies)
        if self.indices is not None:
            return [i for i in self.indices if i < n]
        if self.count is not None:
            return list(range(min(self.count, n)))
        lo, hi = self.energy_window
        return [i for i, e in enumerate(energies) if lo <= e / omega <= hi]

    def to_dict(self):
        if self.indices is not None:
            return {"indices": list(self.indices)}
        if self.count is not None:
            return {"count": self.count}
        return {"energy_window": list(self.energy_window)}


@dataclass(frozen=True)
class NmaxPolicy:
    policy: str = "adaptive"
    value: int = 80
    start: int = 40
    cap: int = 400

    def __post_init__(self):
        if self.policy not in ("adaptive", "fixed"):
            raise ConfigError(f"n_max.policy must be 'adaptive' or 'fixed', got {self.policy!r}")
        if min(self.value, self.start, self.cap) < 1 or self.start > self.cap:
            raise ConfigError("n_max: sizes must be >= 1 and start <= cap")


@dataclass(frozen=True)
class Tolerances:
    tail_levels: int | None = None
    convergence_tol: float = 1e-6
    wigner_spacing: float = 0.05
    wigner_margin: float = 4.0
    wigner_weight_tol: float = 1e-8


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "results"
    prefix: str = "aqrm"
    format: str = "csv"
    plots: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"output.format must be one of {FORMATS}")


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    params: ModelParams
    axes: tuple
    states: StateSelection
    n_max: NmaxPolicy = field(default_factory=NmaxPolicy)
    tolerances: Tolerances = field(default_factory=Tolerances)
    bosonic: bool = True
    output: OutputSpec = field(default_factory=OutputSpec)

    def __post_init__(self):
        if self.mode not in (SPECTRUM_SCAN, PARAMETER_MAP):
            raise ConfigError(f"mode must be {SPECTRUM_SCAN!r} or {PARAMETER_MAP!r}")
        want = 1 if self.mode == SPECTRUM_SCAN else 2
        if len(self.axes) != want:
            raise ConfigError(f"{self.mode} needs exactly {want} swept axis(es), got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate axis names {names}")

    @property
    def shape(self):
        return tuple(int(a.count) for a in self.axes)

    def points(self):
        """Axis-value dicts in row-major order (first axis outermost)."""
        grids = np.meshgrid(*[a.values() for a in self.axes], indexing="ij")
        flat = [g.ravel() for g in grids]
        return [{a.name: float(f[i]) for a, f in zip(self.axes, flat)}
                for i in range(flat[0].size)]

    def point_params(self, values):
        changes = {}
        for name, v in values.items():
            if name == "delta":
                changes["delta"] = (self.params.omega - v) / 2.0
            else:
                changes[name] = v
        return self.params.replace(**changes)

    def to_dict(self):
        return {
            "mode": self.mode,
            "params": asdict(self.params),
            "axes": [asdict(a) for a in self.axes],
            "states": self.states.to_dict(),
            "n_max": asdict(self.n_max),
            "tolerances": asdict(self.tolerances),
            "bosonic": self.bosonic,
            "output": asdict(self.output),
        }

    def with_output(self, **changes):
        data = asdict(self.output)
        data.update({k: v for k, v in changes.items() if v is not None})
        return SweepConfig(self.mode, self.params, self.axes, self.states, self.n_max,
                           self.tolerances, self.bosonic, OutputSpec(**data))


def config_from_dict(data):
    _take(data, ("mode", "params", "axes", "states", "n_max", "tolerances", "bosonic", "output"),
          "config")
    if "mode" not in data or "axes" not in data:
        raise ConfigError("config needs 'mode' and 'axes'")
    mode = data["mode"]
    try:
        params = ModelParams(**_take(data.get("params", {}),
                                     ("omega", "delta", "g", "epsilon", "xi"), "params"))
        axes = tuple(Axis(**_take(a, ("name", "min", "max", "count"), "axes[]"))
                     for a in data["axes"])
        default_states = {"count": 40} if mode == SPECTRUM_SCAN else {"indices": [0, 1]}
        st = _take(data.get("states", default_states), ("indices", "count", "energy_window"),
                   "states")
        states = StateSelection(
            indices=tuple(int(i) for i in st["indices"]) if "indices" in st else None,
            count=int(st["count"]) if "count" in st else None,
            energy_window=tuple(float(x) for x in st["energy_window"]) if "energy_window" in st else None,
        )
        n_max = NmaxPolicy(**_take(data.get("n_max", {}), ("policy", "value", "start", "cap"), "n_max"))
        tol = Tolerances(**_take(data.get("tolerances", {}),
                                 ("tail_levels", "convergence_tol", "wigner_spacing",
                                  "wigner_margin", "wigner_weight_tol"), "tolerances"))
        bosonic = data.get("bosonic", True)
        if not isinstance(bosonic, bool):
            raise ConfigError("bosonic must be true or false")
        output = OutputSpec(**_take(data.get("output", {}), ("dir", "prefix", "format", "plots"),
                                    "output"))
        return SweepConfig(mode, params, axes, states, n_max, tol, bosonic, output)
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data)
