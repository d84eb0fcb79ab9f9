"""TOML documents for amplitude sets and run configurations.

Amplitude document::

    box = [6.0, 6.0, 6.0]

    [[mode]]
    n = [1, 0, 0]
    lambda = 1
    a = [1.0, 0.0]
    b = [0.0, 0.0]
    virtual = false   # optional

A run configuration is an amplitude document plus optional sections::

    seed = 7
    [grid]
    dims = [32, 32, 32]
    box = [6.0, 6.0, 6.0]     # defaults to the top-level box
    [times]
    t0 = 0.0
    t1 = 4.0
    samples = 256
    [tolerances]
    roundtrip = 1e-12
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import tomli
import tomli_w

from .fieldgrid import GridSpec
from .modes import AmplitudeSet, ModeKey


class ConfigError(ValueError):
    """Malformed amplitude document or run configuration."""


def _pair(value, what: str) -> complex:
    if not (isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value)):
        raise ConfigError(f"{what} must be [re, im], got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _box(value, what: str = "box") -> tuple[float, float, float]:
    if not (isinstance(value, list) and len(value) == 3 and all(isinstance(v, (int, float)) for v in value)):
        raise ConfigError(f"{what} must be a list of 3 numbers, got {value!r}")
    box = tuple(float(v) for v in value)
    if any(v <= 0 for v in box):
        raise ConfigError(f"{what} lengths must be positive, got {box}")
    return box


def amplitudes_from_dict(doc: dict) -> AmplitudeSet:
    if "box" not in doc:
        raise ConfigError("amplitude document needs a top-level box")
    amps = AmplitudeSet(_box(doc["box"]))
    seen: set[ModeKey] = set()
    for i, rec in enumerate(doc.get("mode", [])):
        where = f"mode[{i}]"
        try:
            key = ModeKey.make(rec["n"], rec["lambda"])
        except KeyError as exc:
            raise ConfigError(f"{where} is missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: {exc}") from None
        if key in seen:
            raise ConfigError(f"{where} repeats mode n={list(key.n)} lambda={key.lam}")
        seen.add(key)
        a = _pair(rec.get("a", [0.0, 0.0]), f"{where}.a")
        b = _pair(rec.get("b", [0.0, 0.0]), f"{where}.b")
        amps.set(key.n, key.lam, a, b)
        if rec.get("virtual", False):
            if key.lam != 0:
                raise ConfigError(f"{where}: only lambda = 0 modes can be marked virtual")
            amps.virtual.add(key)
    return amps


def amplitudes_to_dict(amps: AmplitudeSet) -> dict:
    modes = []
    for key, (a, b) in amps.sorted_items():
        rec = {"n": list(key.n), "lambda": key.lam, "a": [a.real, a.imag], "b": [b.real, b.imag]}
        if key in amps.virtual:
            rec["virtual"] = True
        modes.append(rec)
    return {"box": list(amps.box), "mode": modes}


def dumps_amplitudes(amps: AmplitudeSet) -> str:
    return tomli_w.dumps(amplitudes_to_dict(amps))


def loads_amplitudes(text: str) -> AmplitudeSet:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    return amplitudes_from_dict(doc)


def save_amplitudes(amps: AmplitudeSet, path) -> None:
    Path(path).write_text(dumps_amplitudes(amps))


def load_amplitudes(path) -> AmplitudeSet:
    return loads_amplitudes(Path(path).read_text())


@dataclass(frozen=True)
class TimeWindow:
    t0: float = 0.0
    t1: float = 1.0
    samples: int = 64

    def __post_init__(self):
        if self.samples < 2:
            raise ConfigError(f"times.samples must be >= 2, got {self.samples}")
        if not self.t1 > self.t0:
            raise ConfigError("times.t1 must exceed times.t0")

    def grid(self, endpoint: bool = False) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.samples, endpoint=endpoint)


@dataclass
class RunConfig:
    amplitudes: AmplitudeSet
    grid: GridSpec | None = None
    times: TimeWindow = field(default_factory=TimeWindow)
    tolerances: dict[str, float] = field(default_factory=dict)
    seed: int | None = None


def config_from_dict(doc: dict) -> RunConfig:
    amps = amplitudes_from_dict(doc)
    grid = None
    if "grid" in doc:
        g = doc["grid"]
        dims = g.get("dims")
        if not (isinstance(dims, list) and len(dims) == 3 and all(isinstance(v, int) for v in dims)):
            raise ConfigError(f"grid.dims must be 3 integers, got {dims!r}")
        box = _box(g["box"], "grid.box") if "box" in g else amps.box
        try:
            grid = GridSpec(tuple(dims), box)
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from None
    t = doc.get("times", {})
    try:
        times = TimeWindow(float(t.get("t0", 0.0)), float(t.get("t1", 1.0)), int(t.get("samples", 64)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"times: {exc}") from None
    tols = {}
    for name, val in doc.get("tolerances", {}).items():
        if not isinstance(val, (int, float)) or val < 0:
            raise ConfigError(f"tolerance {name} must be a non-negative number")
        tols[name] = float(val)
    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or seed < 0):
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    return RunConfig(amplitudes=amps, grid=grid, times=times, tolerances=tols, seed=seed)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = tomli.loads(path.read_text())
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from None
    return config_from_dict(doc)
