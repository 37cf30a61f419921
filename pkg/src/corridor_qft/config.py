"""Experiment configuration: flat INI text, one section per experiment.

Every key is optional and falls back to the default below; unknown sections
or keys are rejected.  Lists are comma separated; lattices are written as
``2x2x2``.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

EXPERIMENTS = ("equivalence", "propagator", "lifetime", "corridor")
MAX_SITES = 512


class ConfigError(ValueError):
    pass


@dataclass
class EquivalenceConfig:
    lattices: list[tuple[int, ...]] = field(default_factory=lambda: [(1,), (4,), (2, 2), (2, 2, 2)])
    spacing: float = 1.0
    masses: list[float] = field(default_factory=lambda: [1.0])
    epsilons: list[float] = field(default_factory=lambda: [0.3])
    phi_cl: str = "random"
    phi_cl_value: float = 0.0
    phi_cl_low: float = -2.0
    phi_cl_high: float = 2.0
    draws: int = 5
    seed: int = 0
    rtol: float = 1e-10


@dataclass
class PropagatorConfig:
    omega_k: list[float] = field(default_factory=lambda: [1.0, 2.0])
    epsilons: list[float] = field(default_factory=lambda: [0.1, 0.05, 0.025])
    t_values: list[float] = field(default_factory=lambda: [0.0, 1.0, 5.0, -3.0, 20.0, 60.0])
    tol: float = 1e-6


@dataclass
class LifetimeConfig:
    omega_k: list[float] = field(default_factory=lambda: [1.0, 2.0])
    epsilons: list[float] = field(default_factory=lambda: [0.01, 0.1])
    masses: list[float] = field(default_factory=lambda: [1.0])
    gammas: list[float] = field(default_factory=lambda: [1.0, 2.0, 3.0])
    t_min: float = 1.0
    t_max: float = 40.0
    n_t: int = 40


@dataclass
class CorridorConfig:
    epsilons: list[float] = field(default_factory=lambda: [1.0])
    dv: list[float] = field(default_factory=lambda: [1.0, 4.0])
    n_samples: int = 1_000_000
    seed: int = 42
    tau: float = 400.0
    mass: float = 1.0
    band_sigmas: float = 3.0


@dataclass
class ExperimentConfig:
    equivalence: EquivalenceConfig = field(default_factory=EquivalenceConfig)
    propagator: PropagatorConfig = field(default_factory=PropagatorConfig)
    lifetime: LifetimeConfig = field(default_factory=LifetimeConfig)
    corridor: CorridorConfig = field(default_factory=CorridorConfig)
    format: str = "csv"
    output: str | None = None

    def with_seed(self, seed: int) -> "ExperimentConfig":
        self.equivalence.seed = seed
        self.corridor.seed = seed
        return self


_SECTIONS = {
    "equivalence": EquivalenceConfig,
    "propagator": PropagatorConfig,
    "lifetime": LifetimeConfig,
    "corridor": CorridorConfig,
}


def _float(key, text):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite, got {text!r}")
    return value


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _list(text):
    items = [t.strip() for t in text.split(",")]
    return [t for t in items if t]


def _lattice(key, text):
    try:
        dims = tuple(int(p) for p in text.lower().split("x"))
    except ValueError:
        raise ConfigError(f"{key}: bad lattice {text!r}, expected e.g. 2x2") from None
    return dims


def _parse_value(key, annotation, text):
    if annotation == "float":
        return _float(key, text)
    if annotation == "int":
        return _int(key, text)
    if annotation == "str":
        return text.strip()
    if annotation == "list[float]":
        return [_float(key, t) for t in _list(text)]
    if annotation == "list[tuple[int, ...]]":
        return [_lattice(key, t) for t in _list(text)]
    raise AssertionError(annotation)


def _require(cond, key, msg):
    if not cond:
        raise ConfigError(f"{key}: {msg}")


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    e = cfg.equivalence
    _require(e.lattices, "equivalence.lattices", "at least one lattice required")
    for dims in e.lattices:
        _require(1 <= len(dims) <= 4 and all(d >= 1 for d in dims), "equivalence.lattices",
                 f"lattice {dims} needs 1-4 axes of extent >= 1")
        _require(math.prod(dims) <= MAX_SITES, "equivalence.lattices",
                 f"lattice {dims} exceeds {MAX_SITES} sites")
    _require(e.spacing > 0, "equivalence.spacing", "must be > 0")
    _require(e.masses and all(m >= 0 for m in e.masses), "equivalence.masses", "must be >= 0")
    _require(e.epsilons and all(x > 0 for x in e.epsilons), "equivalence.epsilons", "must be > 0")
    _require(e.phi_cl in ("constant", "random"), "equivalence.phi_cl", "must be constant or random")
    _require(e.phi_cl_low < e.phi_cl_high, "equivalence.phi_cl_low", "must be below phi_cl_high")
    _require(e.draws >= 1, "equivalence.draws", "must be >= 1")
    _require(e.seed >= 0, "equivalence.seed", "must be >= 0")
    _require(e.rtol >= 0, "equivalence.rtol", "must be >= 0")

    p = cfg.propagator
    _require(p.omega_k and all(w > 0 for w in p.omega_k), "propagator.omega_k", "must be > 0")
    _require(p.epsilons and all(x > 0 for x in p.epsilons), "propagator.epsilons", "must be > 0")
    _require(p.t_values, "propagator.t_values", "at least one time required")
    _require(1e-10 <= p.tol <= 1e-3, "propagator.tol", "must lie in [1e-10, 1e-3]")

    lt = cfg.lifetime
    _require(lt.omega_k and all(w > 0 for w in lt.omega_k), "lifetime.omega_k", "must be > 0")
    _require(lt.epsilons and all(x > 0 for x in lt.epsilons), "lifetime.epsilons", "must be > 0")
    _require(lt.masses and all(m > 0 for m in lt.masses), "lifetime.masses", "must be > 0")
    _require(lt.gammas and all(g >= 1 for g in lt.gammas), "lifetime.gammas", "must be >= 1")
    _require(lt.t_min >= 0, "lifetime.t_min", "must be >= 0")
    _require(lt.t_max > lt.t_min, "lifetime.t_max", "must exceed t_min")
    _require(lt.n_t >= 8, "lifetime.n_t", "must be >= 8")

    c = cfg.corridor
    _require(c.epsilons and all(x > 0 for x in c.epsilons), "corridor.epsilons", "must be > 0")
    _require(c.dv and all(x > 0 for x in c.dv), "corridor.dv", "must be > 0")
    _require(c.n_samples >= 10_000, "corridor.n_samples", "must be >= 10000")
    _require(c.seed >= 0, "corridor.seed", "must be >= 0")
    _require(c.tau > 0, "corridor.tau", "must be > 0")
    _require(c.mass > 0, "corridor.mass", "must be > 0")
    _require(c.band_sigmas >= 0, "corridor.band_sigmas", "must be >= 0")

    _require(cfg.format in ("csv", "json"), "run.format", "must be csv or json")
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    cfg = ExperimentConfig()
    for section in parser.sections():
        if section == "run":
            for key, value in parser.items(section):
                if key == "format":
                    cfg.format = value.strip().lower()
                elif key == "output":
                    cfg.output = value.strip()
                else:
                    raise ConfigError(f"run.{key}: unknown key")
            continue
        if section not in _SECTIONS:
            raise ConfigError(f"[{section}]: unknown section")
        target = getattr(cfg, section)
        known = {f.name: f.type for f in fields(target)}
        for key, value in parser.items(section):
            if key not in known:
                raise ConfigError(f"{section}.{key}: unknown key")
            setattr(target, key, _parse_value(f"{section}.{key}", known[key], value))
    return validate(cfg)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)
