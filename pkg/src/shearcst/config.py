"""Run configuration: a flat ``key = value`` file, ``SHEARCST_*`` environment overrides, then CLI flags."""
from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .cst import FiducialSpec
from .errors import ConfigInvalid
from .grids import ModelParams, UniformGrid

ENV_PREFIX = "SHEARCST_"
SCENARIOS = ("G", "heisenberg")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class GridSpec:
    """``y`` grid of ``n`` points (``x1`` shares it, ``x3`` is its dual) and an x2 stencil."""

    n: int = 128
    step: float | None = None       # default 1/sqrt(hbar4 n): the dual grid then equals the y grid
    x2_center: float = 0.0
    x2_step: float = 1.0 / 512
    x2_half: int = 2

    def y_grid(self, p: ModelParams) -> UniformGrid:
        step = self.step if self.step is not None else 1.0 / math.sqrt(p.hbar4 * self.n)
        return UniformGrid.centered(self.n, step)

    def x3_grid(self, p: ModelParams) -> UniformGrid:
        return self.y_grid(p).dual(p.hbar4)

    def x2_values(self) -> np.ndarray:
        k = np.arange(-self.x2_half, self.x2_half + 1)
        return self.x2_center + self.x2_step * k


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    fiducial: FiducialSpec = field(default_factory=lambda: FiducialSpec("gaussian", 1.5))
    grids: GridSpec = field(default_factory=GridSpec)
    scenario: str = "G"
    output: OutputSpec = field(default_factory=OutputSpec)
    q: float = 1.0                   # squeeze of the analysed state
    seed_alpha: float = 1.0          # Gaussian f2 seed exp(-alpha z^2); 0 gives f2 = 1
    t: tuple[float, ...] = (0.0, 0.3, 1.1)
    j_max: int = 8
    radius: float = 1.0 / 3          # extension radius for the geometry arcs
    e_list: tuple[float, ...] = (0.5, 0.75, 1.0, 1.5, 2.0)
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigInvalid(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.output.format not in FORMATS:
            raise ConfigInvalid(f"format must be one of {FORMATS}, got {self.output.format!r}")
        g = self.grids
        if g.n < 8:
            raise ConfigInvalid(f"grid_n must be at least 8, got {g.n}")
        if g.step is not None and not g.step > 0:
            raise ConfigInvalid("grid_step must be positive")
        if g.x2_half < 0 or not g.x2_step > 0:
            raise ConfigInvalid("x2 stencil needs x2_half >= 0 and x2_step > 0")
        if not self.q > 0:
            raise ConfigInvalid("q must be positive")
        if self.seed_alpha < 0:
            raise ConfigInvalid("seed_alpha must be non-negative")
        if not self.t:
            raise ConfigInvalid("empty time list")
        if not 0 < self.radius < 1:
            raise ConfigInvalid("radius must lie in (0, 1)")
        # dual-grid relation: x3 step * hbar4 * n * y step == 1
        y = g.y_grid(self.params)
        d = y.dual(self.params.hbar4)
        if not math.isclose(d.step * self.params.hbar4 * y.count * y.step, 1.0, rel_tol=1e-12):
            raise ConfigInvalid("x3 grid violates the dual-grid relation")

    @property
    def E(self) -> float:
        return self.fiducial.E


# key -> (section, field, parser)
def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def _opt_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


_KEYS = {
    "hbar4": ("params", "hbar4", float),
    "h2": ("params", "h2", float),
    "m": ("params", "m", float),
    "omega": ("params", "omega", float),
    "e_squeeze": ("fiducial", "E", float),
    "fiducial_kind": ("fiducial", "kind", str),
    "fiducial_a": ("fiducial", "a", float),
    "normalization": ("fiducial", "normalization", str),
    "grid_n": ("grids", "n", int),
    "grid_step": ("grids", "step", _opt_float),
    "x2_center": ("grids", "x2_center", float),
    "x2_step": ("grids", "x2_step", float),
    "x2_half": ("grids", "x2_half", int),
    "scenario": (None, "scenario", str),
    "out": ("output", "path", str),
    "format": ("output", "format", str),
    "q": (None, "q", float),
    "seed_alpha": (None, "seed_alpha", float),
    "t": (None, "t", _floats),
    "j_max": (None, "j_max", int),
    "radius": (None, "radius", float),
    "e_list": (None, "e_list", _floats),
    "seed": (None, "seed", int),
}


def read_config_file(path: str) -> dict[str, str]:
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#", ";"),
                                       interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[run]\n" + fh.read(), source=path)
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc.strerror}") from exc
    except configparser.Error as exc:
        raise ConfigInvalid(f"malformed config {path}: {exc}") from exc
    return dict(parser["run"])


def env_overrides(environ=None) -> dict[str, str]:
    environ = os.environ if environ is None else environ
    return {k[len(ENV_PREFIX):].lower(): v for k, v in environ.items() if k.startswith(ENV_PREFIX)}


def build_config(values: dict[str, str | object], base: RunConfig | None = None) -> RunConfig:
    """Apply ``key -> value`` overrides (strings are parsed) on top of ``base``."""
    base = RunConfig() if base is None else base
    parts = {"params": {}, "fiducial": {}, "grids": {}, "output": {}, None: {}}
    for key, raw in values.items():
        if raw is None:
            continue
        if key not in _KEYS:
            raise ConfigInvalid(f"unknown config key {key!r}")
        section, name, parse = _KEYS[key]
        try:
            value = parse(raw) if isinstance(raw, str) else raw
        except ValueError as exc:
            raise ConfigInvalid(f"bad value for {key}: {raw!r}") from exc
        if isinstance(raw, str) and raw.strip() == "" and parse is not _opt_float:
            raise ConfigInvalid(f"empty value for {key}")
        parts[section][name] = value
    try:
        params = replace(base.params, **parts["params"])
        fiducial = replace(base.fiducial, **parts["fiducial"])
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc
    grids = replace(base.grids, **parts["grids"])
    output = replace(base.output, **parts["output"])
    top = {f.name: getattr(base, f.name) for f in fields(base)}
    top.update(parts[None])
    top.update(params=params, fiducial=fiducial, grids=grids, output=output)
    if isinstance(top["t"], (int, float)):
        top["t"] = (float(top["t"]),)
    try:
        return RunConfig(**top)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(str(exc)) from exc


def load_config(path: str | None = None, overrides: dict | None = None, environ=None) -> RunConfig:
    """Defaults, then the file, then the environment, then explicit overrides."""
    values: dict = {}
    if path is not None:
        values.update(read_config_file(path))
    values.update(env_overrides(environ))
    cfg = build_config(values)
    if overrides:
        cfg = build_config(overrides, cfg)
    return cfg


def dump_config(cfg: RunConfig) -> str:
    """Flat text form readable by :func:`load_config`."""
    lines = []
    for key, (section, name, _) in _KEYS.items():
        obj = cfg if section is None else getattr(cfg, section)
        value = getattr(obj, name)
        if value is None:
            continue
        if isinstance(value, tuple):
            value = ", ".join(repr(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
