"""Experiment configuration: a flat YAML mapping, validated into a dataclass."""

from __future__ import annotations

from dataclasses import dataclass, fields

import yaml

COMMANDS = ("certify", "det-check", "haar-audit", "heis-check", "dim-experiment", "heis-experiment", "energy")

DEFAULTS = {
    "seed": 0,
    "level": 8,
    "samples": 10_000,
    "planes": 200,
    "grid": 32,
}

# keys accepted in the document besides the dataclass field names
ALIASES = {"ct": "C_T", "out": "output_path", "set": "set_name"}

SET_NAMES = ("four-corner", "cantor-dust", "square", "middle-thirds")

REQUIRED = {
    "certify": ("n", "m", "C_T"),
    "det-check": ("n", "m"),
    "haar-audit": ("n", "m"),
    "heis-check": ("n", "m"),
    "dim-experiment": ("n", "m"),
    "heis-experiment": ("n", "m"),
    "energy": ("alpha",),
}


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    n: int = 1
    m: int = 1
    seed: int = 0
    samples: int = 10_000
    planes: int = 200
    level: int = 8
    grid: int = 32
    C_T: float | None = None
    alpha: float | None = None
    eps: float | None = None
    output_path: str | None = None
    set_name: str = "cantor-dust"
    dimension: float | None = None
    t_rule: str = "zero"
    pairs: int | None = None

    @property
    def csv_path(self) -> str:
        return self.output_path or f"isoproj-{self.command}.csv"


_INT_FIELDS = {"n", "m", "seed", "samples", "planes", "level", "grid", "pairs"}
_FLOAT_FIELDS = {"C_T", "alpha", "eps", "dimension"}


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        try:
            as_float = float(value)
        except ValueError:
            raise ConfigError(key, f"expected an integer, got {value!r}") from None
        if as_float != int(as_float):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(as_float)
    if key in _FLOAT_FIELDS:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected a number, got {value!r}") from None
    return str(value)


def parse_config(source) -> ExperimentConfig:
    """Validate a mapping (or YAML text) into an ExperimentConfig with defaults applied."""
    if isinstance(source, str):
        try:
            source = yaml.safe_load(source)
        except yaml.YAMLError as exc:
            raise ConfigError("config", f"not a valid key-value document ({exc})") from None
    if source is None:
        source = {}
    if not isinstance(source, dict):
        raise ConfigError("config", "expected a flat key-value mapping")

    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for raw_key, value in source.items():
        key = ALIASES.get(str(raw_key), str(raw_key))
        if key not in known:
            raise ConfigError(str(raw_key), "unknown field")
        values[key] = _coerce(key, value)

    command = values.get("command")
    if command is None:
        raise ConfigError("command", "missing required field")
    if command not in COMMANDS:
        raise ConfigError("command", f"must be one of {', '.join(COMMANDS)}")
    for key in REQUIRED[command]:
        if values.get(key) is None:
            raise ConfigError(key, f"missing required field for {command}")
    for key, default in DEFAULTS.items():
        if values.get(key) is None:
            values[key] = default
    values = {k: v for k, v in values.items() if v is not None}
    cfg = ExperimentConfig(**values)

    if cfg.n < 1:
        raise ConfigError("n", "n must be positive")
    if not 0 < cfg.m <= cfg.n:
        raise ConfigError("m", "m must satisfy m ≤ n")
    for key in ("samples", "planes", "level", "grid"):
        if getattr(cfg, key) < 1:
            raise ConfigError(key, f"{key} must be positive")
    if cfg.pairs is not None and cfg.pairs < 1:
        raise ConfigError("pairs", "pairs must be positive")
    if cfg.C_T is not None:
        bound = 2.0 ** (-(cfg.m + 2) / 2)
        if not 0 < cfg.C_T <= bound:
            raise ConfigError("C_T", f"C_T must lie in (0, {bound:.6g}] for m={cfg.m}")
    if cfg.alpha is not None and cfg.alpha <= 0:
        raise ConfigError("alpha", "alpha must be positive")
    if cfg.eps is not None and cfg.eps <= 0:
        raise ConfigError("eps", "eps must be positive")
    if cfg.set_name not in SET_NAMES:
        raise ConfigError("set", f"unknown set {cfg.set_name!r}; choose from {', '.join(SET_NAMES)}")
    if cfg.t_rule not in ("zero", "graph"):
        raise ConfigError("t_rule", "t_rule must be 'zero' or 'graph'")
    return cfg


def load_config(path) -> dict:
    """Read a config file into a raw mapping (validation happens in parse_config)."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"not a valid key-value document ({exc})") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config", "expected a flat key-value mapping")
    return data
