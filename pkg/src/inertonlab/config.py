"""Run configuration: flat ``section.key = value`` text files.

Example::

    # canonical run
    model.M0 = 1
    model.v0 = 0.6
    model.c = 1
    model.T = 1
    model.N = 4
    model.h_mode = derived
    integrator.method = rk4
    integrator.step = 0.001
    grid.t_end = 10
    grid.samples_per_period = 100

Blank lines and ``#`` comments are ignored.  See the README for every key.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import IntegratorConfig
from .model import ModelParams, ParameterError

SCENARIOS = ("analytic", "integrate", "verify", "figures", "quantize")
FORMATS = ("text", "json")


class ConfigError(ValueError):
    pass


def _float(v):
    return float(v)


def _int(v):
    f = float(v)
    if f != int(f):
        raise ValueError(f"{v!r} is not an integer")
    return int(f)


def _float_list(v):
    return tuple(float(p) for p in v.replace(",", " ").split())


def _optional_float(v):
    return None if v.lower() in ("", "none") else float(v)


_KEYS = {
    "model.M0": _float,
    "model.v0": _float,
    "model.c": _float,
    "model.T": _optional_float,
    "model.N": _int,
    "model.h_mode": str,
    "model.h": _optional_float,
    "model.T_r": _float_list,
    "integrator.method": str,
    "integrator.step": _optional_float,
    "integrator.rtol": _float,
    "integrator.atol": _float,
    "integrator.event_mode": str,
    "integrator.event_tol": _float,
    "integrator.monitor_tol": _float,
    "grid.t_end": _float,
    "grid.samples_per_period": _int,
    "run.scenario": str,
    "run.out": str,
    "report.format": str,
}


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    T_r: tuple | None = None
    t_end: float = 10.0
    samples_per_period: int = 100
    scenario: str = "verify"
    out_dir: Path = Path("out")
    report_format: str = "text"

    def __post_init__(self):
        if self.samples_per_period < 2:
            raise ConfigError("grid.samples_per_period must be >= 2")
        if not self.t_end > 0:
            raise ConfigError("grid.t_end must be positive")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.report_format not in FORMATS:
            raise ConfigError(f"unknown report format {self.report_format!r}")


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value', got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return values


def build_config(values: dict, **overrides) -> RunConfig:
    """Assemble a :class:`RunConfig` from parsed keys; ``overrides`` win over file values."""
    model = {k.split(".", 1)[1]: v for k, v in values.items() if k.startswith("model.") and k != "model.T_r"}
    integ = {k.split(".", 1)[1]: v for k, v in values.items() if k.startswith("integrator.")}
    if model.get("h_mode") == "given" and "T" not in model:
        model["T"] = None
    try:
        params = ModelParams(**model)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    try:
        integrator = IntegratorConfig(**integ)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    T_r = values.get("model.T_r")
    if T_r is not None and len(T_r) != params.N:
        raise ConfigError(f"model.T_r needs {params.N} values, got {len(T_r)}")
    kwargs = dict(
        params=params,
        integrator=integrator,
        T_r=T_r,
        t_end=values.get("grid.t_end", 10.0),
        samples_per_period=values.get("grid.samples_per_period", 100),
        scenario=values.get("run.scenario", "verify"),
        out_dir=Path(values.get("run.out", "out")),
        report_format=values.get("report.format", "text"),
    )
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**kwargs)


def load_config(path: str | os.PathLike, **overrides) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8")
    return build_config(parse_config_text(text), **overrides)
