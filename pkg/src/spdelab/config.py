"""Run configuration: a JSON document with fixed sections and keys.

Unknown sections or keys are rejected, and every value is validated by
building the corresponding model objects before anything is computed.
Errors name the offending dotted key.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass

from .dynamics import (DiffusionSpec, DriftSpec, InitialProfile, Operator, ProblemSpec,
                       SolverConfig)
from .grid import Domain1D
from .montecarlo import EnsembleConfig
from .noise import Kernel

__all__ = ["ConfigError", "RunConfig", "DEFAULTS", "load_config", "parse_config", "apply_override"]


class ConfigError(ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


DEFAULTS = {
    "domain": {"length": 1.0, "n": 200},
    "operator": {"type": "laplacian", "p": 2.0, "nu": 1.0},
    "drift": {"family": "zero", "a1": 0.0, "a2": 0.0, "beta": 1.0, "alpha": 1.0,
              "gamma": 3.0, "a": 1.0},
    "noise": {"family": "zero", "b": 0.0, "m": 1.0, "k": 0.0},
    "kernel": {"type": "constant", "q0": 1.0, "s2": 1.0, "ell": 1.0},
    "initial": {"profile": "sine", "amplitude": 1.0, "mass": 1.0, "center": 0.5, "width": 0.25},
    "time": {"dt": 1e-4, "t_max": 1.0, "blowup_threshold": 1e6, "record_stride": 1,
             "scheme": "semi_implicit"},
    "mc": {"paths": 100, "seed": 0},
}

_STRINGS = {("operator", "type"), ("drift", "family"), ("noise", "family"),
            ("kernel", "type"), ("initial", "profile"), ("time", "scheme")}
_INTS = {("domain", "n"), ("time", "record_stride"), ("mc", "paths"), ("mc", "seed")}


@dataclass(frozen=True)
class RunConfig:
    document: dict
    problem: ProblemSpec
    solver: SolverConfig
    ensemble: EnsembleConfig

    def echo(self) -> dict:
        return copy.deepcopy(self.document)


def _coerce(section, key, value):
    dotted = f"{section}.{key}"
    if (section, key) in _STRINGS:
        if not isinstance(value, str):
            raise ConfigError(dotted, f"expected a string, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(dotted, f"expected a number, got {value!r}")
    if (section, key) in _INTS:
        if float(value) != int(value):
            raise ConfigError(dotted, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _build(doc):
    def make(section, fn):
        try:
            return fn(doc[section])
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(_blame(section, fn), str(exc)) from None

    def _blame(section, fn):
        # pin the error on the first non-default key that fails on its own
        for key, value in doc[section].items():
            if value == DEFAULTS[section][key]:
                continue
            trial = dict(DEFAULTS[section], **{key: value})
            try:
                fn(trial)
            except (ValueError, TypeError):
                return f"{section}.{key}"
        return section

    domain = make("domain", lambda s: Domain1D(s["length"], s["n"]))
    operator = make("operator", lambda s: Operator(s["type"], nu=s["nu"], p=s["p"]))
    drift = make("drift", lambda s: DriftSpec(**s))
    noise = make("noise", lambda s: DiffusionSpec(**s))
    kernel = make("kernel", lambda s: Kernel(**s))
    initial = make("initial", lambda s: InitialProfile(**s))
    solver = make("time", lambda s: SolverConfig(**s))
    ensemble = make("mc", lambda s: EnsembleConfig(n_paths=s["paths"], base_seed=s["seed"]))
    problem = ProblemSpec(domain, drift, noise, kernel, initial, operator)
    if operator.type == "p_laplacian" and solver.scheme != "tamed_explicit":
        raise ConfigError("time.scheme", "the p-Laplacian requires 'tamed_explicit'")
    u0 = problem.initial_field()
    if not solver.blowup_threshold > abs(u0.values).max():
        raise ConfigError("time.blowup_threshold", "must exceed the initial sup-norm")
    return problem, solver, ensemble


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("", "configuration must be a JSON object")
    doc = copy.deepcopy(DEFAULTS)
    for section, body in raw.items():
        if section not in DEFAULTS:
            raise ConfigError(section, "unknown section")
        if not isinstance(body, dict):
            raise ConfigError(section, "section must be an object")
        for key, value in body.items():
            if key not in DEFAULTS[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
            doc[section][key] = _coerce(section, key, value)
    problem, solver, ensemble = _build(doc)
    return RunConfig(doc, problem, solver, ensemble)


def apply_override(raw: dict, assignment: str) -> dict:
    """Apply ``section.key=value``; the value is parsed as JSON, else kept as a string."""
    if "=" not in assignment:
        raise ConfigError(assignment, "override must look like section.key=value")
    dotted, text = assignment.split("=", 1)
    parts = dotted.strip().split(".")
    if len(parts) != 2:
        raise ConfigError(dotted, "override key must be section.key")
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    raw = copy.deepcopy(raw)
    raw.setdefault(parts[0], {})
    if not isinstance(raw[parts[0]], dict):
        raise ConfigError(parts[0], "section must be an object")
    raw[parts[0]][parts[1]] = value
    return raw


def load_config(path, overrides=()) -> RunConfig:
    raw = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("", f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    for item in overrides:
        raw = apply_override(raw, item)
    return parse_config(raw)
