"""Experiment configuration files (JSON objects) and their validation.

Example::

    {
      "experiment": "conjugacy",
      "m": 2,
      "c": [2.0, 1.0],
      "seed": 7,
      "initial": {"random": {"seed": 7}},
      "integrator": {"method": "rk4", "dt": 0.001, "t_max": 5.0},
      "output_path": "out/conjugacy.csv"
    }

``initial`` is one of ``{"vector": [...]}``, ``{"matrix": [[...]]}`` (or
``{"matrix": {"real": [[...]], "imag": [[...]]}}``) and
``{"random": {"seed": N, "diagonal": false}}``. A random initial condition
without its own seed uses the top-level ``seed``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

import numpy as np

from . import tolerances as tol
from .errors import ConfigError
from .flow import METHODS, IntegratorConfig

EXPERIMENTS = ("sphere-flow", "qis-flow", "conjugacy", "oja-compare", "property-suite")
FORMATS = ("csv", "json")

DEFAULT_CHECKS = {
    "sphere-flow": {"norm_drift": 1e-8, "potential_increase": 1e-10},
    "qis-flow": {"trace_drift": 1e-8, "herm_residual": 1e-10, "potential_increase": 1e-10},
    "conjugacy": {"sup_deviation": 1e-8},
    "oja-compare": {"sup_deviation": 0.05},
    "property-suite": {},
}

_TOP_LEVEL = {
    "experiment", "m", "c", "G", "eta", "seed", "integrator", "initial", "output_path",
    "output_format", "runs", "steps", "stride", "variant", "checks", "suite",
}


@dataclass(frozen=True)
class Initial:
    kind: str  # "random" | "vector" | "matrix"
    value: tuple | None = None  # vector entries, or (real rows, imag rows)
    seed: int | None = None
    diagonal: bool = False

    def to_dict(self) -> dict:
        if self.kind == "vector":
            return {"vector": list(self.value)}
        if self.kind == "matrix":
            re, im = self.value
            return {"matrix": {"real": [list(r) for r in re], "imag": [list(r) for r in im]}}
        out = {}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.diagonal:
            out["diagonal"] = True
        return {"random": out}

    def matrix(self) -> np.ndarray:
        re, im = self.value
        return np.array(re, dtype=float) + 1j * np.array(im, dtype=float)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    m: int
    c: tuple[float, ...]
    seed: int = 0
    G: tuple[tuple[float, ...], ...] | None = None
    eta: float | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    initial: Initial = field(default_factory=lambda: Initial("random"))
    output_path: str | None = None
    output_format: str = "csv"
    runs: int = 100
    steps: int = 100_000
    stride: int = 50
    variant: str = "truncated"
    checks: tuple[tuple[str, float], ...] = ()
    suite: tuple[str, ...] | None = None

    @property
    def thresholds(self) -> dict[str, float]:
        out = dict(DEFAULT_CHECKS[self.experiment])
        out.update(dict(self.checks))
        return out

    def initial_seed(self) -> int:
        return self.seed if self.initial.seed is None else self.initial.seed

    def to_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "m": self.m,
            "c": list(self.c),
            "seed": self.seed,
            "integrator": self.integrator.to_dict(),
            "initial": self.initial.to_dict(),
            "output_format": self.output_format,
        }
        if self.G is not None:
            d["G"] = [list(r) for r in self.G]
        if self.eta is not None:
            d["eta"] = self.eta
        if self.output_path is not None:
            d["output_path"] = self.output_path
        if self.experiment == "oja-compare":
            d.update(runs=self.runs, steps=self.steps, stride=self.stride, variant=self.variant)
        if self.checks:
            d["checks"] = dict(self.checks)
        if self.suite is not None:
            d["suite"] = list(self.suite)
        return d


def serialize(cfg: ExperimentConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)


def _num(field_name, x, kind=float):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(field_name, f"expected a number, got {x!r}")
    if kind is int:
        if int(x) != x:
            raise ConfigError(field_name, f"expected an integer, got {x!r}")
        return int(x)
    if not np.isfinite(x):
        raise ConfigError(field_name, "must be finite")
    return float(x)


def _num_list(field_name, xs):
    if not isinstance(xs, list):
        raise ConfigError(field_name, "expected a list of numbers")
    return tuple(_num(field_name, x) for x in xs)


def _matrix(field_name, rows, m):
    if not isinstance(rows, list) or len(rows) != m or any(not isinstance(r, list) or len(r) != m for r in rows):
        raise ConfigError(field_name, f"expected a {m}x{m} list of lists")
    return tuple(_num_list(field_name, r) for r in rows)


def _parse_integrator(raw) -> IntegratorConfig:
    if not isinstance(raw, dict):
        raise ConfigError("integrator", "expected an object")
    known = {f.name for f in fields(IntegratorConfig)}
    extra = set(raw) - known
    if extra:
        raise ConfigError("integrator", f"unknown keys {sorted(extra)}")
    kw = {}
    if "method" in raw:
        if raw["method"] not in METHODS:
            raise ConfigError("integrator.method", f"must be one of {METHODS}")
        kw["method"] = raw["method"]
    for key in ("dt", "t_max"):
        if key in raw:
            kw[key] = _num(f"integrator.{key}", raw[key])
    if "sample_stride" in raw:
        kw["sample_stride"] = _num("integrator.sample_stride", raw["sample_stride"], int)
    if "renormalize" in raw:
        if not isinstance(raw["renormalize"], bool):
            raise ConfigError("integrator.renormalize", "expected true or false")
        kw["renormalize"] = raw["renormalize"]
    try:
        return IntegratorConfig(**kw)
    except ValueError as e:
        raise ConfigError("integrator", str(e)) from None


def _parse_initial(raw, m) -> Initial:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise ConfigError("initial", "expected exactly one of 'vector', 'matrix', 'random'")
    (kind, val), = raw.items()
    if kind == "vector":
        vec = _num_list("initial.vector", val)
        if len(vec) != m:
            raise ConfigError("initial.vector", "length mismatch")
        return Initial("vector", vec)
    if kind == "matrix":
        if isinstance(val, dict):
            re = _matrix("initial.matrix.real", val.get("real"), m)
            im = _matrix("initial.matrix.imag", val.get("imag", [[0.0] * m for _ in range(m)]), m)
        else:
            re = _matrix("initial.matrix", val, m)
            im = tuple((0.0,) * m for _ in range(m))
        return Initial("matrix", (re, im))
    if kind == "random":
        val = val or {}
        if not isinstance(val, dict) or set(val) - {"seed", "diagonal"}:
            raise ConfigError("initial.random", "expected an object with optional 'seed' and 'diagonal'")
        seed = _num("initial.random.seed", val["seed"], int) if "seed" in val else None
        diagonal = val.get("diagonal", False)
        if not isinstance(diagonal, bool):
            raise ConfigError("initial.random.diagonal", "expected true or false")
        return Initial("random", seed=seed, diagonal=diagonal)
    raise ConfigError("initial", f"unknown kind {kind!r}")


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "expected a JSON object")
    unknown = set(raw) - _TOP_LEVEL
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown field")
    for req in ("experiment", "m", "c"):
        if req not in raw:
            raise ConfigError(req, "required field missing")
    exp = raw["experiment"]
    if exp not in EXPERIMENTS:
        raise ConfigError("experiment", f"must be one of {EXPERIMENTS}")
    m = _num("m", raw["m"], int)
    if m < 2:
        raise ConfigError("m", "must be at least 2")
    c = _num_list("c", raw["c"])
    if len(c) != m:
        raise ConfigError("c", "length mismatch")

    kw: dict = {"experiment": exp, "m": m, "c": c}
    if "seed" in raw:
        kw["seed"] = _num("seed", raw["seed"], int)
    if raw.get("G") is not None:
        g = _matrix("G", raw["G"], m)
        ga = np.array(g)
        if np.linalg.norm(ga.T @ ga - np.eye(m)) > tol.ORTHOGONAL_ATOL:
            raise ConfigError("G", "not orthogonal")
        kw["G"] = g
    if raw.get("eta") is not None:
        eta = _num("eta", raw["eta"])
        if eta <= 0:
            raise ConfigError("eta", "must be positive")
        kw["eta"] = eta
    if "integrator" in raw:
        kw["integrator"] = _parse_integrator(raw["integrator"])
    if "initial" in raw:
        kw["initial"] = _parse_initial(raw["initial"], m)
    if raw.get("output_path") is not None:
        if not isinstance(raw["output_path"], str):
            raise ConfigError("output_path", "expected a string")
        kw["output_path"] = raw["output_path"]
    if "output_format" in raw:
        if raw["output_format"] not in FORMATS:
            raise ConfigError("output_format", f"must be one of {FORMATS}")
        kw["output_format"] = raw["output_format"]
    for key in ("runs", "steps", "stride"):
        if key in raw:
            val = _num(key, raw[key], int)
            if val < 1:
                raise ConfigError(key, "must be positive")
            kw[key] = val
    if "variant" in raw:
        if raw["variant"] not in ("normalized", "truncated"):
            raise ConfigError("variant", "must be 'normalized' or 'truncated'")
        kw["variant"] = raw["variant"]
    if "checks" in raw:
        if not isinstance(raw["checks"], dict):
            raise ConfigError("checks", "expected an object of name -> threshold")
        known = DEFAULT_CHECKS[exp]
        for name in raw["checks"]:
            if exp != "property-suite" and name not in known:
                raise ConfigError(f"checks.{name}", f"unknown check for {exp}")
        kw["checks"] = tuple(sorted((k, _num(f"checks.{k}", v)) for k, v in raw["checks"].items()))
    if "suite" in raw:
        from .verify import SUITE

        if not isinstance(raw["suite"], list) or any(s not in SUITE for s in raw["suite"]):
            raise ConfigError("suite", f"expected a list drawn from {sorted(SUITE)}")
        kw["suite"] = tuple(raw["suite"])

    cfg = ExperimentConfig(**kw)
    _check_experiment_fields(cfg)
    return cfg


def _check_experiment_fields(cfg: ExperimentConfig) -> None:
    kind = cfg.initial.kind
    if cfg.experiment in ("sphere-flow", "conjugacy") and kind == "matrix":
        raise ConfigError("initial", f"{cfg.experiment} needs a vector or random initial condition")
    if cfg.experiment == "qis-flow" and kind == "vector":
        raise ConfigError("initial", "qis-flow needs a matrix or random initial condition")
    if cfg.experiment == "oja-compare":
        if cfg.eta is None:
            raise ConfigError("eta", "required for oja-compare")
        if kind == "matrix":
            raise ConfigError("initial", "oja-compare needs a vector or random initial condition")
        if cfg.steps % cfg.stride:
            raise ConfigError("steps", "must be a multiple of stride")
        if any(x < 0 for x in cfg.c):
            raise ConfigError("c", "correlation eigenvalues must be non-negative")


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("<root>", f"malformed JSON: {e}") from None
    return config_from_dict(raw)
