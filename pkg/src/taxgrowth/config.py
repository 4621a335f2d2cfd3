"""Job files for the batch front end.

A job file is a list of ``key = value`` lines grouped under ``[section]``
headers::

    [model]
    m = 0.03, s = 0.10, rho = 0.2
    tau = 4
    gap = 0.03          # or mu_tilde = ...
    sigma = 0.05
    phi = 0.005
    f = 0.02

    [sweep]
    parameter = gap
    min = auto
    max = auto
    points = 41

Several assignments may share a line when separated by commas; ``kappa`` takes
a comma-separated list. ``#`` starts a comment. Unknown sections or keys,
duplicates and malformed values are rejected with the offending line number.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ValidationError
from .model import ModelParams, derive
from .simulator.config import SimConfig

JOB_KINDS = ("analytic", "simulate", "agents", "sweep", "optimal-tax", "classify")
REAL_FIELDS = ("m", "s", "rho", "tau", "mu_tilde", "sigma", "phi", "f", "j0")
SWEEP_AXES = REAL_FIELDS + ("gap",)
REQUIRED_MODEL = ("m", "s", "rho", "tau", "sigma", "phi", "f")
AUTO_MARGIN = 0.01


class ConfigError(ValidationError):
    def __init__(self, message: str, line: Optional[int] = None, key: str = "config"):
        self.field = key
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        Exception.__init__(self, prefix + message)


def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not finite")
    return value


def _int(text: str) -> int:
    return int(text, 0) if text.lower().startswith("0x") else int(text)


def _float_list(text: str) -> Tuple[float, ...]:
    return tuple(_float(t) for t in text.split(",") if t.strip())


def _bound(text: str):
    return "auto" if text.strip().lower() == "auto" else _float(text)


def _choice(*options):
    def convert(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text

    return convert


def _text(text: str) -> str:
    if not text:
        raise ValueError("empty")
    return text


SCHEMA = {
    "model": {
        **{name: _float for name in REAL_FIELDS},
        "gap": _float,
        "n_agents": _int,
        "kappa": _float_list,
    },
    "sim": {
        "dt": _float,
        "t_total": _float,
        "t_burnin": _float,
        "seed": _int,
        "mode": _choice("colored", "white"),
        "n_paths": _int,
        "record_every": _int,
    },
    "sweep": {
        "parameter": _choice(*SWEEP_AXES),
        "min": _bound,
        "max": _bound,
        "points": _int,
        "spacing": _choice("linear", "log"),
    },
    "output": {"dir": _text},
    "optimize": {"hold_nu": _float, "phi_min": _float, "phi_max": _float, "n_grid": _int},
}

_SECTION = re.compile(r"^\[\s*([A-Za-z_]\w*)\s*\]\s*(.*)$")
_PAIR_SPLIT = re.compile(r",\s*(?=[A-Za-z_]\w*\s*=)")
_PAIR = re.compile(r"^([A-Za-z_]\w*)\s*=\s*(.*?)\s*$")


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    lo: float
    hi: float
    points: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class OptimizeSpec:
    hold_nu: Optional[float] = None
    phi_min: float = 0.0
    phi_max: Optional[float] = None
    n_grid: int = 400


@dataclass(frozen=True)
class JobSpec:
    kind: Optional[str]
    model: ModelParams
    sim: Optional[SimConfig] = None
    sweep: Optional[SweepAxis] = None
    optimize: OptimizeSpec = field(default_factory=OptimizeSpec)
    out_dir: Optional[str] = None


def _tokenize(text: str) -> Dict[str, Dict[str, Tuple[object, int]]]:
    sections: Dict[str, Dict[str, Tuple[object, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _SECTION.match(line)
        if header:
            current = header.group(1).lower()
            if current not in SCHEMA:
                raise ConfigError(f"unknown section [{current}]; expected one of {', '.join(SCHEMA)}", lineno)
            sections.setdefault(current, {})
            line = header.group(2).strip()
            if not line:
                continue
        if current is None:
            raise ConfigError("assignment before any [section] header", lineno)
        for piece in _PAIR_SPLIT.split(line):
            pair = _PAIR.match(piece.strip())
            if not pair:
                raise ConfigError(f"expected 'key = value', got {piece.strip()!r}", lineno)
            key, value = pair.group(1), pair.group(2)
            schema = SCHEMA[current]
            if key not in schema:
                raise ConfigError(
                    f"unknown key {key!r} in [{current}]; allowed: {', '.join(schema)}", lineno, key
                )
            if key in sections[current]:
                first = sections[current][key][1]
                raise ConfigError(f"duplicate key {key!r} in [{current}] (first set on line {first})", lineno, key)
            try:
                converted = schema[key](value)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})", lineno, key) from None
            sections[current][key] = (converted, lineno)
    return sections


def _values(section: Dict[str, Tuple[object, int]]) -> dict:
    return {k: v for k, (v, _) in section.items()}


def _build_model(entries: Dict[str, Tuple[object, int]]) -> ModelParams:
    missing = [k for k in REQUIRED_MODEL if k not in entries]
    if "mu_tilde" not in entries and "gap" not in entries:
        missing.append("mu_tilde (or gap)")
    if missing:
        raise ConfigError(f"missing required [model] fields: {', '.join(missing)}", key="model")
    if "mu_tilde" in entries and "gap" in entries:
        raise ConfigError("set either mu_tilde or gap, not both", entries["gap"][1], "gap")
    values = _values(entries)
    gap = values.pop("gap", None)
    if gap is not None:
        values["mu_tilde"] = 0.0
    try:
        model = ModelParams(**values)
        if gap is not None:
            model = model.replace(mu_tilde=derive(model).m_tilde - gap)
    except ValidationError as exc:
        line = entries.get(exc.field, (None, None))[1]
        raise ConfigError(str(exc), line, exc.field) from None
    return model


def _wrap(builder, entries, section):
    try:
        return builder(**_values(entries))
    except ValidationError as exc:
        line = entries.get(exc.field, (None, None))[1]
        raise ConfigError(f"[{section}] {exc}", line, exc.field) from None


def auto_gap_bounds(model: ModelParams) -> Tuple[float, float]:
    """``[-Theta_minus - 0.01, Theta_plus + 0.01]``, spanning all four regimes."""
    d = derive(model)
    if d.theta_minus is None:
        raise ConfigError("auto gap bounds need f > 0", key="sweep")
    return -d.theta_minus - AUTO_MARGIN, d.theta_plus + AUTO_MARGIN


def _build_sweep(entries, model: ModelParams) -> SweepAxis:
    missing = [k for k in ("parameter", "min", "max", "points") if k not in entries]
    if missing:
        raise ConfigError(f"missing required [sweep] fields: {', '.join(missing)}", key="sweep")
    v = _values(entries)
    lo, hi = v["min"], v["max"]
    if "auto" in (lo, hi):
        if v["parameter"] != "gap":
            line = entries["min" if lo == "auto" else "max"][1]
            raise ConfigError("'auto' bounds are only defined for parameter = gap", line, "sweep")
        auto_lo, auto_hi = auto_gap_bounds(model)
        lo = auto_lo if lo == "auto" else lo
        hi = auto_hi if hi == "auto" else hi
    if v["points"] < 2:
        raise ConfigError("points must be >= 2", entries["points"][1], "points")
    if not lo < hi:
        raise ConfigError(f"need min < max, got {lo!r} >= {hi!r}", entries["max"][1], "max")
    spacing = v.get("spacing", "linear")
    if spacing == "log" and lo <= 0:
        raise ConfigError("log spacing needs min > 0", entries["min"][1], "min")
    return SweepAxis(v["parameter"], float(lo), float(hi), v["points"], spacing)


def _build_optimize(entries) -> OptimizeSpec:
    v = _values(entries)
    spec = OptimizeSpec(**v)
    if spec.phi_min < 0:
        raise ConfigError("phi_min must be >= 0", entries["phi_min"][1], "phi_min")
    if spec.phi_max is not None and not spec.phi_max > spec.phi_min:
        raise ConfigError("phi_max must exceed phi_min", entries["phi_max"][1], "phi_max")
    if spec.n_grid < 10:
        raise ConfigError("n_grid must be >= 10", entries["n_grid"][1], "n_grid")
    return spec


def parse_config(text: str, kind: Optional[str] = None) -> JobSpec:
    """Parse and validate a job file; raises :class:`ConfigError` on any problem."""
    if kind is not None and kind not in JOB_KINDS:
        raise ConfigError(f"unknown job kind {kind!r}; expected one of {', '.join(JOB_KINDS)}", key="kind")
    sections = _tokenize(text)
    model = _build_model(sections.get("model", {}))
    sim = _wrap(SimConfig, sections["sim"], "sim") if "sim" in sections else None
    sweep = _build_sweep(sections["sweep"], model) if "sweep" in sections else None
    optimize = _build_optimize(sections["optimize"]) if "optimize" in sections else OptimizeSpec()
    out_dir = sections.get("output", {}).get("dir", (None, None))[0]
    return JobSpec(kind=kind, model=model, sim=sim, sweep=sweep, optimize=optimize, out_dir=out_dir)


def apply_axis(model: ModelParams, parameter: str, value: float) -> ModelParams:
    """Set one sweep coordinate; ``gap`` moves ``mu_tilde`` to ``m_tilde - gap``."""
    if parameter == "gap":
        return model.replace(mu_tilde=derive(model).m_tilde - value)
    return model.replace(**{parameter: value})
