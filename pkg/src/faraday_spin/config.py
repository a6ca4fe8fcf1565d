"""Run configuration: a TOML document with unit-suffixed keys.

Example::

    preset = "paper"          # fills every physical number below
    seed = 7

    [params]
    lambda_rad_per_s = 9.8e10
    omega_p_rad_per_s = 2.47e15
    omega_e_rad_per_s = 2.48e15

    [probe]
    photons_total = 5e5       # or amplitude_l / amplitude_r / phase_l_rad / phase_r_rad
    interaction_time_ps = 20

    [spin]
    tau = 1.0

    [time_grid]
    start_ps = 0
    stop_ps = 20
    steps = 201

Unknown keys, duplicate keys, wrong unit suffixes and invariant violations
are errors that name the key and, where possible, its line.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import numpy as np

from . import tolerances as tol
from .model import REFERENCE_PARAMS, REFERENCE_PHOTONS, REFERENCE_TIME, CoherentAmplitudes, PhysicalParams, SpinMixture

__all__ = ["ConfigError", "RunConfig", "Grid", "parse_config", "load_config"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    steps: int
    log: bool = False

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("grid needs at least one step")
        if self.start > self.stop:
            raise ValueError("grid start exceeds stop")
        if self.log and self.start <= 0:
            raise ValueError("log-spaced grid must start above zero")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        if self.log:
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.steps)
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class OracleSettings:
    cutoff: int = 20
    photons_per_mode: float = 4.0
    coupling_halvings: int = 2
    tail_tolerance: float = 1e-8
    max_dim: int = tol.MAX_COMPOSITE_DIM


@dataclass(frozen=True)
class EstimateSettings:
    shots: int = 10_000
    background_rad: float = 5e-4
    bootstrap: int = 1000


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    amps: CoherentAmplitudes
    mix: SpinMixture
    interaction_time: float
    time_grid: Grid
    tau_grid: Grid
    photon_grid: Grid
    oracle: OracleSettings = field(default_factory=OracleSettings)
    estimate: EstimateSettings = field(default_factory=EstimateSettings)
    output_path: str | None = None
    seed: int = 0
    preset: str | None = None


PRESETS = {
    "paper": {
        "params": {
            "lambda_rad_per_s": REFERENCE_PARAMS.lam,
            "omega_p_rad_per_s": REFERENCE_PARAMS.omega_p,
            "omega_e_rad_per_s": REFERENCE_PARAMS.omega_e,
        },
        "probe": {"photons_total": REFERENCE_PHOTONS, "interaction_time_ps": REFERENCE_TIME * 1e12},
    }
}

# section -> key -> type; keys with a unit carry it as a suffix
SCHEMA: dict[str | None, dict[str, type]] = {
    None: {"preset": str, "seed": int},
    "params": {"lambda_rad_per_s": float, "omega_p_rad_per_s": float, "omega_e_rad_per_s": float},
    "probe": {
        "photons_total": float,
        "amplitude_l": float,
        "amplitude_r": float,
        "phase_l_rad": float,
        "phase_r_rad": float,
        "interaction_time_ps": float,
    },
    "spin": {"tau": float},
    "time_grid": {"start_ps": float, "stop_ps": float, "steps": int},
    "tau_grid": {"start": float, "stop": float, "steps": int},
    "photon_grid": {"min": float, "max": float, "points": int},
    "oracle": {
        "cutoff": int,
        "photons_per_mode": float,
        "coupling_halvings": int,
        "tail_tolerance": float,
        "max_dim": int,
    },
    "estimate": {"shots": int, "background_rad": float, "bootstrap": int},
    "output": {"path": str},
}

DEFAULTS = {
    "spin": {"tau": 1.0},
    "time_grid": {"start_ps": 0.0, "stop_ps": 20.0, "steps": 201},
    "tau_grid": {"start": 0.0, "stop": 1.0, "steps": 11},
    "photon_grid": {"min": 1e2, "max": 1e10, "points": 33},
}

_UNIT_SUFFIXES = ("_rad_per_s", "_ps", "_rad")


def _stem(key: str) -> str:
    for suf in _UNIT_SUFFIXES:
        if key.endswith(suf):
            return key[: -len(suf)]
    return key


def _locate(text: str, section: str | None, key: str) -> int | None:
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[\s*([^\]]+?)\s*\]", s)
        if m:
            current = m.group(1)
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*=", s):
            return lineno
    return None


class _Doc:
    def __init__(self, text: str, data: dict):
        self.text = text
        self.data = data

    def where(self, section, key=None) -> str:
        name = f"{section}.{key}" if section and key else (key or section)
        line = _locate(self.text, section, key) if key else None
        return f"'{name}' (line {line})" if line else f"'{name}'"

    def fail(self, section, key, msg):
        raise ConfigError(f"{self.where(section, key)}: {msg}")


def _check_keys(doc: _Doc) -> None:
    for key, val in doc.data.items():
        if isinstance(val, dict):
            if key not in SCHEMA:
                doc.fail(None, key, f"unknown section [{key}]")
            section_keys = SCHEMA[key]
            for sub, subval in val.items():
                if isinstance(subval, dict):
                    doc.fail(key, sub, "nested tables are not allowed")
                if sub not in section_keys:
                    _unknown(doc, key, sub, section_keys)
        elif key not in SCHEMA[None]:
            _unknown(doc, None, key, SCHEMA[None])


def _unknown(doc, section, key, allowed):
    for known in allowed:
        stem = _stem(known)
        if stem != known and (key == stem or key.startswith(stem + "_")):
            doc.fail(section, key, f"unit suffix mismatch; expected '{known}'")
    doc.fail(section, key, f"unknown key; allowed keys are {sorted(allowed)}")


def _get(doc: _Doc, merged: dict, section, key, required=False):
    table = merged if section is None else merged.get(section, {})
    if key not in table:
        if required:
            doc.fail(section, key, "missing required key")
        return None
    val = table[key]
    want = SCHEMA[section][key]
    if want is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, want) or isinstance(val, bool):
        doc.fail(section, key, f"expected {want.__name__}, got {type(val).__name__}")
    return val


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    doc = _Doc(text, data)
    _check_keys(doc)

    preset = data.get("preset")
    merged: dict = {k: dict(v) for k, v in DEFAULTS.items()}
    if preset is not None:
        if preset not in PRESETS:
            doc.fail(None, "preset", f"unknown preset {preset!r}; available: {sorted(PRESETS)}")
        for sec, vals in PRESETS[preset].items():
            merged.setdefault(sec, {}).update(vals)
    for key, val in data.items():
        if isinstance(val, dict):
            if key == "probe" and ({"amplitude_l", "amplitude_r"} & val.keys()):
                merged.get("probe", {}).pop("photons_total", None)
            merged.setdefault(key, {}).update(val)
        else:
            merged[key] = val

    required = preset is None

    def num(section, key, req=required):
        return _get(doc, merged, section, key, req)

    lam = num("params", "lambda_rad_per_s")
    wp = num("params", "omega_p_rad_per_s")
    we = num("params", "omega_e_rad_per_s")
    try:
        params = PhysicalParams(lam, wp, we)
    except ValueError as exc:
        doc.fail("params", None, str(exc))

    photons = num("probe", "photons_total", False)
    amp_l = num("probe", "amplitude_l", False)
    amp_r = num("probe", "amplitude_r", False)
    try:
        if amp_l is not None or amp_r is not None:
            if photons is not None:
                doc.fail("probe", "photons_total", "give either photons_total or amplitudes, not both")
            if amp_l is None or amp_r is None:
                doc.fail("probe", "amplitude_l" if amp_l is None else "amplitude_r", "missing required key")
            amps = CoherentAmplitudes(
                amp_l, amp_r, num("probe", "phase_l_rad", False) or 0.0, num("probe", "phase_r_rad", False) or 0.0
            )
        else:
            if photons is None:
                doc.fail("probe", "photons_total", "missing required key")
            amps = CoherentAmplitudes.from_total_photons(photons)
    except ConfigError:
        raise
    except ValueError as exc:
        doc.fail("probe", "photons_total", str(exc))

    t_ps = num("probe", "interaction_time_ps")
    if not t_ps >= 0:
        doc.fail("probe", "interaction_time_ps", "must be nonnegative")

    tau = num("spin", "tau", False)
    try:
        mix = SpinMixture(tau)
    except ValueError:
        doc.fail("spin", "tau", f"tau = {tau} violates 0 <= tau <= 1")
    photons_now = amps.mean_photons
    if photons_now <= 0:
        doc.fail("probe", "photons_total", "photon number must be positive")

    def grid(section, a, b, n, scale=1.0, log=False):
        try:
            return Grid(num(section, a) * scale, num(section, b) * scale, num(section, n), log=log)
        except ValueError as exc:
            doc.fail(section, None, str(exc))

    time_grid = grid("time_grid", "start_ps", "stop_ps", "steps", scale=1e-12)
    if time_grid.start < 0:
        doc.fail("time_grid", "start_ps", "times must be nonnegative")
    tau_grid = grid("tau_grid", "start", "stop", "steps")
    if tau_grid.start < 0 or tau_grid.stop > 1:
        doc.fail("tau_grid", None, "tau values must lie in [0, 1]")
    photon_grid = grid("photon_grid", "min", "max", "points", log=True)

    o = merged.get("oracle", {})
    oracle = OracleSettings(**{k: _get(doc, merged, "oracle", k) for k in o})
    if oracle.cutoff < 1:
        doc.fail("oracle", "cutoff", "must be >= 1")
    if oracle.photons_per_mode <= 0:
        doc.fail("oracle", "photons_per_mode", "must be positive")
    if oracle.coupling_halvings < 0:
        doc.fail("oracle", "coupling_halvings", "must be >= 0")
    if not 0 < oracle.tail_tolerance < 1:
        doc.fail("oracle", "tail_tolerance", "must lie in (0, 1)")
    e = merged.get("estimate", {})
    estimate = EstimateSettings(**{k: _get(doc, merged, "estimate", k) for k in e})
    if estimate.shots < 2:
        doc.fail("estimate", "shots", "must be >= 2")
    if estimate.background_rad < 0:
        doc.fail("estimate", "background_rad", "must be nonnegative")

    seed = merged.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        doc.fail(None, "seed", "must be a nonnegative integer")

    return RunConfig(
        params=params,
        amps=amps,
        mix=mix,
        interaction_time=t_ps * 1e-12,
        time_grid=time_grid,
        tau_grid=tau_grid,
        photon_grid=photon_grid,
        oracle=oracle,
        estimate=estimate,
        output_path=_get(doc, merged, "output", "path"),
        seed=seed,
        preset=preset,
    )


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
