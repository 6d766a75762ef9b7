"""Shared configuration handling.

A single TOML file configures every subsystem.  Keys are validated against
the schema below; the same schema supplies the CLI flag help strings, so
``--help`` and config validation can never drift apart.  Package defaults
ship in ``data/defaults.toml`` and cover every key.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib


class ConfigError(Exception):
    """Bad config file, unknown key, or ill-typed value."""


@dataclass(frozen=True)
class ConfigKey:
    type: type
    help: str
    choices: tuple | None = None


SCHEMA: dict[str, dict[str, ConfigKey]] = {
    "lattice": {
        "a_nm": ConfigKey(float, "lattice constant in nm"),
    },
    "bands": {
        "path": ConfigKey(str, "k-path name", ("delta", "lambda", "kl")),
        "samples": ConfigKey(int, "k-points per path segment (>= 2)"),
    },
    "tb": {
        "es": ConfigKey(float, "s on-site energy, eV"),
        "ep": ConfigKey(float, "p on-site energy, eV"),
        "esstar": ConfigKey(float, "s* on-site energy, eV"),
        "vss": ConfigKey(float, "s-s hopping element, eV"),
        "vsp": ConfigKey(float, "s-p hopping element, eV"),
        "vxx": ConfigKey(float, "parallel p-p hopping element, eV"),
        "vxy": ConfigKey(float, "perpendicular p-p hopping element, eV"),
        "vsstarp": ConfigKey(float, "s*-p hopping element, eV"),
        "soc_lambda": ConfigKey(float, "intra-atomic L.S strength, eV (>= 0)"),
    },
    "spinorbit": {
        "q0": ConfigKey(float, "k^2 coefficient of the spin-independent term"),
        "check_field": ConfigKey(float, "polar field magnitude for built-in checks, eV"),
        "sp_dipole": ConfigKey(float, "s-p dipole matrix element scale"),
        "degeneracy_tol_ev": ConfigKey(float, "energy tolerance for degenerate grouping, eV"),
    },
    "valleys": {
        "x0_ml": ConfigKey(float, "Delta-valley longitudinal mass (m0)"),
        "x0_mt": ConfigKey(float, "Delta-valley transverse mass (m0)"),
        "l_ml": ConfigKey(float, "L-valley longitudinal mass (m0)"),
        "l_mt": ConfigKey(float, "L-valley transverse mass (m0)"),
        "well_nm": ConfigKey(float, "confinement well width, nm"),
    },
    "dots": {
        "side_nm": ConfigKey(float, "cubic dot edge length, nm"),
        "rounding": ConfigKey(str, "unit-cell rounding mode", ("nearest", "floor")),
    },
    "inject": {
        "p_l": ConfigKey(float, "probability the shuttled electron lands on the L level"),
        "seed": ConfigKey(int, "RNG seed"),
        "max_retries": ConfigKey(int, "flush-and-retry budget"),
        "u_ev": ConfigKey(float, "charging energy per added electron, eV"),
        "levels": ConfigKey(int, "orbital levels per dot"),
        "l_index": ConfigKey(int, "1-based orbital index of the L level"),
        "delta_e_l_gamma_ev": ConfigKey(float, "energy gap above the L level, eV"),
        "level_spacing_ev": ConfigKey(float, "spacing of the lower orbital levels, eV"),
        "trials": ConfigKey(int, "Monte Carlo trials (0 = skip)"),
    },
    "poisson": {
        "variant": ConfigKey(str, "fin geometry variant", ("planarized", "protruding")),
        "w_nm": ConfigKey(float, "fin (and gate) width, nm"),
        "h_nm": ConfigKey(float, "grid cell size, nm"),
        "lz_nm": ConfigKey(float, "domain height, nm"),
        "ly_nm": ConfigKey(float, "domain width, nm"),
        "fin_height_nm": ConfigKey(float, "fin height above substrate, nm"),
        "gate_ox_nm": ConfigKey(float, "gate oxide thickness, nm"),
        "gate_nm": ConfigKey(float, "gate electrode thickness, nm"),
        "gate_wrap_nm": ConfigKey(float, "wrap depth of the straddling gate, nm"),
        "substrate_nm": ConfigKey(float, "substrate slab thickness, nm"),
        "vgate": ConfigKey(float, "gate voltage, V"),
        "vsub": ConfigKey(float, "substrate voltage, V"),
        "interface_mode": ConfigKey(
            str, "oxide/Si interface treatment",
            ("dielectric_continuity", "fixed_potential")),
        "interface_potential": ConfigKey(float, "interface potential in fixed_potential mode, V"),
        "eps_si": ConfigKey(float, "relative permittivity of Si"),
        "eps_ox": ConfigKey(float, "relative permittivity of the oxide"),
        "tol": ConfigKey(float, "relative residual convergence target"),
        "max_iter": ConfigKey(int, "iteration cap for the SOR solver"),
        "method": ConfigKey(str, "linear solver", ("direct", "sor")),
        "n_levels": ConfigKey(int, "contour quantization levels"),
    },
}


def _check_value(section: str, key: str, value: Any) -> Any:
    try:
        spec = SCHEMA[section][key]
    except KeyError:
        raise ConfigError(f"unknown config key: {section}.{key}") from None
    if spec.type is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, spec.type) or isinstance(value, bool) is not (spec.type is bool):
        raise ConfigError(
            f"config key {section}.{key} expects {spec.type.__name__}, "
            f"got {type(value).__name__} ({value!r})")
    if spec.choices is not None and value not in spec.choices:
        raise ConfigError(
            f"config key {section}.{key} must be one of {spec.choices}, got {value!r}")
    return value


def _validate(tree: dict) -> dict:
    out: dict[str, dict[str, Any]] = {}
    for section, entries in tree.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section: {section}")
        if not isinstance(entries, dict):
            raise ConfigError(f"config section {section} must be a table")
        out[section] = {k: _check_value(section, k, v) for k, v in entries.items()}
    return out


def default_config() -> dict:
    """Package defaults, freshly loaded from the shipped parameter file."""
    text = resources.files("lvalley").joinpath("data/defaults.toml").read_text("utf-8")
    cfg = _validate(tomllib.loads(text))
    for section, entries in SCHEMA.items():
        for key in entries:
            if key not in cfg.get(section, {}):
                raise ConfigError(f"shipped defaults are missing {section}.{key}")
    return cfg


def load_config(path: str | Path | None = None,
                overrides: dict[str, dict[str, Any]] | None = None) -> dict:
    """Resolve a config: defaults <- user file <- explicit overrides."""
    cfg = default_config()
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        try:
            user = tomllib.loads(p.read_text("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {p}: {exc}") from exc
        for section, entries in _validate(user).items():
            cfg[section].update(entries)
    if overrides:
        for section, entries in overrides.items():
            for key, value in entries.items():
                cfg[section][key] = _check_value(section, key, value)
    return cfg


def get(cfg: dict, dotted: str) -> Any:
    """Fetch ``cfg`` value by a dotted key such as ``"tb.es"``."""
    section, key = dotted.split(".", 1)
    try:
        return cfg[section][key]
    except KeyError:
        raise ConfigError(f"unknown config key: {dotted}") from None


def dump_json(cfg: dict) -> str:
    return json.dumps(cfg, indent=2, sort_keys=True)
