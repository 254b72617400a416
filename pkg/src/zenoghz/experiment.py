"""JSON experiment files: chain parameters plus one block per CLI command.

Example::

    {
      "n_atoms": 3, "g": 1.0, "v": 1.0, "omega_n": 0.04,
      "sweep": {
        "axes": [{"param": "delta_g1", "start": -0.1, "stop": 0.1, "steps": 21},
                 {"param": "delta_g3", "start": -0.1, "stop": 0.1, "steps": 21}],
        "observable": "fidelity"
      }
    }

Unspecified chain fields take the :class:`~zenoghz.basis.ChainConfig`
defaults: ``omega_1 = (sqrt(2)+1) * omega_n``, ``v = g``, all decay rates 0.
Unknown keys anywhere are rejected.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .basis import ChainConfig
from .errors import ConfigError
from .protocol import OBSERVABLES, Axis

CHAIN_KEYS = {"n_atoms", "g", "v", "omega_1", "omega_n", "gamma", "kappa_c", "kappa_f",
              "g_dev", "v_dev", "frequency_unit"}
COMMANDS = ("ghz", "sweep", "populations", "compare-eff", "epr")
TOP_KEYS = CHAIN_KEYS | set(COMMANDS) | {"output_path", "n_samples", "clustering_tol", "description"}

BLOCK_KEYS = {
    "ghz": {"use_decoherence", "tau"},
    "populations": {"use_decoherence"},
    "sweep": {"axes", "observable", "use_decoherence"},
    "compare-eff": set(),
    "epr": {"measured_atom", "source"},
}


@dataclass
class Experiment:
    chain: ChainConfig
    blocks: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    n_samples: int = 2001
    clustering_tol: Optional[float] = None
    description: str = ""

    def block(self, command: str) -> dict:
        return self.blocks.get(command, {})

    def sweep_axes(self) -> list:
        spec = self.block("sweep").get("axes")
        if not spec:
            raise ConfigError("sweep block needs a non-empty 'axes' list")
        return [_parse_axis(a) for a in spec]

    @property
    def sweep_observable(self) -> str:
        return self.block("sweep").get("observable", "fidelity")


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def _parse_axis(spec) -> Axis:
    if not isinstance(spec, dict):
        raise ConfigError(f"axis must be an object, got {spec!r}")
    extra = set(spec) - {"param", "start", "stop", "steps", "values"}
    if extra:
        raise ConfigError(f"unknown axis keys: {sorted(extra)}")
    param = spec.get("param")
    if not isinstance(param, str):
        raise ConfigError("axis needs a string 'param'")
    if "values" in spec:
        if {"start", "stop", "steps"} & set(spec):
            raise ConfigError("axis takes either 'values' or start/stop/steps, not both")
        return Axis(param, np.array([_number(x, param) for x in spec["values"]]))
    try:
        steps = spec["steps"]
        start, stop = _number(spec["start"], "start"), _number(spec["stop"], "stop")
    except KeyError as exc:
        raise ConfigError(f"axis {param!r} missing {exc.args[0]!r}") from None
    if isinstance(steps, bool) or not isinstance(steps, int):
        raise ConfigError("axis 'steps' must be an integer")
    return Axis.linspace(param, start, stop, steps)


def _check_block(name, block):
    if not isinstance(block, dict):
        raise ConfigError(f"'{name}' block must be an object")
    extra = set(block) - BLOCK_KEYS[name]
    if extra:
        raise ConfigError(f"unknown keys in '{name}' block: {sorted(extra)}")
    if "use_decoherence" in block and not isinstance(block["use_decoherence"], bool):
        raise ConfigError(f"'{name}.use_decoherence' must be true or false")
    if name == "sweep":
        axes = block.get("axes", [])
        if not isinstance(axes, list) or not 1 <= len(axes) <= 2:
            raise ConfigError("sweep 'axes' must list one or two axes")
        for a in axes:
            _parse_axis(a)
        if block.get("observable", "fidelity") not in OBSERVABLES:
            raise ConfigError(f"sweep observable must be one of {OBSERVABLES}")
    if name == "epr":
        atom = block.get("measured_atom")
        if atom is not None and (isinstance(atom, bool) or not isinstance(atom, int)):
            raise ConfigError("epr.measured_atom must be an integer")
        if block.get("source", "simulated") not in ("simulated", "ideal"):
            raise ConfigError("epr.source must be 'simulated' or 'ideal'")
    if name == "ghz" and block.get("tau") is not None:
        _number(block["tau"], "ghz.tau")


def parse_experiment(data: dict) -> Experiment:
    if not isinstance(data, dict):
        raise ConfigError("experiment file must hold a JSON object")
    extra = set(data) - TOP_KEYS
    if extra:
        raise ConfigError(f"unknown keys: {sorted(extra)}")
    chain_kwargs = {}
    for key in CHAIN_KEYS & set(data):
        value = data[key]
        if key == "n_atoms":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError("n_atoms must be an integer")
        elif key in ("g_dev", "v_dev"):
            if not isinstance(value, list):
                raise ConfigError(f"{key} must be a list of numbers")
            value = tuple(_number(x, key) for x in value)
        elif value is not None:
            value = _number(value, key)
        chain_kwargs[key] = value
    chain = ChainConfig(**chain_kwargs)

    blocks = {}
    for name in COMMANDS:
        if name in data:
            _check_block(name, data[name])
            blocks[name] = data[name]

    n_samples = data.get("n_samples", 2001)
    if isinstance(n_samples, bool) or not isinstance(n_samples, int) or n_samples < 2:
        raise ConfigError("n_samples must be an integer >= 2")
    tol = data.get("clustering_tol")
    if tol is not None and not _number(tol, "clustering_tol") > 0:
        raise ConfigError("clustering_tol must be positive")
    out = data.get("output_path")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output_path must be a string")
    return Experiment(chain=chain, blocks=blocks, output_path=out, n_samples=n_samples,
                      clustering_tol=tol, description=str(data.get("description", "")))


def load_experiment(path) -> Experiment:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_experiment(data)


def preset_names() -> list:
    return sorted(p.name[:-5] for p in resources.files("zenoghz.presets").iterdir()
                  if p.name.endswith(".json"))


def load_preset(name: str) -> Experiment:
    if name not in preset_names():
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    text = resources.files("zenoghz.presets").joinpath(f"{name}.json").read_text()
    return parse_experiment(json.loads(text))
