"""Scenario files: human-readable key-value header plus a node table.

Example::

    algorithm = btmr
    duration_ms = 20000

    [nodes]
    # id  x     y     role
    0     0.0   0.0   hub
    1     5.0   0.0   commander
    2     10.0  0.0   sensor

    [mobility]
    # t_ms  x     y
    0       0.0   0.0

The package ships reference scenarios (``line3``, ``indoor10``,
``outdoor10``); ``load_scenario`` accepts either a file path or one of those
names.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Union

from .core import (
    Algorithm,
    ConfigError,
    NodeSpec,
    Role,
    ScenarioConfig,
    Waypoint,
)

_SCALAR_KEYS = {
    "algorithm": "algorithm",
    "delta_ms": "delta_ms",
    "heartbeat_period_ms": "heartbeat_period_ms",
    "data_period_ms": "data_period_ms",
    "relay_cache_size": "relay_cache_size",
    "tx_queue_capacity": "tx_queue_capacity",
    "duration_ms": "duration_ms",
    "rng_seed": "rng_seed",
    "radio_preset": "radio_preset",
    "radio_range_m": "radio_preset",
    "loss_prob": "loss_prob",
    "latency_ms": "latency_ms",
    "tracker": "tracker",
    "fault_duplicate": "fault_duplicate",
    "name": "name",
}

_INT_FIELDS = {"delta_ms", "heartbeat_period_ms", "data_period_ms",
               "relay_cache_size", "tx_queue_capacity", "duration_ms",
               "rng_seed", "latency_ms"}

_ROLES = {role.value: role for role in Role}

BUILTIN_SCENARIOS = ("line3", "indoor10", "outdoor10")


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_scenario(text: str, name: str = "") -> ScenarioConfig:
    fields: dict = {"name": name}
    nodes: list[NodeSpec] = []
    waypoints: list[Waypoint] = []
    section = "header"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("["):
            if line == "[nodes]":
                section = "nodes"
            elif line == "[mobility]":
                section = "mobility"
            else:
                raise ConfigError(f"line {lineno}: unknown section {line}")
            continue
        if section == "header":
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _SCALAR_KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key}")
            field = _SCALAR_KEYS[key]
            if field == "algorithm":
                try:
                    fields[field] = Algorithm(value)
                except ValueError:
                    raise ConfigError(f"line {lineno}: algorithm must be btmr or mam")
            elif key == "radio_range_m":
                fields[field] = float(value)
            elif field == "loss_prob":
                fields[field] = float(value)
            elif field == "fault_duplicate":
                if value not in ("true", "false"):
                    raise ConfigError(f"line {lineno}: fault_duplicate must be true or false")
                fields[field] = value == "true"
            elif field in _INT_FIELDS:
                fields[field] = int(value)
            else:
                fields[field] = value
        elif section == "nodes":
            parts = line.split()
            if len(parts) != 4:
                raise ConfigError(f"line {lineno}: node rows are `id x y role`")
            node_id, x, y, role = parts
            if role not in _ROLES:
                raise ConfigError(f"line {lineno}: unknown role {role}")
            nodes.append(NodeSpec(int(node_id), float(x), float(y), _ROLES[role]))
        else:
            parts = line.split()
            if len(parts) != 3:
                raise ConfigError(f"line {lineno}: mobility rows are `t_ms x y`")
            t, x, y = parts
            waypoints.append(Waypoint(int(t), float(x), float(y)))
    if "duration_ms" not in fields:
        raise ConfigError("duration_ms missing")
    config = ScenarioConfig(topology=nodes, mobility=waypoints or None, **fields)
    config.validate()
    return config


def dump_scenario(config: ScenarioConfig) -> str:
    lines = []
    if config.name:
        lines.append(f"name = {config.name}")
    lines.append(f"algorithm = {config.algorithm.value}")
    lines.append(f"delta_ms = {config.delta_ms}")
    lines.append(f"heartbeat_period_ms = {config.heartbeat_period_ms}")
    lines.append(f"data_period_ms = {config.data_period_ms}")
    lines.append(f"relay_cache_size = {config.relay_cache_size}")
    lines.append(f"tx_queue_capacity = {config.tx_queue_capacity}")
    lines.append(f"duration_ms = {config.duration_ms}")
    lines.append(f"rng_seed = {config.rng_seed}")
    if isinstance(config.radio_preset, str):
        lines.append(f"radio_preset = {config.radio_preset}")
    else:
        lines.append(f"radio_range_m = {config.radio_preset}")
    lines.append(f"loss_prob = {config.loss_prob}")
    lines.append(f"latency_ms = {config.latency_ms}")
    lines.append(f"tracker = {config.tracker}")
    lines.append(f"fault_duplicate = {'true' if config.fault_duplicate else 'false'}")
    lines.append("")
    lines.append("[nodes]")
    for spec in config.topology:
        lines.append(f"{spec.node} {spec.x} {spec.y} {spec.role.value}")
    if config.mobility:
        lines.append("")
        lines.append("[mobility]")
        for w in config.mobility:
            lines.append(f"{w.t_ms} {w.x} {w.y}")
    return "\n".join(lines) + "\n"


def load_scenario(source: Union[str, Path]) -> ScenarioConfig:
    """Load a scenario from a path, or by built-in name (``line3``, ...)."""
    path = Path(source)
    if path.is_file():
        return parse_scenario(path.read_text(), name=path.stem)
    name = str(source)
    if name in BUILTIN_SCENARIOS:
        text = resources.files("meshsim").joinpath(f"scenarios/{name}.scn").read_text()
        return parse_scenario(text, name=name)
    raise ConfigError(f"scenario not found: {source}")
