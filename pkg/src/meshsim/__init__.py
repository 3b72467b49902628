"""Deterministic mesh data-collection simulator.

Compares two relay strategies for collecting sensor data over a
flooding-style mesh: the default controlled-flooding relay and a reactive
least-hop route toward a (possibly moving) collector, together with the
dedup structures, metrics, and command protocol used to benchmark them.
"""

from .commander import (
    Command,
    CommanderSession,
    CommandVerb,
    NodeStats,
    ReachabilityReport,
    check_reachability,
    execute_command,
    format_stats_table,
    make_server,
    run_script,
    serve_session,
)
from .core import (
    Algorithm,
    ConfigError,
    Message,
    MessageKey,
    MessageKind,
    NodeSpec,
    Role,
    ScenarioConfig,
    Waypoint,
    decode_message,
    encode_message,
    message_hash,
    message_key,
)
from .experiments import (
    ComparisonTable,
    ExperimentPlan,
    PlanError,
    emit_accumulated_series,
    load_plan,
    render_series_csv,
    run_plan,
)
from .metrics import (
    AggregateSummary,
    HashMapTracker,
    IntervalTracker,
    RunReport,
    TrackerLimitError,
    Verdict,
    aggregate,
    scale_rule_of_three,
)
from .routing import (
    Broadcast,
    Drop,
    MamState,
    RelayCache,
    Unicast,
    btmr_relay,
    mam_handle,
    reset_routing_state,
)
from .scenario import dump_scenario, load_scenario, parse_scenario
from .simnet import (
    MobilityTrace,
    RadioModel,
    RANGE_PRESETS,
    Topology,
    World,
    hub_position,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AggregateSummary",
    "Broadcast",
    "Command",
    "CommanderSession",
    "CommandVerb",
    "ComparisonTable",
    "ConfigError",
    "Drop",
    "ExperimentPlan",
    "HashMapTracker",
    "IntervalTracker",
    "MamState",
    "Message",
    "MessageKey",
    "MessageKind",
    "MobilityTrace",
    "NodeSpec",
    "NodeStats",
    "PlanError",
    "RANGE_PRESETS",
    "RadioModel",
    "ReachabilityReport",
    "RelayCache",
    "Role",
    "RunReport",
    "ScenarioConfig",
    "Topology",
    "TrackerLimitError",
    "Unicast",
    "Verdict",
    "Waypoint",
    "World",
    "aggregate",
    "btmr_relay",
    "check_reachability",
    "decode_message",
    "dump_scenario",
    "emit_accumulated_series",
    "encode_message",
    "execute_command",
    "format_stats_table",
    "hub_position",
    "load_plan",
    "load_scenario",
    "make_server",
    "mam_handle",
    "message_hash",
    "message_key",
    "parse_scenario",
    "render_series_csv",
    "reset_routing_state",
    "run",
    "run_plan",
    "run_script",
    "scale_rule_of_three",
    "serve_session",
]
