"""Deterministic discrete-event engine.

A ``World`` owns every node's routing state, a disc-model radio, the
collector's mobility trace, per-node transmit queues, and a single seeded
RNG for link-loss draws. Events pop in (time, insertion) order, so identical
configurations replay identical runs byte for byte.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
import struct
from collections import Counter, deque
from dataclasses import dataclass, replace
from typing import Optional, Union

from .commander import CommandVerb, NodeStats, decode_stats, encode_stats
from .core import (
    Algorithm,
    ConfigError,
    Message,
    MessageKey,
    MessageKind,
    NodeId,
    Role,
    ScenarioConfig,
    Waypoint,
    message_key,
    sensor_reading,
)
from .metrics import RunReport, make_tracker
from .routing import (
    Broadcast,
    Drop,
    MamState,
    RelayCache,
    btmr_relay,
    mam_handle,
    reset_routing_state,
)

# Maximum link distances measured with nodes on the ground and elevated
# ~11 cm (antennas facing vs. opposed).
RANGE_PRESETS = {
    "ground": 6.0,
    "elevated": 40.0,
    "elevated-opposed": 32.0,
}

_ACK_PAYLOAD = struct.Struct(">HI")


@dataclass(frozen=True)
class RadioModel:
    """Disc propagation: in range iff distance <= range_m, fixed per-hop latency."""

    range_m: float
    per_link_loss_prob: float = 0.0
    latency_ms: int = 10


def build_radio(config: ScenarioConfig) -> RadioModel:
    preset = config.radio_preset
    if isinstance(preset, str):
        if preset not in RANGE_PRESETS:
            raise ConfigError(f"radio_preset unknown: {preset}")
        range_m = RANGE_PRESETS[preset]
    else:
        range_m = float(preset)
    return RadioModel(range_m=range_m,
                      per_link_loss_prob=config.loss_prob,
                      latency_ms=config.latency_ms)


class MobilityTrace:
    """Piecewise-linear waypoint schedule, clamped before/after the endpoints."""

    def __init__(self, waypoints: list[Waypoint]):
        if not waypoints:
            raise ConfigError("mobility trace is empty")
        times = [w.t_ms for w in waypoints]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("mobility waypoint times must strictly increase")
        self.waypoints = list(waypoints)

    def position(self, t: int) -> tuple[float, float]:
        pts = self.waypoints
        if t <= pts[0].t_ms:
            return (pts[0].x, pts[0].y)
        if t >= pts[-1].t_ms:
            return (pts[-1].x, pts[-1].y)
        for a, b in zip(pts, pts[1:]):
            if t <= b.t_ms:
                frac = (t - a.t_ms) / (b.t_ms - a.t_ms)
                return (a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y))
        return (pts[-1].x, pts[-1].y)


def hub_position(trace: MobilityTrace, t: int) -> tuple[float, float]:
    """Collector position at time ``t`` (clamped piecewise-linear interpolation)."""
    return trace.position(t)


class Topology:
    """Node placements plus radio range; connectivity is always derived."""

    def __init__(self, specs, range_m: float):
        self.specs = list(specs)
        self.range_m = range_m
        self.positions = {s.node: (s.x, s.y) for s in self.specs}
        self.roles = {s.node: s.role for s in self.specs}

    def distance(self, u: NodeId, v: NodeId) -> float:
        (ux, uy), (vx, vy) = self.positions[u], self.positions[v]
        return math.hypot(ux - vx, uy - vy)

    def in_range(self, u: NodeId, v: NodeId) -> bool:
        return self.distance(u, v) <= self.range_m

    def neighbors(self, u: NodeId) -> list[NodeId]:
        return [v for v in sorted(self.positions) if v != u and self.in_range(u, v)]

    def component(self, start: NodeId) -> set[NodeId]:
        """Connected component of ``start`` in the derived graph (static positions)."""
        seen = {start}
        frontier = [start]
        while frontier:
            u = frontier.pop()
            for v in self.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
        return seen


# --- events ---------------------------------------------------------------

@dataclass(frozen=True)
class Deliver:
    message: Message
    to: NodeId


@dataclass(frozen=True)
class GenerateData:
    node: NodeId


@dataclass(frozen=True)
class EmitHeartbeat:
    node: NodeId


@dataclass(frozen=True)
class TxDequeue:
    node: NodeId


@dataclass(frozen=True)
class CommandArrival:
    verb: CommandVerb
    issuer: NodeId


Event = Union[Deliver, GenerateData, EmitHeartbeat, TxDequeue, CommandArrival]


class SimNode:
    """Per-node state owned by the engine: routing caches, queue, counters."""

    def __init__(self, spec, config: ScenarioConfig):
        self.id: NodeId = spec.node
        self.role: Role = spec.role
        self.pos = (spec.x, spec.y)
        self.algorithm = config.algorithm
        self.mam = MamState(delta_ms=config.delta_ms)
        self.cache = RelayCache(config.relay_cache_size)
        self.next_seq = 0
        self.txq: deque = deque()
        self.tx_scheduled = False
        self.radio_free_at = 0
        # data-plane statistics (heartbeat/control traffic excluded)
        self.generated = 0
        self.relayed = 0
        self.received = 0
        # energy proxies: every transmission / delivery of any kind
        self.tx_count = 0
        self.rx_count = 0
        self.tx_data_count = 0
        self.tx_dropped = 0
        self.restarts = 0
        self.drops: Counter = Counter()
        # replay protection survives reboots, like provisioning sequence state
        self.last_cmd_seq: dict[NodeId, int] = {}

    def reset_stats(self) -> None:
        self.generated = 0
        self.relayed = 0
        self.received = 0
        self.tx_count = 0
        self.rx_count = 0
        self.tx_data_count = 0
        self.tx_dropped = 0
        self.restarts = 0
        self.drops.clear()

    def reboot(self) -> None:
        """Everything in RAM goes; the restart counter lives in NVM and ticks up."""
        restarts = self.restarts + 1
        self.reset_stats()
        self.restarts = restarts
        self.mam.reset()
        self.cache.clear()
        self.txq.clear()

    def stats_snapshot(self) -> NodeStats:
        return NodeStats(
            node=self.id,
            generated=self.generated,
            relayed=self.relayed,
            received=self.received,
            tx_dropped=self.tx_dropped,
            restarts=self.restarts,
        )


class World:
    """One simulation run: event queue, nodes, radio, collector-side metrics."""

    def __init__(self, config: ScenarioConfig):
        config.validate()
        self.config = config
        self.radio = build_radio(config)
        self.topology = Topology(config.topology, self.radio.range_m)
        self.rng = random.Random(config.rng_seed)
        self.now = 0
        self._heap: list = []
        self._tie = itertools.count()
        self.nodes = {s.node: SimNode(s, config) for s in config.topology}
        self.node_ids = sorted(self.nodes)
        self.hub_id = config.hub_id
        self.commander_id = config.commander_id
        hub_spec = next(s for s in config.topology if s.role is Role.MOBILE_HUB)
        waypoints = config.mobility or [Waypoint(0, hub_spec.x, hub_spec.y)]
        self.trace = MobilityTrace(waypoints)
        self.tracker = make_tracker(config.tracker)
        self.collected_stats: dict[NodeId, NodeStats] = {}
        self.delivered: list[tuple[int, MessageKey]] = []
        self.probes: dict[tuple[NodeId, int], set[NodeId]] = {}
        self.last_probe: Optional[tuple[NodeId, int]] = None
        self.schedule(0, EmitHeartbeat(self.hub_id))
        for sensor in config.sensor_ids:
            self.schedule(config.data_period_ms, GenerateData(sensor))

    # --- scheduling -------------------------------------------------------

    def schedule(self, t: int, event: Event) -> None:
        heapq.heappush(self._heap, (t, next(self._tie), event))

    def pending(self) -> int:
        return len(self._heap)

    def step(self) -> bool:
        """Pop and apply exactly one event; False when the queue is empty."""
        if not self._heap:
            return False
        t, _, event = heapq.heappop(self._heap)
        self.now = t
        self._apply(event)
        return True

    def run_until(self, limit_ms: int) -> None:
        """Apply every event strictly before ``limit_ms``, then park the clock there."""
        while self._heap and self._heap[0][0] < limit_ms:
            self.step()
        if limit_ms > self.now:
            self.now = limit_ms

    # --- geometry ---------------------------------------------------------

    def position(self, node: NodeId, t: Optional[int] = None) -> tuple[float, float]:
        if node == self.hub_id:
            return self.trace.position(self.now if t is None else t)
        return self.nodes[node].pos

    def in_range(self, u: NodeId, v: NodeId) -> bool:
        (ux, uy) = self.position(u)
        (vx, vy) = self.position(v)
        return math.hypot(ux - vx, uy - vy) <= self.radio.range_m

    def neighbors_of(self, u: NodeId) -> list[NodeId]:
        return [v for v in self.node_ids if v != u and self.in_range(u, v)]

    # --- event application ------------------------------------------------

    def _apply(self, event: Event) -> None:
        if isinstance(event, Deliver):
            self._deliver(event.message, self.nodes[event.to])
        elif isinstance(event, TxDequeue):
            self._tx_dequeue(self.nodes[event.node])
        elif isinstance(event, GenerateData):
            self._generate_data(self.nodes[event.node])
        elif isinstance(event, EmitHeartbeat):
            self._emit_heartbeat(self.nodes[event.node])
        elif isinstance(event, CommandArrival):
            self._command_arrival(event)
        else:
            raise TypeError(f"unknown event: {event!r}")

    def _emit_heartbeat(self, hub: SimNode) -> None:
        message = Message(MessageKind.HEARTBEAT, origin=hub.id, seq=hub.next_seq,
                          hops=0, sender=hub.id)
        hub.next_seq += 1
        self.enqueue_tx(hub, message, dest=None)
        self.schedule(self.now + self.config.heartbeat_period_ms, EmitHeartbeat(hub.id))

    def _generate_data(self, node: SimNode) -> None:
        message = Message(MessageKind.DATA, origin=node.id, seq=node.next_seq,
                          hops=0, sender=node.id,
                          payload=sensor_reading(node.id, node.next_seq))
        node.next_seq += 1
        node.generated += 1
        self._relay(node, message)
        self.schedule(self.now + self.config.data_period_ms, GenerateData(node.id))

    def _command_arrival(self, event: CommandArrival) -> None:
        issuer = self.nodes[event.issuer]
        message = Message(MessageKind.COMMAND, origin=issuer.id, seq=issuer.next_seq,
                          hops=0, sender=issuer.id,
                          payload=bytes([event.verb.code]))
        issuer.next_seq += 1
        self._apply_command(issuer, message)
        self._relay(issuer, message)

    def issue_command(self, verb: CommandVerb, issuer: Optional[NodeId] = None) -> None:
        """Inject a control command at the commander (or an explicit issuer)."""
        if issuer is None:
            issuer = self.commander_id
        if issuer is None:
            raise ConfigError("topology has no commander node")
        self.schedule(self.now, CommandArrival(verb, issuer))

    # --- frame handling ---------------------------------------------------

    def _deliver(self, message: Message, node: SimNode) -> None:
        node.rx_count += 1
        if message.origin == node.id:
            return
        kind = message.kind
        if kind is MessageKind.DATA:
            node.received += 1
            if node.id == self.hub_id:
                self.tracker.record(message_key(message))
                self.delivered.append((self.now, message_key(message)))
                return
            self._relay(node, message)
        elif kind is MessageKind.HEARTBEAT:
            if node.id == self.hub_id:
                return
            self._relay(node, message)
        elif kind is MessageKind.COMMAND:
            self._apply_command(node, message)
            self._relay(node, message)
        elif kind is MessageKind.STATS_REPORT:
            if node.id == self.hub_id:
                stats = decode_stats(message.payload)
                self.collected_stats[stats.node] = stats
                return
            self._relay(node, message)
        elif kind is MessageKind.ACK:
            probe_origin, probe_seq = _ACK_PAYLOAD.unpack(message.payload)
            if node.id == probe_origin:
                acked = self.probes.get((probe_origin, probe_seq))
                if acked is not None:
                    acked.add(message.origin)
                return
            self._relay(node, message)

    def _relay(self, node: SimNode, message: Message) -> None:
        """Route one frame through the node's relay logic and execute the actions.

        Control frames (commands, reachability acks) always flood so that
        algorithm switches reach every node even before routes exist; data,
        stats and heartbeats follow the node's active algorithm.
        """
        if message.kind in (MessageKind.COMMAND, MessageKind.ACK):
            actions = [btmr_relay(node.cache, message.sender, message.hops, message)]
        elif node.algorithm is Algorithm.MAM:
            actions = mam_handle(node.mam, self.now, node.cache,
                                 message.sender, message.hops, message)
        else:
            actions = [btmr_relay(node.cache, message.sender, message.hops, message)]
        for action in actions:
            if isinstance(action, Drop):
                node.drops[action.reason] += 1
                continue
            if isinstance(action, Broadcast):
                out, dest = action.message, None
            else:
                out, dest = action.message, action.dest
            queued = self.enqueue_tx(node, replace(out, sender=node.id), dest)
            if queued and out.kind is MessageKind.DATA and out.origin != node.id:
                node.relayed += 1

    def _apply_command(self, node: SimNode, message: Message) -> None:
        if message.seq <= node.last_cmd_seq.get(message.origin, -1):
            return
        node.last_cmd_seq[message.origin] = message.seq
        verb = CommandVerb.from_code(message.payload[0])
        if verb is CommandVerb.SIM_RESET:
            reset_routing_state(node)
            if node.id == self.hub_id:
                self.tracker.reset()
                self.collected_stats.clear()
        elif verb is CommandVerb.SET_MAM:
            node.algorithm = Algorithm.MAM
        elif verb is CommandVerb.SET_BTMR:
            node.algorithm = Algorithm.BTMR
        elif verb is CommandVerb.SIM_STATS:
            snapshot = node.stats_snapshot()
            if node.id == self.hub_id:
                self.collected_stats[node.id] = snapshot
            else:
                report = Message(MessageKind.STATS_REPORT, origin=node.id,
                                 seq=node.next_seq, hops=0, sender=node.id,
                                 payload=encode_stats(snapshot))
                node.next_seq += 1
                self._relay(node, report)
        elif verb is CommandVerb.REBOOT:
            if node.role is Role.COMMANDER:
                self._reboot(node)
        elif verb is CommandVerb.REBOOT_ALL:
            self._reboot(node)
        elif verb is CommandVerb.PING:
            if node.id == message.origin:
                self.probes[(message.origin, message.seq)] = set()
                self.last_probe = (message.origin, message.seq)
            else:
                ack = Message(MessageKind.ACK, origin=node.id, seq=node.next_seq,
                              hops=0, sender=node.id,
                              payload=_ACK_PAYLOAD.pack(message.origin, message.seq))
                node.next_seq += 1
                self._relay(node, ack)

    def _reboot(self, node: SimNode) -> None:
        node.reboot()
        if node.id == self.hub_id:
            self.tracker.reset()
            self.collected_stats.clear()

    # --- transmission -----------------------------------------------------

    def enqueue_tx(self, node: SimNode, message: Message, dest: Optional[NodeId]) -> bool:
        """Queue one transmission; overflow drops the newest entry and counts it."""
        if len(node.txq) >= self.config.tx_queue_capacity:
            node.tx_dropped += 1
            return False
        node.txq.append((message, dest))
        if not node.tx_scheduled:
            node.tx_scheduled = True
            self.schedule(max(self.now, node.radio_free_at), TxDequeue(node.id))
        return True

    def _tx_dequeue(self, node: SimNode) -> None:
        if not node.txq:
            # queue wiped by a reboot between scheduling and firing
            node.tx_scheduled = False
            return
        message, dest = node.txq.popleft()
        copies = 1
        if (self.config.fault_duplicate and dest is not None
                and message.kind is MessageKind.DATA):
            copies = 2
        for _ in range(copies):
            node.tx_count += 1
            if message.kind is MessageKind.DATA:
                node.tx_data_count += 1
            self._fan_out(node, message, dest)
        node.radio_free_at = self.now + self.radio.latency_ms
        if node.txq:
            self.schedule(node.radio_free_at, TxDequeue(node.id))
        else:
            node.tx_scheduled = False

    def _fan_out(self, node: SimNode, message: Message, dest: Optional[NodeId]) -> None:
        arrival = self.now + self.radio.latency_ms
        targets = [dest] if dest is not None else self.node_ids
        for other in targets:
            if other == node.id or not self.in_range(node.id, other):
                continue
            if self.radio.per_link_loss_prob > 0.0:
                if self.rng.random() < self.radio.per_link_loss_prob:
                    continue
            self.schedule(arrival, Deliver(message, other))

    # --- reporting ----------------------------------------------------------

    @property
    def tx_total(self) -> int:
        return sum(n.tx_count for n in self.nodes.values())

    @property
    def rx_total(self) -> int:
        return sum(n.rx_count for n in self.nodes.values())

    @property
    def tx_data(self) -> int:
        return sum(n.tx_data_count for n in self.nodes.values())

    def delivered_counter(self) -> Counter:
        return Counter(key for _, key in self.delivered)

    def report(self) -> RunReport:
        unique = self.tracker.unique_count
        duplicate = self.tracker.duplicate_count
        return RunReport(
            algorithm=self.config.algorithm.value,
            duration_ms=self.config.duration_ms,
            seed=self.config.rng_seed,
            unique_received=unique,
            duplicate_received=duplicate,
            total_received=unique + duplicate,
            tx_total=self.tx_total,
            rx_total=self.rx_total,
            tx_data=self.tx_data,
            per_node={
                nid: {
                    "generated": n.generated,
                    "relayed": n.relayed,
                    "tx_dropped": n.tx_dropped,
                    "restarts": n.restarts,
                }
                for nid, n in sorted(self.nodes.items())
            },
        )


def run(config: ScenarioConfig) -> RunReport:
    """Execute one full scenario and return its report (deterministic per config)."""
    world = World(config)
    world.run_until(config.duration_ms)
    return world.report()
