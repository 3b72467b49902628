"""Shared vocabulary for the mesh data-collection simulator.

Node identifiers, message records, the canonical wire encoding, and the
scenario configuration consumed by every other module.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Union

NodeId = int

# kind(1) | origin(2) | seq(4) | hops(1) | sender(2) | payload_len(2)
_WIRE_HEADER = struct.Struct(">BHIBHH")

MAX_HOPS = 127

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


class MessageKind(Enum):
    HEARTBEAT = 1
    DATA = 2
    COMMAND = 3
    STATS_REPORT = 4
    ACK = 5


class Role(Enum):
    SENSOR = "sensor"
    MOBILE_HUB = "hub"
    COMMANDER = "commander"


class Algorithm(Enum):
    BTMR = "btmr"
    MAM = "mam"


class ConfigError(ValueError):
    """A scenario configuration is invalid; the message names the field."""


@dataclass(frozen=True)
class Message:
    """One frame exchanged on the mesh.

    ``(origin, seq)`` identifies the logical message for the whole run;
    relaying only rewrites ``hops`` (transmissions so far) and ``sender``
    (the immediate previous transmitter).
    """

    kind: MessageKind
    origin: NodeId
    seq: int
    hops: int
    sender: NodeId
    payload: bytes = b""


class MessageKey(NamedTuple):
    """Logical message identity; ordered lexicographically by (origin, seq)."""

    origin: NodeId
    seq: int


def message_key(message: Message) -> MessageKey:
    return MessageKey(message.origin, message.seq)


def message_hash(payload: bytes, origin: NodeId, seq: int) -> int:
    """Stable 64-bit FNV-1a digest of (origin, seq, payload).

    Seed-independent and identical across runs and platforms; used by the
    relay cache to recognize recently relayed frames.
    """
    h = _FNV_OFFSET
    for b in origin.to_bytes(2, "big") + seq.to_bytes(4, "big") + payload:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


def encode_message(message: Message) -> bytes:
    """Canonical big-endian wire encoding (bit-exact, see tests for vectors)."""
    if not 0 <= message.origin <= 0xFFFF:
        raise ValueError(f"origin out of range: {message.origin}")
    if not 0 <= message.sender <= 0xFFFF:
        raise ValueError(f"sender out of range: {message.sender}")
    if not 0 <= message.seq <= 0xFFFFFFFF:
        raise ValueError(f"seq out of range: {message.seq}")
    if not 0 <= message.hops <= MAX_HOPS:
        raise ValueError(f"hops out of range: {message.hops}")
    if len(message.payload) > 0xFFFF:
        raise ValueError(f"payload too long: {len(message.payload)}")
    header = _WIRE_HEADER.pack(
        message.kind.value,
        message.origin,
        message.seq,
        message.hops,
        message.sender,
        len(message.payload),
    )
    return header + message.payload


def decode_message(buf: bytes) -> Message:
    if len(buf) < _WIRE_HEADER.size:
        raise ValueError("short frame")
    kind, origin, seq, hops, sender, plen = _WIRE_HEADER.unpack_from(buf)
    if len(buf) != _WIRE_HEADER.size + plen:
        raise ValueError("frame length mismatch")
    return Message(
        kind=MessageKind(kind),
        origin=origin,
        seq=seq,
        hops=hops,
        sender=sender,
        payload=bytes(buf[_WIRE_HEADER.size:]),
    )


class NodeSpec(NamedTuple):
    node: NodeId
    x: float
    y: float
    role: Role


class Waypoint(NamedTuple):
    t_ms: int
    x: float
    y: float


@dataclass
class ScenarioConfig:
    """Everything one simulation run needs; identical configs replay identically."""

    topology: list[NodeSpec]
    duration_ms: int
    algorithm: Algorithm = Algorithm.BTMR
    delta_ms: int = 100_000
    heartbeat_period_ms: int = 2_000
    data_period_ms: int = 1_000
    relay_cache_size: int = 20
    tx_queue_capacity: int = 200
    rng_seed: int = 0
    radio_preset: Union[str, float] = "ground"
    loss_prob: float = 0.0
    latency_ms: int = 10
    mobility: Optional[list[Waypoint]] = None
    tracker: str = "hashmap"
    fault_duplicate: bool = False
    name: str = ""

    def validate(self) -> None:
        if self.duration_ms < 0:
            raise ConfigError("duration_ms must be >= 0")
        for fname in ("delta_ms", "heartbeat_period_ms", "data_period_ms",
                      "relay_cache_size", "tx_queue_capacity", "latency_ms"):
            if getattr(self, fname) <= 0:
                raise ConfigError(f"{fname} must be positive")
        if not 0.0 <= self.loss_prob < 1.0:
            raise ConfigError("loss_prob must be in [0, 1)")
        if self.tracker not in ("hashmap", "interval"):
            raise ConfigError(f"tracker unknown: {self.tracker}")
        if isinstance(self.radio_preset, (int, float)):
            if self.radio_preset <= 0:
                raise ConfigError("radio_preset range must be positive")
        if not self.topology:
            raise ConfigError("topology is empty")
        ids = [spec.node for spec in self.topology]
        if len(set(ids)) != len(ids):
            raise ConfigError("topology contains duplicate node ids")
        base = min(ids)
        if base not in (0, 1) or sorted(ids) != list(range(base, base + len(ids))):
            raise ConfigError("topology node ids must be sequential from 0 or 1")
        if max(ids) > 0xFFFF:
            raise ConfigError("topology node id exceeds 16 bits")
        hubs = [s for s in self.topology if s.role is Role.MOBILE_HUB]
        if len(hubs) != 1:
            raise ConfigError("topology must contain exactly one hub")
        commanders = [s for s in self.topology if s.role is Role.COMMANDER]
        if len(commanders) > 1:
            raise ConfigError("topology must contain at most one commander")
        if self.mobility is not None:
            if not self.mobility:
                raise ConfigError("mobility trace is empty")
            times = [w.t_ms for w in self.mobility]
            if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
                raise ConfigError("mobility waypoint times must strictly increase")

    @property
    def hub_id(self) -> NodeId:
        return next(s.node for s in self.topology if s.role is Role.MOBILE_HUB)

    @property
    def commander_id(self) -> Optional[NodeId]:
        for s in self.topology:
            if s.role is Role.COMMANDER:
                return s.node
        return None

    @property
    def sensor_ids(self) -> list[NodeId]:
        return sorted(s.node for s in self.topology if s.role is Role.SENSOR)


def sensor_reading(origin: NodeId, seq: int) -> bytes:
    """Synthetic fixed-size (8 byte) sensor payload, deterministic per message."""
    value = 20.0 + ((origin * 7 + seq * 3) % 100) / 10.0
    return struct.pack(">d", value)
