"""Relay decision logic.

Two per-node state machines decide what to do with an incoming frame:

* ``btmr_relay`` -- controlled flooding: rebroadcast unless the frame was
  relayed recently (LRU hash cache) or its hop budget is exhausted.
* ``mam_handle`` -- reactive least-hop routing: unicast data toward a cached
  best neighbor learned from the collector's periodic heartbeats, with an
  expiry window so routes follow a moving collector.

Both are deterministic functions of their explicit state plus inputs; the
simulation engine owns the state and executes the returned actions.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, replace
from typing import Optional, Union

from .core import Message, MessageKind, NodeId, message_hash

# A relay never emits a frame with more hops than this.
TTL_LIMIT = 126

DROP_SEEN = "seen"
DROP_TTL = "ttl"
DROP_NO_ROUTE = "no-route"


class RelayCache:
    """Bounded LRU set of recently relayed frame hashes."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._entries: OrderedDict[int, None] = OrderedDict()

    def seen(self, digest: int) -> bool:
        """Membership query; a hit refreshes the entry's recency."""
        if digest in self._entries:
            self._entries.move_to_end(digest)
            return True
        return False

    def insert(self, digest: int) -> None:
        self._entries[digest] = None
        self._entries.move_to_end(digest)
        while len(self._entries) > self.capacity:
            self._entries.popitem(last=False)

    def clear(self) -> None:
        self._entries.clear()

    def __contains__(self, digest: int) -> bool:
        return digest in self._entries

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class MamState:
    """Per-node route cache: best neighbor toward the collector and its expiry."""

    delta_ms: int
    best_node: Optional[NodeId] = None
    best_hops: int = 0
    expiry: int = 0

    def reset(self) -> None:
        self.best_node = None
        self.best_hops = 0
        self.expiry = 0


@dataclass(frozen=True)
class Broadcast:
    message: Message


@dataclass(frozen=True)
class Unicast:
    dest: NodeId
    message: Message


@dataclass(frozen=True)
class Drop:
    reason: str


RelayAction = Union[Broadcast, Unicast, Drop]


def btmr_relay(cache: RelayCache, sender: NodeId, hops: int, message: Message) -> RelayAction:
    """Controlled-flooding relay decision for one incoming frame.

    Drops when the frame hash is already cached (recently relayed) or when
    ``hops`` exceeds the TTL budget; otherwise records the hash and
    rebroadcasts with ``hops + 1``.
    """
    digest = message_hash(message.payload, message.origin, message.seq)
    if cache.seen(digest):
        return Drop(DROP_SEEN)
    if hops > TTL_LIMIT:
        return Drop(DROP_TTL)
    cache.insert(digest)
    return Broadcast(replace(message, hops=hops + 1))


def mam_handle(
    state: MamState,
    now: int,
    cache: RelayCache,
    sender: NodeId,
    hops: int,
    message: Message,
) -> list[RelayAction]:
    """Reactive least-hop handling of one incoming frame.

    Non-discovery frames are unicast toward the cached best neighbor (or
    dropped when no route is known). Discovery frames (heartbeats) update the
    cache when the previous entry expired or the new frame arrived over fewer
    hops, and are then flooded through ``btmr_relay`` so discovery keeps the
    LRU dedup and TTL cap of the flooding path.
    """
    if message.kind is not MessageKind.HEARTBEAT:
        # The bearer-level TTL cap applies to unicasts as well; without it a
        # transiently looped route would forward a frame forever.
        if hops > TTL_LIMIT:
            return [Drop(DROP_TTL)]
        if state.best_node is None:
            return [Drop(DROP_NO_ROUTE)]
        return [Unicast(state.best_node, replace(message, hops=hops + 1))]

    expired = now > state.expiry
    if expired or hops < state.best_hops:
        state.best_node = sender
        state.best_hops = hops
        state.expiry = now + state.delta_ms
    return [btmr_relay(cache, sender, hops, message)]


def reset_routing_state(node) -> None:
    """Return a node's routing state to power-on values.

    Accepts any object with ``mam`` and ``cache`` attributes; statistics
    counters are zeroed through ``reset_stats`` when the node provides it.
    """
    node.mam.reset()
    node.cache.clear()
    reset_stats = getattr(node, "reset_stats", None)
    if reset_stats is not None:
        reset_stats()
