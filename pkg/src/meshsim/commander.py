"""Command-and-control plane.

The commander node bridges an operator terminal to the mesh: line-oriented
ASCII commands are flooded as control frames, every node applies them, and
statistics flow back to the collector. Also home to the reachability probe
that verifies which nodes can currently be reached from the control plane.
"""

from __future__ import annotations

import socketserver
import struct
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .core import ConfigError, NodeId

_STATS_PAYLOAD = struct.Struct(">HIIIII")


class CommandVerb(Enum):
    SIM_RESET = ("sim-reset", 0)
    SET_MAM = ("set-mam", 1)
    SET_BTMR = ("set-btmr", 2)
    SIM_STATS = ("sim-stats", 3)
    REBOOT = ("reboot", 4)
    REBOOT_ALL = ("reboot-all", 5)  # extension: reboot every node, not just the commander
    PING = ("ping", 6)  # internal, drives the reachability probe

    def __init__(self, wire: str, code: int):
        self.wire = wire
        self.code = code

    @classmethod
    def from_code(cls, code: int) -> "CommandVerb":
        for verb in cls:
            if verb.code == code:
                return verb
        raise ValueError(f"unknown command code: {code}")

    @classmethod
    def from_wire(cls, text: str) -> Optional["CommandVerb"]:
        for verb in cls:
            if verb.wire == text:
                return verb
        return None


# verbs an operator may type; PING is reachability-tool plumbing
SESSION_VERBS = (CommandVerb.SIM_RESET, CommandVerb.SET_MAM, CommandVerb.SET_BTMR,
                 CommandVerb.SIM_STATS, CommandVerb.REBOOT, CommandVerb.REBOOT_ALL)


@dataclass(frozen=True)
class Command:
    verb: CommandVerb
    issued_at: int = 0


@dataclass(frozen=True)
class NodeStats:
    """One node's counters as reported over the mesh."""

    node: NodeId
    generated: int = 0
    relayed: int = 0
    received: int = 0
    tx_dropped: int = 0
    restarts: int = 0


def encode_stats(stats: NodeStats) -> bytes:
    return _STATS_PAYLOAD.pack(stats.node, stats.generated, stats.relayed,
                               stats.received, stats.tx_dropped, stats.restarts)


def decode_stats(payload: bytes) -> NodeStats:
    node, generated, relayed, received, tx_dropped, restarts = \
        _STATS_PAYLOAD.unpack(payload)
    return NodeStats(node, generated, relayed, received, tx_dropped, restarts)


@dataclass
class ReachabilityReport:
    """Outcome of one probe: who acknowledged before the deadline, who did not."""

    probed_at: int
    acked: set[NodeId]
    missing: set[NodeId]
    deadline_ms: int


def execute_command(world, command: Command) -> None:
    """Flood ``command`` from the commander node and let the world apply it.

    The caller decides how far to advance the world afterwards; the command
    itself is injected at the current simulation time.
    """
    if world.commander_id is None:
        raise ConfigError("topology has no commander node")
    world.issue_command(command.verb, issuer=world.commander_id)


def check_reachability(world, deadline_ms: int,
                       prober: Optional[NodeId] = None) -> ReachabilityReport:
    """Flood a probe, wait out the deadline, and partition nodes by response.

    The probe and its acknowledgments always travel by flooding, so the check
    works before any reactive routes exist.
    """
    if prober is None:
        prober = world.commander_id if world.commander_id is not None else world.hub_id
    probed_at = world.now
    world.issue_command(CommandVerb.PING, issuer=prober)
    world.run_until(world.now + deadline_ms)
    acked = set(world.probes.get(world.last_probe, set()))
    missing = set(world.node_ids) - {prober} - acked
    return ReachabilityReport(probed_at=probed_at, acked=acked,
                              missing=missing, deadline_ms=deadline_ms)


STATS_COLUMNS = ("node", "role", "generated", "relayed", "received",
                 "tx_dropped", "restarts")


def format_stats_table(world) -> list[str]:
    """Aligned text table of the statistics collected at the hub."""
    rows = []
    for node_id in sorted(world.collected_stats):
        stats = world.collected_stats[node_id]
        rows.append((str(node_id), world.nodes[node_id].role.value,
                     str(stats.generated), str(stats.relayed), str(stats.received),
                     str(stats.tx_dropped), str(stats.restarts)))
    widths = [max(len(col), *(len(row[i]) for row in rows)) if rows else len(col)
              for i, col in enumerate(STATS_COLUMNS)]
    lines = ["  ".join(col.ljust(widths[i]) for i, col in enumerate(STATS_COLUMNS)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return lines


class CommanderSession:
    """Line protocol against a live world: one command in, OK/ERR plus payload out.

    After flooding a command the session advances the simulation by a settle
    window so the command's effects (and any returning statistics) land before
    the response is rendered.
    """

    def __init__(self, world, settle_ms: int = 1000):
        self.world = world
        self.settle_ms = settle_ms
        self.transcript: list[str] = []

    def handle_line(self, line: str) -> list[str]:
        text = line.strip()
        self.transcript.append("> " + text)
        if not text:
            response = ["ERR empty command"]
        else:
            verb = CommandVerb.from_wire(text)
            if verb is None or verb not in SESSION_VERBS:
                response = ["ERR unknown command"]
            else:
                try:
                    execute_command(self.world, Command(verb, issued_at=self.world.now))
                except ConfigError as exc:
                    response = [f"ERR {exc}"]
                else:
                    self.world.run_until(self.world.now + self.settle_ms)
                    response = ["OK"]
                    if verb is CommandVerb.SIM_STATS:
                        hub_algo = self.world.nodes[self.world.hub_id].algorithm
                        response.append(f"algorithm={hub_algo.value}")
                        response.extend(format_stats_table(self.world))
        self.transcript.extend(response)
        return response


def run_script(world, lines: Iterable[str], settle_ms: int = 1000) -> str:
    """Drive a scripted session; returns the full transcript text."""
    session = CommanderSession(world, settle_ms=settle_ms)
    for line in lines:
        session.handle_line(line)
    return "\n".join(session.transcript) + "\n"


def serve_session(world, port: Optional[int] = None, pipe=None,
                  settle_ms: int = 1000):
    """Interactive session over TCP (``port``) or a ``(rfile, wfile)`` pair.

    The TCP form blocks until interrupted; the pipe form consumes ``rfile``
    to EOF and returns the session (transcript included).
    """
    if (port is None) == (pipe is None):
        raise ValueError("provide exactly one of port or pipe")
    if port is not None:
        server = make_server(world, port=port, settle_ms=settle_ms)
        try:
            server.serve_forever()
        finally:
            server.server_close()
        return None
    rfile, wfile = pipe
    session = CommanderSession(world, settle_ms=settle_ms)
    for line in rfile:
        for out in session.handle_line(line):
            wfile.write(out + "\n")
    return session


def make_server(world, host: str = "127.0.0.1", port: int = 0,
                settle_ms: int = 1000) -> socketserver.TCPServer:
    """TCP server speaking the session protocol (telnet-compatible line endings).

    The bound address is ``server.server_address``; run ``serve_forever`` (in a
    thread if the caller owns the world) and ``shutdown`` to stop. Commands
    from concurrent clients serialize through one shared session.
    """
    session = CommanderSession(world, settle_ms=settle_ms)

    class Handler(socketserver.StreamRequestHandler):
        def handle(self):
            for raw in self.rfile:
                line = raw.decode("ascii", errors="replace")
                for out in session.handle_line(line):
                    self.wfile.write(out.encode("ascii") + b"\r\n")
                self.wfile.flush()

    server = socketserver.TCPServer((host, port), Handler)
    server.session = session  # type: ignore[attr-defined]
    return server
