"""Unique/duplicate accounting and run reporting.

The collector tells first-time sensor messages from repeats by their
``(origin, seq)`` key. Two interchangeable trackers implement that check: a
hash map (simple, memory per message) and an interval set (memory per gap,
suited to sequential per-origin sequence numbers). A run's counters are
frozen into a ``RunReport``; helpers scale counts between run durations and
aggregate repeated runs.
"""

from __future__ import annotations

import json
import statistics
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum

from .core import MessageKey, NodeId


class Verdict(Enum):
    UNIQUE = "unique"
    DUPLICATE = "duplicate"


class TrackerLimitError(RuntimeError):
    """The hash-map tracker hit its configured entry budget."""


class HashMapTracker:
    """Map from message key to receive count; the straightforward tracker.

    ``entry_limit`` bounds the number of distinct keys; exceeding it raises
    ``TrackerLimitError`` instead of failing silently.
    """

    def __init__(self, entry_limit: int | None = None):
        self.entry_limit = entry_limit
        self._counts: dict[MessageKey, int] = {}
        self.duplicate_count = 0

    @property
    def unique_count(self) -> int:
        return len(self._counts)

    @property
    def total_count(self) -> int:
        return self.unique_count + self.duplicate_count

    def record(self, key: MessageKey) -> Verdict:
        if key in self._counts:
            self._counts[key] += 1
            self.duplicate_count += 1
            return Verdict.DUPLICATE
        if self.entry_limit is not None and len(self._counts) >= self.entry_limit:
            raise TrackerLimitError(
                f"tracker entry limit {self.entry_limit} reached at key {key}"
            )
        self._counts[key] = 1
        return Verdict.UNIQUE

    def count(self, key: MessageKey) -> int:
        return self._counts.get(key, 0)

    def reset(self) -> None:
        self._counts.clear()
        self.duplicate_count = 0


class IntervalTracker:
    """Per-origin sorted sets of maximal seen-seq intervals ``[lo, hi]``.

    Memory grows with the number of gaps in each origin's sequence space,
    not with the number of messages; adjacent intervals coalesce as gaps
    fill in.
    """

    def __init__(self):
        # origin -> parallel lists of interval starts and [lo, hi] pairs
        self._starts: dict[NodeId, list[int]] = {}
        self._intervals: dict[NodeId, list[list[int]]] = {}
        self.unique_count = 0
        self.duplicate_count = 0

    @property
    def total_count(self) -> int:
        return self.unique_count + self.duplicate_count

    def record(self, key: MessageKey) -> Verdict:
        origin, seq = key
        starts = self._starts.setdefault(origin, [])
        intervals = self._intervals.setdefault(origin, [])
        idx = bisect_right(starts, seq) - 1
        if idx >= 0 and seq <= intervals[idx][1]:
            self.duplicate_count += 1
            return Verdict.DUPLICATE

        self.unique_count += 1
        extends_left = idx >= 0 and intervals[idx][1] == seq - 1
        extends_right = idx + 1 < len(intervals) and intervals[idx + 1][0] == seq + 1
        if extends_left and extends_right:
            intervals[idx][1] = intervals[idx + 1][1]
            del intervals[idx + 1]
            del starts[idx + 1]
        elif extends_left:
            intervals[idx][1] = seq
        elif extends_right:
            intervals[idx + 1][0] = seq
            starts[idx + 1] = seq
        else:
            intervals.insert(idx + 1, [seq, seq])
            starts.insert(idx + 1, seq)
        return Verdict.UNIQUE

    def intervals(self, origin: NodeId) -> list[tuple[int, int]]:
        return [(lo, hi) for lo, hi in self._intervals.get(origin, [])]

    def interval_count(self, origin: NodeId) -> int:
        return len(self._intervals.get(origin, []))

    def origins(self) -> list[NodeId]:
        return sorted(self._intervals)

    def reset(self) -> None:
        self._starts.clear()
        self._intervals.clear()
        self.unique_count = 0
        self.duplicate_count = 0


def make_tracker(kind: str, entry_limit: int | None = None):
    if kind == "hashmap":
        return HashMapTracker(entry_limit)
    if kind == "interval":
        return IntervalTracker()
    raise ValueError(f"tracker unknown: {kind}")


REPORT_CSV_FIELDS = [
    "algorithm",
    "duration_ms",
    "seed",
    "unique_received",
    "duplicate_received",
    "total_received",
    "tx_total",
    "rx_total",
    "tx_data",
]


@dataclass
class RunReport:
    """Counters frozen at the end of one run.

    ``tx_total``/``rx_total`` count every transmission/delivery of any kind
    (energy proxies); ``tx_data`` counts only sensor-data transmissions.
    Per-node rows carry data-plane counters plus queue drops and restarts.
    """

    algorithm: str
    duration_ms: int
    seed: int
    unique_received: int
    duplicate_received: int
    total_received: int
    tx_total: int
    rx_total: int
    tx_data: int
    per_node: dict[NodeId, dict[str, int]] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "duration_ms": self.duration_ms,
            "seed": self.seed,
            "unique_received": self.unique_received,
            "duplicate_received": self.duplicate_received,
            "total_received": self.total_received,
            "tx_total": self.tx_total,
            "rx_total": self.rx_total,
            "tx_data": self.tx_data,
            "per_node": {
                str(node): {
                    "generated": row["generated"],
                    "relayed": row["relayed"],
                    "tx_dropped": row["tx_dropped"],
                    "restarts": row["restarts"],
                }
                for node, row in sorted(self.per_node.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    def to_csv_row(self) -> list[str]:
        return [str(getattr(self, name)) for name in REPORT_CSV_FIELDS]


def scale_rule_of_three(count: float, from_minutes: float, to_minutes: float) -> float:
    """Linearly rescale a count observed over ``from_minutes`` to ``to_minutes``."""
    if from_minutes <= 0:
        raise ValueError("from_minutes must be positive")
    return count * to_minutes / from_minutes


AGGREGATE_FIELDS = [
    "unique_received",
    "duplicate_received",
    "total_received",
    "tx_total",
    "rx_total",
    "tx_data",
]


@dataclass
class AggregateSummary:
    algorithm: str
    duration_ms: int
    runs: int
    mean: dict[str, float]
    stdev: dict[str, float]
    single_run: bool


def aggregate(reports: list[RunReport]) -> AggregateSummary:
    """Mean and sample (n-1) standard deviation per numeric report field."""
    if not reports:
        raise ValueError("aggregate needs at least one report")
    algorithm = reports[0].algorithm
    duration = reports[0].duration_ms
    for r in reports[1:]:
        if r.algorithm != algorithm or r.duration_ms != duration:
            raise ValueError("aggregate needs homogeneous algorithm and duration")
    single = len(reports) == 1
    mean = {}
    stdev = {}
    for name in AGGREGATE_FIELDS:
        values = [getattr(r, name) for r in reports]
        mean[name] = statistics.fmean(values)
        stdev[name] = 0.0 if single else statistics.stdev(values)
    return AggregateSummary(
        algorithm=algorithm,
        duration_ms=duration,
        runs=len(reports),
        mean=mean,
        stdev=stdev,
        single_run=single,
    )
