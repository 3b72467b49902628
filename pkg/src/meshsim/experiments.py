"""Experiment plans: algorithm/duration sweeps over a scenario.

A plan expands into ``len(algorithms) x len(durations) x repetitions`` runs,
aggregates repetitions into mean/stdev rows, and renders comparison tables
(text, CSV, structured) with an optional column scaled to a common reference
duration for cross-duration comparisons.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

from .core import Algorithm, ScenarioConfig
from .metrics import AggregateSummary, RunReport, aggregate, scale_rule_of_three
from .scenario import load_scenario
from .simnet import run

DEFAULT_REFERENCE_MINUTES = 3.33


class PlanError(ValueError):
    pass


@dataclass
class ExperimentPlan:
    scenario: ScenarioConfig
    algorithms: list[Algorithm]
    durations_min: list[float]
    repetitions: int = 1
    seeds: Optional[list[int]] = None
    seed_base: int = 0
    reference_minutes: float = DEFAULT_REFERENCE_MINUTES
    name: str = ""

    def run_seeds(self) -> list[int]:
        if self.seeds is not None:
            if len(self.seeds) != self.repetitions:
                raise PlanError(f"plan needs {self.repetitions} seeds, got {len(self.seeds)}")
            return list(self.seeds)
        return [self.seed_base + i for i in range(self.repetitions)]

    def validate(self) -> None:
        if not self.algorithms:
            raise PlanError("plan has no algorithms")
        if not self.durations_min:
            raise PlanError("plan has no durations")
        if any(d <= 0 for d in self.durations_min):
            raise PlanError("durations_min must be positive")
        if self.repetitions < 1:
            raise PlanError("repetitions must be >= 1")
        self.run_seeds()


@dataclass
class TableRow:
    algorithm: str
    duration_min: float
    unique_mean: float
    unique_stdev: float
    duplicate_mean: float
    duplicate_stdev: float
    tx_total_mean: float
    rx_total_mean: float
    scaled_unique: float
    runs: int


TABLE_CSV_FIELDS = ["algorithm", "duration_min", "unique_mean", "unique_stdev",
                    "duplicate_mean", "duplicate_stdev", "tx_total_mean",
                    "rx_total_mean", "scaled_unique", "runs"]


@dataclass
class ComparisonTable:
    rows: list[TableRow]
    reference_minutes: float
    reports: dict[tuple[str, float], list[RunReport]] = field(default_factory=dict)

    def to_dicts(self) -> list[dict]:
        return [
            {name: getattr(row, name) for name in
             ("algorithm", "duration_min", "unique_mean", "unique_stdev",
              "duplicate_mean", "duplicate_stdev", "tx_total_mean",
              "rx_total_mean", "scaled_unique", "runs")}
            for row in self.rows
        ]

    def render_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_CSV_FIELDS)
        for row in self.rows:
            writer.writerow([
                row.algorithm,
                f"{row.duration_min:g}",
                f"{row.unique_mean:.2f}",
                f"{row.unique_stdev:.2f}",
                f"{row.duplicate_mean:.2f}",
                f"{row.duplicate_stdev:.2f}",
                f"{row.tx_total_mean:.2f}",
                f"{row.rx_total_mean:.2f}",
                f"{row.scaled_unique:.2f}",
                str(row.runs),
            ])
        return buf.getvalue()

    def render_text(self) -> str:
        header = ["algo", "min", "unique", "duplicate", "tx", "rx",
                  f"unique@{self.reference_minutes:g}min", "runs"]
        body = []
        for row in self.rows:
            body.append([
                row.algorithm,
                f"{row.duration_min:g}",
                f"{row.unique_mean:.2f} (stdev={row.unique_stdev:.2f})",
                f"{row.duplicate_mean:.2f} (stdev={row.duplicate_stdev:.2f})",
                f"{row.tx_total_mean:.1f}",
                f"{row.rx_total_mean:.1f}",
                f"{row.scaled_unique:.2f}",
                str(row.runs),
            ])
        widths = [max(len(header[i]), *(len(r[i]) for r in body)) if body else len(header[i])
                  for i in range(len(header))]
        lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
        for r in body:
            lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(r)).rstrip())
        return "\n".join(lines) + "\n"


def run_plan(plan: ExperimentPlan, out_dir: Optional[Union[str, Path]] = None) -> ComparisonTable:
    """Execute the full sweep; optionally write table/series/report files."""
    plan.validate()
    seeds = plan.run_seeds()
    rows: list[TableRow] = []
    reports: dict[tuple[str, float], list[RunReport]] = {}
    for algorithm in plan.algorithms:
        for minutes in plan.durations_min:
            batch: list[RunReport] = []
            for seed in seeds:
                config = replace(
                    plan.scenario,
                    algorithm=algorithm,
                    duration_ms=int(round(minutes * 60_000)),
                    rng_seed=seed,
                )
                try:
                    batch.append(run(config))
                except Exception as exc:
                    raise PlanError(
                        f"run failed (algorithm={algorithm.value}, "
                        f"duration_min={minutes}, seed={seed}): {exc}"
                    ) from exc
            summary = aggregate(batch)
            rows.append(_row_from_summary(summary, minutes, plan.reference_minutes))
            reports[(algorithm.value, minutes)] = batch
    table = ComparisonTable(rows=rows, reference_minutes=plan.reference_minutes,
                            reports=reports)
    if out_dir is not None:
        write_outputs(table, plan, Path(out_dir))
    return table


def _row_from_summary(summary: AggregateSummary, minutes: float,
                      reference_minutes: float) -> TableRow:
    return TableRow(
        algorithm=summary.algorithm,
        duration_min=minutes,
        unique_mean=summary.mean["unique_received"],
        unique_stdev=summary.stdev["unique_received"],
        duplicate_mean=summary.mean["duplicate_received"],
        duplicate_stdev=summary.stdev["duplicate_received"],
        tx_total_mean=summary.mean["tx_total"],
        rx_total_mean=summary.mean["rx_total"],
        scaled_unique=scale_rule_of_three(summary.mean["unique_received"],
                                          minutes, reference_minutes),
        runs=summary.runs,
    )


def emit_accumulated_series(reports_by_duration: dict[float, list[RunReport]]
                            ) -> list[tuple[float, float, float]]:
    """(duration, unique, duplicate) triples sorted by duration.

    Repetitions at one duration are averaged; all groups must share one
    algorithm.
    """
    algorithms = {r.algorithm for batch in reports_by_duration.values() for r in batch}
    if len(algorithms) > 1:
        raise ValueError(f"series mixes algorithms: {sorted(algorithms)}")
    series = []
    for minutes in sorted(reports_by_duration):
        batch = reports_by_duration[minutes]
        if not batch:
            continue
        unique = sum(r.unique_received for r in batch) / len(batch)
        duplicate = sum(r.duplicate_received for r in batch) / len(batch)
        series.append((minutes, unique, duplicate))
    return series


def render_series_csv(series: list[tuple[float, float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["duration_min", "unique", "duplicate"])
    for minutes, unique, duplicate in series:
        writer.writerow([f"{minutes:g}", f"{unique:.2f}", f"{duplicate:.2f}"])
    return buf.getvalue()


def write_outputs(table: ComparisonTable, plan: ExperimentPlan, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    path = out_dir / "table.txt"
    path.write_text(table.render_text())
    written.append(path)
    path = out_dir / "table.csv"
    path.write_text(table.render_csv())
    written.append(path)
    for algorithm in plan.algorithms:
        grouped = {minutes: table.reports[(algorithm.value, minutes)]
                   for minutes in plan.durations_min}
        series = emit_accumulated_series(grouped)
        path = out_dir / f"series_{algorithm.value}.csv"
        path.write_text(render_series_csv(series))
        written.append(path)
    for (algorithm, minutes), batch in sorted(table.reports.items()):
        for report in batch:
            path = out_dir / f"report_{algorithm}_{minutes:g}min_s{report.seed}.json"
            path.write_text(report.to_json())
            written.append(path)
    return written


# --- plan files -------------------------------------------------------------

BUILTIN_PLANS = ("line3_quick", "outdoor_comparison")


def parse_plan(text: str, base_dir: Optional[Path] = None, name: str = "") -> ExperimentPlan:
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PlanError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "scenario":
            source = value
            if base_dir is not None and (base_dir / value).is_file():
                source = base_dir / value
            fields["scenario"] = load_scenario(source)
        elif key == "algorithms":
            fields["algorithms"] = [Algorithm(v.strip()) for v in value.split(",")]
        elif key == "durations_min":
            fields["durations_min"] = [float(v) for v in value.split(",")]
        elif key == "repetitions":
            fields["repetitions"] = int(value)
        elif key == "seeds":
            fields["seeds"] = [int(v) for v in value.split(",")]
        elif key == "seed_base":
            fields["seed_base"] = int(value)
        elif key == "reference_minutes":
            fields["reference_minutes"] = float(value)
        else:
            raise PlanError(f"line {lineno}: unknown key {key}")
    if "scenario" not in fields:
        raise PlanError("scenario missing")
    plan = ExperimentPlan(name=name, **fields)
    plan.validate()
    return plan


def load_plan(source: Union[str, Path]) -> ExperimentPlan:
    """Load a plan from a path, or by built-in name (``line3_quick``, ...)."""
    path = Path(source)
    if path.is_file():
        return parse_plan(path.read_text(), base_dir=path.parent, name=path.stem)
    name = str(source)
    if name in BUILTIN_PLANS:
        from importlib import resources
        text = resources.files("meshsim").joinpath(f"plans/{name}.plan").read_text()
        return parse_plan(text, name=name)
    raise PlanError(f"plan not found: {source}")
