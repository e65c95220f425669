"""Per-stage training telemetry and its JSONL sink."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class StageReport:
    """What one stage did: losses, validation curve, and the chosen step.

    losses has one entry per optimization step; an entry of None marks a
    step whose batch produced nothing to learn from (counted, not trained).
    validation_curve holds (step, metric) pairs, higher metric is better.
    """

    stage_kind: str
    steps_run: int
    losses: tuple = field(default_factory=tuple)
    validation_curve: tuple = field(default_factory=tuple)
    selected_step: int = 0
    best_metric: float = 0.0
    wall_clock_seconds: float = 0.0

    def final_loss(self) -> float | None:
        for value in reversed(self.losses):
            if value is not None:
                return value
        return None

    def to_dict(self) -> dict:
        return {
            "stage_kind": self.stage_kind,
            "steps_run": self.steps_run,
            "losses": list(self.losses),
            "validation_curve": [[step, metric] for step, metric in self.validation_curve],
            "selected_step": self.selected_step,
            "best_metric": self.best_metric,
            "wall_clock_seconds": self.wall_clock_seconds,
        }


def write_stage_report(report: StageReport, path) -> None:
    """Append one JSON line per stage; the file accumulates a run history."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(report.to_dict(), sort_keys=True))
        fh.write("\n")


def read_stage_reports(path) -> list:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            out.append(
                StageReport(
                    stage_kind=raw["stage_kind"],
                    steps_run=raw["steps_run"],
                    losses=tuple(raw["losses"]),
                    validation_curve=tuple((s, m) for s, m in raw["validation_curve"]),
                    selected_step=raw["selected_step"],
                    best_metric=raw["best_metric"],
                    wall_clock_seconds=raw["wall_clock_seconds"],
                )
            )
    return out
