"""Running a suite of task files and tabulating the results."""

import glob
import logging
import os
import statistics
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .app import Application
from .common.logging import format_seconds
from .common.recording import write_csv
from .exceptions import ConfigurationError
from .guidance import GuidanceModel
from .registry import WeightTable
from .search.engine import SearchStats, ValueSearch
from .search.task import SearchConfig, parse_task

logger = logging.getLogger(__name__)

CSV_HEADER = ("task", "solved", "elapsed_s", "weight", "solution")


@dataclass
class BenchRow:
    """Result of one benchmark task."""

    task: str
    solved: bool
    elapsed: float
    weight: Optional[int] = None
    solution: str = ""
    stats: Optional[SearchStats] = None
    error: str = ""

    def csv_row(self) -> List[Any]:
        return [
            self.task,
            "true" if self.solved else "false",
            format_seconds(self.elapsed),
            "" if self.weight is None else self.weight,
            self.solution,
        ]


@dataclass
class BenchReport:
    """Rows ordered by task id and a summary derived from them."""

    rows: List[BenchRow] = field(default_factory=list)

    @property
    def summary(self) -> Dict[str, Any]:
        solved = [row.elapsed for row in self.rows if row.solved]
        return {
            "tasks": len(self.rows),
            "solved": len(solved),
            "median_time": statistics.median(solved) if solved else 0.0,
            "total_time": sum(row.elapsed for row in self.rows),
        }

    @property
    def executions(self) -> int:
        return sum(row.stats.executions for row in self.rows if row.stats is not None)

    def write_csv(self, path: str) -> None:
        write_csv(path, CSV_HEADER, (row.csv_row() for row in self.rows))


def suite_tasks(suite_dir: str) -> List[str]:
    """Task files of a suite, sorted by task id."""
    return sorted(glob.glob(os.path.join(suite_dir, "*.json")))


def task_id(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def run_task(
    app: Application,
    path: str,
    settings: SearchConfig,
    base_weights: WeightTable,
    models: List[GuidanceModel],
) -> BenchRow:
    """Solve one task file; failures are recorded as unsolved rows."""
    name = task_id(path)
    try:
        task = parse_task(path, settings)
        weights, _ = app.prioritized_weights(task, base_weights, models)
    except (ConfigurationError, OSError) as e:
        logger.warning("Task %s could not be loaded: %s", name, e)
        return BenchRow(name, False, 0.0, error=str(e))
    value_search = ValueSearch(task, app.registry, weights)
    solution = next(iter(value_search.solutions()), None)
    if solution is None:
        return BenchRow(name, False, value_search.stats.elapsed, stats=value_search.stats, error=value_search.outcome or "")
    return BenchRow(name, True, solution.elapsed, solution.weight, solution.pythonic, solution.stats)


def run_benchmarks(
    app: Application,
    suite_dir: str,
    settings: SearchConfig,
    base_weights: Optional[WeightTable] = None,
    models: Optional[List[GuidanceModel]] = None,
) -> BenchReport:
    """Run every task of a suite under one configuration."""
    base_weights = base_weights or app.weights
    report = BenchReport()
    for path in suite_tasks(suite_dir):
        row = run_task(app, path, settings, base_weights, models or [])
        logger.info("%s: %s in %s s", row.task, "solved" if row.solved else "unsolved", format_seconds(row.elapsed))
        report.rows.append(row)
    return report
