"""Logging setup and rich renderings of solutions, statistics and reports."""

import logging
from typing import TYPE_CHECKING, Dict, Sequence

from rich import box
from rich.console import Console, Group
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.traceback import install as install_rich_traceback

if TYPE_CHECKING:
    from ..bench import BenchReport
    from ..guidance.base import PrioritizedOps
    from ..search.engine import SearchStats, Solution

# Global console instance for consistent output across modules
console = Console()
error_console = Console(stderr=True)

STATS_LABELS = {
    "values_explored": "Values explored",
    "candidates_before_arg_filters": "Candidates",
    "after_arg_filters": "After argument filters",
    "after_combination_filters": "After combination filters",
    "executions": "Executions",
    "exec_errors": "Execution errors",
    "dedup_hits": "Duplicate values",
    "max_weight_reached": "Max weight reached",
    "elapsed": "Elapsed (s)",
}


def configure_logging(level: str = "INFO") -> None:
    """Send the package's log records to stderr through rich."""
    install_rich_traceback()
    logger = logging.getLogger("tensorsynth")
    logger.setLevel(level)
    if not any(isinstance(handler, RichHandler) for handler in logger.handlers):
        handler = RichHandler(console=error_console, show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    logger.propagate = False


def format_seconds(seconds: float) -> str:
    """Timing fields are shown at 0.1 s resolution."""
    return f"{seconds:.1f}"


def solution_panel(solution: "Solution", index: int, render: str = "both") -> Panel:
    """A panel with the program text of a solution.

    Args:
        solution: the solution
        index: 1-based position in the solution stream
        render: "pythonic", "functional" or "both"
    """
    lines = []
    if render in ("pythonic", "both"):
        lines.append(f"[bold green]{solution.pythonic}[/bold green]")
    if render in ("functional", "both"):
        lines.append(f"[cyan]{solution.functional}[/cyan]")
    return Panel(
        Group(*lines),
        title=f"[bold]Solution {index}[/bold]",
        title_align="left",
        subtitle=f"weight {solution.weight}, {format_seconds(solution.elapsed)} s",
        subtitle_align="right",
        border_style="green",
    )


def stats_table(stats: "SearchStats") -> Table:
    """The filtering funnel of a search."""
    table = Table(title="Search statistics", box=box.SIMPLE, pad_edge=False)
    table.add_column("Counter", justify="right", style="cyan", no_wrap=True)
    table.add_column("Value", justify="right")
    data: Dict[str, float] = stats.as_dict(timing=True)
    for key, label in STATS_LABELS.items():
        if key in data:
            value = data[key]
            table.add_row(label, format_seconds(value) if key == "elapsed" else str(value))
    table.add_row("Argument filter elimination", f"{stats.arg_filter_elimination:.1%}")
    table.add_row("Combination filter elimination", f"{stats.combination_filter_elimination:.1%}")
    return table


def prioritized_table(predictions: Sequence["PrioritizedOps"]) -> Table:
    """Which operations each guidance model prioritized."""
    table = Table(title="Prioritized operations", box=box.SIMPLE, pad_edge=False)
    table.add_column("Model", style="cyan", no_wrap=True)
    table.add_column("Multiplier", justify="right")
    table.add_column("Operations")
    for prediction in predictions:
        table.add_row(prediction.source.value, f"{prediction.multiplier:g}", ", ".join(prediction.ops))
    return table


def bench_table(report: "BenchReport") -> Table:
    """One row per benchmark task and the summary as caption."""
    summary = report.summary
    table = Table(
        title="Benchmark results",
        caption=(
            f"[italic]{summary['solved']}/{summary['tasks']} solved, "
            f"median {format_seconds(summary['median_time'])} s, "
            f"total {format_seconds(summary['total_time'])} s[/italic]"
        ),
        box=box.SIMPLE,
        pad_edge=False,
    )
    table.add_column("Task", style="cyan", no_wrap=True)
    table.add_column("Solved", justify="center")
    table.add_column("Time (s)", justify="right")
    table.add_column("Weight", justify="right")
    table.add_column("Solution")
    for row in report.rows:
        table.add_row(
            row.task,
            "[green]yes[/green]" if row.solved else "[red]no[/red]",
            format_seconds(row.elapsed),
            str(row.weight) if row.weight is not None else "-",
            row.solution or row.error or "",
        )
    return table
