"""Weighted value search over the operation registry."""

from .constants import collect_initial_values  # noqa: F401
from .engine import Outcome, SearchStats, Solution, ValueSearch, harvest, search, try_cast_match  # noqa: F401
from .evaluate import evaluate_expression, evaluate_on_examples, evaluate_text  # noqa: F401
from .explored import ExploredSet, SuperValue, compositions  # noqa: F401
from .task import Example, SearchConfig, TaskSpec, parse_task, task_from_dict  # noqa: F401
