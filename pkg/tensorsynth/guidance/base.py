"""Base guidance model interface and operation reweighting."""

import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

from ..exceptions import UnknownOpError
from ..registry.registry import WeightTable
from .config import GuidanceModelConfig

FORMAT_VERSION = 1


class ModelSource(enum.Enum):
    """Which kind of model produced a prediction."""

    TENSOR_MODEL = "tensor"
    TFIDF = "tfidf"
    NAIVE_BAYES = "naive_bayes"


@dataclass(frozen=True)
class PrioritizedOps:
    """Operations one model predicts useful, best first, with that model's multiplier."""

    source: ModelSource
    ops: Tuple[str, ...]
    multiplier: float = 0.75
    scores: Tuple[float, ...] = ()

    def __post_init__(self):
        """Validate the multiplier."""
        if not 0 < self.multiplier <= 1:
            raise ValueError(f"multiplier must be in (0, 1], got {self.multiplier}")


def reweight(base: WeightTable, predictions: Sequence[PrioritizedOps]) -> WeightTable:
    """Multiply the weight of every prioritized operation by its models' multipliers.

    Results are rounded to the nearest integer, halves up, and never drop
    below 1. Operations no model prioritized keep their weight.

    Raises:
        UnknownOpError: If a prediction names an operation missing from ``base``
    """
    factors: Dict[str, float] = {}
    for prediction in predictions:
        for name in prediction.ops:
            if name not in base:
                raise UnknownOpError(name, list(base))
            factors[name] = factors.get(name, 1.0) * prediction.multiplier
    changes = {name: max(1, math.floor(base[name] * factor + 0.5)) for name, factor in factors.items()}
    return base.updated(changes)


class GuidanceModel(ABC):
    """Abstract base class for guidance models.

    Every model turns a task into a :class:`PrioritizedOps` and round-trips
    through a JSON document carrying ``format_version``.
    """

    source: ModelSource

    def __init__(self, config: GuidanceModelConfig):
        """Initialize the model with its configuration.

        Args:
            config: Configuration for this model
        """
        self.config = config

    @abstractmethod
    def prioritize(self, task) -> PrioritizedOps:
        """Predict which operations the task needs."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON document of the fitted parameters."""

    def _prediction(self, ranked: Sequence[Tuple[str, float]]) -> PrioritizedOps:
        return PrioritizedOps(
            source=self.source,
            ops=tuple(name for name, _ in ranked),
            multiplier=self.config.multiplier,
            scores=tuple(float(score) for _, score in ranked),
        )
