"""Guidance configuration loaded from YAML."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import yaml

from ..exceptions import ServiceConfigurationError

MODEL_KINDS = ("tensor", "tfidf", "naive_bayes")


@dataclass
class GuidanceModelConfig:
    """Configuration for a single guidance model."""

    name: str
    kind: str  # "tensor", "tfidf" or "naive_bayes"
    file: str
    multiplier: float = 0.75

    # Tensor model
    threshold: float = 0.5

    # Natural language models
    k: int = 5
    min_score: float = 0.15
    p: float = 0.5
    alpha: float = 0.25

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"Unsupported model kind: {self.kind}")
        if not 0 < self.multiplier <= 1:
            raise ValueError(f"multiplier must be in (0, 1], got {self.multiplier}")
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


@dataclass
class BucketConfig:
    """Edges turning unbounded numeric features into categories.

    A number falls in the first bucket whose edge is at least the number, or
    in one extra bucket past the last edge.
    """

    count_edges: Tuple[float, ...] = (-10, -1, 0, 3, 10, 50, 100)
    float_edges: Tuple[float, ...] = (-100, -10, -1, -0.1, 0, 0.1, 1, 10, 100)

    def __post_init__(self):
        """Validate that the edges are strictly increasing."""
        for name in ("count_edges", "float_edges"):
            edges = tuple(getattr(self, name))
            if not edges or any(a >= b for a, b in zip(edges, edges[1:])):
                raise ValueError(f"{name} must be a non-empty increasing list")
            setattr(self, name, edges)


@dataclass
class GuidanceConfig:
    """Every guidance model and the featurizer buckets."""

    models: Dict[str, GuidanceModelConfig] = field(default_factory=dict)
    buckets: BucketConfig = field(default_factory=BucketConfig)

    def get_model_config(self, name: str) -> GuidanceModelConfig:
        """Get configuration for a specific model.

        Raises:
            ServiceConfigurationError: If the model is not configured
        """
        if name not in self.models:
            available = ", ".join(self.models)
            raise ServiceConfigurationError(f"Guidance model '{name}' is not configured. Available models: {available}")
        return self.models[name]

    def of_kind(self, kind: str) -> Optional[GuidanceModelConfig]:
        """The first configured model of a kind."""
        for config in self.models.values():
            if config.kind == kind:
                return config
        return None

    def list_models(self) -> List[str]:
        return list(self.models)


def load_guidance_config(config_path: str, default_multiplier: float = 0.75) -> GuidanceConfig:
    """Load and validate the guidance YAML file.

    Args:
        config_path: Path to guidance.yaml
        default_multiplier: multiplier of models that do not set one

    Raises:
        ServiceConfigurationError: If the file is missing or invalid
    """
    try:
        with open(config_path, "r") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ServiceConfigurationError(f"Guidance configuration file not found: {config_path}")
    except yaml.YAMLError as e:
        raise ServiceConfigurationError(f"Invalid YAML in guidance configuration: {e}")

    if not isinstance(data, dict) or "models" not in data:
        raise ServiceConfigurationError('Configuration must have top-level "models" key')
    models_dict = data["models"]
    if not isinstance(models_dict, dict):
        raise ServiceConfigurationError('"models" must be a dictionary')

    models = {}
    for model_name, model_data in models_dict.items():
        try:
            models[model_name] = GuidanceModelConfig(
                name=model_name,
                kind=model_data["kind"],
                file=model_data["file"],
                multiplier=model_data.get("multiplier", default_multiplier),
                **{key: model_data[key] for key in ("threshold", "k", "min_score", "p", "alpha") if key in model_data},
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ServiceConfigurationError(f"Invalid configuration for guidance model '{model_name}': {e}")

    buckets_data = data.get("buckets") or {}
    if not isinstance(buckets_data, dict):
        raise ServiceConfigurationError('"buckets" must be a dictionary')
    try:
        buckets = BucketConfig(**buckets_data)
    except (TypeError, ValueError) as e:
        raise ServiceConfigurationError(f"Invalid bucket configuration: {e}")
    return GuidanceConfig(models=models, buckets=buckets)
