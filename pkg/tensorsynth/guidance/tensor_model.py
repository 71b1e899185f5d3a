"""Classifier predicting operations from tensor features."""

from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Sequence

import numpy as np

from ..exceptions import DimensionMismatch, ServiceConfigurationError
from .base import FORMAT_VERSION, GuidanceModel, ModelSource, PrioritizedOps
from .config import GuidanceModelConfig
from .features import FeatureVector, Featurizer


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


@dataclass
class TensorModelParams:
    """Weights of the classifier.

    Without a hidden layer the logits are ``features @ weights.T + bias``.
    With one, ``hidden_weights`` and ``hidden_bias`` map the features to
    tanh units first.
    """

    ops: Sequence[str]
    weights: np.ndarray
    bias: np.ndarray
    hidden_weights: Optional[np.ndarray] = None
    hidden_bias: Optional[np.ndarray] = None

    def __post_init__(self):
        """Check the stored dimensions agree."""
        self.ops = tuple(self.ops)
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.ndim != 2 or self.weights.shape[0] != len(self.ops) or self.bias.shape != (len(self.ops),):
            raise ValueError("output layer does not match the operation count")
        if self.hidden_weights is not None:
            self.hidden_weights = np.asarray(self.hidden_weights, dtype=np.float64)
            self.hidden_bias = np.asarray(self.hidden_bias, dtype=np.float64)
            if self.hidden_weights.shape[0] != self.weights.shape[1] or self.hidden_bias.shape != (
                self.hidden_weights.shape[0],
            ):
                raise ValueError("hidden layer does not match the output layer")

    @classmethod
    def zeros(cls, ops: Sequence[str], input_dim: int) -> "TensorModelParams":
        """A linear model predicting probability 0.5 for everything."""
        return cls(ops, np.zeros((len(ops), input_dim)), np.zeros(len(ops)))

    @classmethod
    def initial(
        cls, ops: Sequence[str], input_dim: int, hidden_units: int = 0, seed: int = 0
    ) -> "TensorModelParams":
        """Starting point for training: zeros, or small random hidden weights."""
        if not hidden_units:
            return cls.zeros(ops, input_dim)
        rng = np.random.default_rng(seed)
        scale = 1.0 / np.sqrt(input_dim)
        return cls(
            ops,
            rng.normal(0.0, 1.0 / np.sqrt(hidden_units), size=(len(ops), hidden_units)),
            np.zeros(len(ops)),
            hidden_weights=rng.normal(0.0, scale, size=(hidden_units, input_dim)),
            hidden_bias=np.zeros(hidden_units),
        )

    @property
    def input_dim(self) -> int:
        layer = self.hidden_weights if self.hidden_weights is not None else self.weights
        return layer.shape[1]

    @property
    def hidden_units(self) -> int:
        return 0 if self.hidden_weights is None else self.hidden_weights.shape[0]

    def hidden(self, features: np.ndarray) -> np.ndarray:
        """Input of the output layer for a batch of feature rows."""
        if self.hidden_weights is None:
            return features
        return np.tanh(features @ self.hidden_weights.T + self.hidden_bias)

    def logits(self, features: np.ndarray) -> np.ndarray:
        """Logits for one feature vector or a batch of rows.

        Raises:
            DimensionMismatch: If the feature length differs from the input dimension
        """
        features = np.asarray(features, dtype=np.float64)
        if features.shape[-1] != self.input_dim:
            raise DimensionMismatch(f"expected {self.input_dim} features, got {features.shape[-1]}")
        return self.hidden(features) @ self.weights.T + self.bias

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "format_version": FORMAT_VERSION,
            "kind": "tensor",
            "ops": list(self.ops),
            "input_dim": self.input_dim,
            "hidden_units": self.hidden_units,
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
        }
        if self.hidden_weights is not None:
            data["hidden_weights"] = self.hidden_weights.tolist()
            data["hidden_bias"] = self.hidden_bias.tolist()
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TensorModelParams":
        """Rebuild parameters saved with :meth:`to_dict`.

        Raises:
            ServiceConfigurationError: If the document is not a valid tensor model
        """
        if data.get("format_version") != FORMAT_VERSION or data.get("kind") != "tensor":
            raise ServiceConfigurationError("Not a tensor model file of a supported version")
        try:
            params = cls(
                data["ops"],
                np.asarray(data["weights"], dtype=np.float64).reshape(len(data["ops"]), -1),
                data["bias"],
                hidden_weights=data.get("hidden_weights"),
                hidden_bias=data.get("hidden_bias"),
            )
        except (KeyError, ValueError) as e:
            raise ServiceConfigurationError(f"Invalid tensor model file: {e}")
        if params.input_dim != data.get("input_dim", params.input_dim):
            raise ServiceConfigurationError("Tensor model input_dim does not match its weights")
        return params


def tensor_model_predict(
    fv: FeatureVector, params: TensorModelParams, multiplier: float = 0.75, threshold: float = 0.5
) -> PrioritizedOps:
    """Operations whose predicted probability is strictly above the threshold.

    Raises:
        DimensionMismatch: If the feature vector does not fit the parameters
    """
    probabilities = sigmoid(params.logits(fv.values))
    order = np.argsort(-probabilities, kind="stable")
    chosen = [i for i in order if probabilities[i] > threshold]
    return PrioritizedOps(
        source=ModelSource.TENSOR_MODEL,
        ops=tuple(params.ops[i] for i in chosen),
        multiplier=multiplier,
        scores=tuple(float(probabilities[i]) for i in chosen),
    )


class TensorModel(GuidanceModel):
    """Featurizes a task's first example and runs the classifier on it."""

    source = ModelSource.TENSOR_MODEL

    def __init__(self, config: GuidanceModelConfig, params: TensorModelParams, featurizer: Featurizer):
        super().__init__(config)
        self.params = params
        self.featurizer = featurizer
        if params.input_dim != len(featurizer):
            raise DimensionMismatch(
                f"tensor model takes {params.input_dim} features but the featurizer produces {len(featurizer)}"
            )

    @property
    def ops(self):
        return self.params.ops

    def prioritize(self, task) -> PrioritizedOps:
        fv = self.featurizer.featurize(task)
        return tensor_model_predict(fv, self.params, self.config.multiplier, self.config.threshold)

    def to_dict(self) -> Dict[str, Any]:
        return self.params.to_dict()
