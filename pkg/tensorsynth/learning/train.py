"""Training the tensor model by mini-batch gradient descent."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import EmptyDataset
from ..guidance.features import Featurizer
from ..guidance.tensor_model import TensorModelParams, sigmoid
from .datagen import DatasetExample, label_counts, split_dataset
from .losses import LossKind, LossResult, Weighting, cross_entropy, fbeta_loss_and_grad, label_weights, op_weights

logger = logging.getLogger(__name__)

LOG_HEADER = ("epoch", "train_loss", "eval_loss")


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters."""

    loss: LossKind = LossKind.CROSS_ENTROPY
    weighting: Weighting = Weighting.NONE
    clip: float = 10000.0
    learning_rate: float = 1.0
    epochs: int = 10
    batch_size: int = 128
    hidden_units: int = 0
    eval_fraction: float = 0.05
    rng_seed: int = 0

    def __post_init__(self):
        """Validate the configuration."""
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0 <= self.eval_fraction < 1:
            raise ValueError(f"eval_fraction must be in [0, 1), got {self.eval_fraction}")


def encode(
    dataset: Sequence[DatasetExample], ops: Sequence[str], featurizer: Featurizer
) -> Tuple[np.ndarray, np.ndarray]:
    """Feature rows and 0/1 label rows of a dataset."""
    index = {name: i for i, name in enumerate(ops)}
    features = np.zeros((len(dataset), len(featurizer)))
    labels = np.zeros((len(dataset), len(ops)))
    for row, example in enumerate(dataset):
        features[row] = featurizer.featurize_example(list(example.inputs.values()), example.output).values
        for name in example.ops_used:
            if name in index:
                labels[row, index[name]] = 1.0
    return features, labels


class Trainer:
    """Fits :class:`TensorModelParams` to a dataset.

    ``history`` holds one ``(epoch, train_loss, eval_loss)`` row per epoch,
    epoch 0 being the untrained model.
    """

    def __init__(self, config: TrainConfig, ops: Sequence[str], featurizer: Optional[Featurizer] = None):
        self.config = config
        self.ops = list(ops)
        self.featurizer = featurizer or Featurizer()
        self.history: List[Tuple[int, float, float]] = []
        self.degenerate = 0
        self._weights_per_op = np.ones(len(self.ops))

    def loss(self, params: TensorModelParams, features: np.ndarray, labels: np.ndarray) -> LossResult:
        """Configured loss of the parameters; gradient with respect to the logits."""
        logits = params.logits(features)
        weights = label_weights(labels, self._weights_per_op)
        if self.config.loss is LossKind.CROSS_ENTROPY:
            return cross_entropy(logits, labels, weights)
        probabilities = sigmoid(logits)
        result = fbeta_loss_and_grad(probabilities, labels, self.config.loss.beta, weights)
        return LossResult(result.loss, result.gradient * probabilities * (1 - probabilities), result.degenerate)

    def fit(self, dataset: Sequence[DatasetExample]) -> TensorModelParams:
        """Train on the dataset and return the fitted parameters.

        Raises:
            EmptyDataset: If the dataset is empty
        """
        if not dataset:
            raise EmptyDataset("cannot train on an empty dataset")
        config = self.config
        train_set, eval_set = split_dataset(dataset, config.eval_fraction)
        if not train_set:
            train_set, eval_set = list(dataset), []
        if not eval_set:
            logger.warning("No held-out examples, eval loss is computed on the training set")
            eval_set = train_set
        train_x, train_y = encode(train_set, self.ops, self.featurizer)
        eval_x, eval_y = encode(eval_set, self.ops, self.featurizer)
        self._weights_per_op = op_weights(self.ops, config.weighting, label_counts(train_set), config.clip)

        params = TensorModelParams.initial(self.ops, train_x.shape[1], config.hidden_units, config.rng_seed)
        rng = np.random.default_rng(config.rng_seed)
        self.history = [(0, self.loss(params, train_x, train_y).loss, self.loss(params, eval_x, eval_y).loss)]
        for epoch in range(1, config.epochs + 1):
            order = rng.permutation(len(train_x))
            for start in range(0, len(order), config.batch_size):
                batch = order[start : start + config.batch_size]
                self._step(params, train_x[batch], train_y[batch])
            train_result = self.loss(params, train_x, train_y)
            eval_loss = self.loss(params, eval_x, eval_y).loss
            self.degenerate = train_result.degenerate
            self.history.append((epoch, train_result.loss, eval_loss))
            logger.info("Epoch %d: train loss %.6f, eval loss %.6f", epoch, train_result.loss, eval_loss)
        if self.degenerate:
            logger.info("%d training examples had all-zero labels and predictions", self.degenerate)
        return params

    def _step(self, params: TensorModelParams, features: np.ndarray, labels: np.ndarray):
        hidden = params.hidden(features)
        d_logits = self.loss(params, features, labels).gradient
        d_hidden = d_logits @ params.weights
        lr = self.config.learning_rate
        params.weights -= lr * d_logits.T @ hidden
        params.bias -= lr * d_logits.sum(axis=0)
        if params.hidden_weights is not None:
            d_pre = d_hidden * (1 - hidden**2)
            params.hidden_weights -= lr * d_pre.T @ features
            params.hidden_bias -= lr * d_pre.sum(axis=0)


def train_tensor_model(
    dataset: Sequence[DatasetExample],
    config: TrainConfig,
    ops: Sequence[str],
    featurizer: Optional[Featurizer] = None,
) -> TensorModelParams:
    """Train a tensor model; see :class:`Trainer` for the loss history."""
    return Trainer(config, ops, featurizer).fit(dataset)
