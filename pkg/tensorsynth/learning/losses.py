"""Training losses of the tensor model and per-operation example weights.

Every loss takes a batch of rows, one row per example and one column per
operation, and returns the mean over examples together with its gradient.
``weights`` multiply each (example, operation) term; :func:`label_weights`
builds them so that only positive labels are reweighted.
"""

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..exceptions import UnknownOpError

EPSILON = 1e-7
WEIGHT_CLIP = 10000.0


class LossKind(enum.Enum):
    CROSS_ENTROPY = "ce"
    F1 = "f1"
    F2 = "f2"

    @property
    def beta(self) -> float:
        return {LossKind.F1: 1.0, LossKind.F2: 2.0}[self]


class Weighting(enum.Enum):
    """How positive examples of rare operations are boosted."""

    NONE = "none"
    MAX = "max"
    MEAN = "mean"


@dataclass(frozen=True)
class LossResult:
    """Mean loss over the batch and its gradient.

    ``gradient`` is taken with respect to the logits for cross entropy and
    with respect to the probabilities for F-beta. ``degenerate`` counts rows
    whose labels and probabilities were all zero.
    """

    loss: float
    gradient: np.ndarray
    degenerate: int = 0


def _rows(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return x.reshape(1, -1) if x.ndim == 1 else x


def cross_entropy(logits, labels, weights=None) -> LossResult:
    """Sigmoid cross entropy averaged over operations, then over examples."""
    logits, labels = _rows(logits), _rows(labels)
    weights = np.ones_like(logits) if weights is None else _rows(weights)
    n, m = logits.shape
    # log(1 + exp(z)) - y z, written to avoid overflow
    per_term = np.maximum(logits, 0) - logits * labels + np.log1p(np.exp(-np.abs(logits)))
    loss = float(np.sum(weights * per_term) / (n * m))
    probabilities = 0.5 * (1.0 + np.tanh(0.5 * logits))
    gradient = weights * (probabilities - labels) / (n * m)
    return LossResult(loss, gradient)


def fbeta_loss_and_grad(probs, labels, beta: float, weights=None) -> LossResult:
    """One minus the soft F-beta score of each example, averaged.

    With soft counts TP = sum(w p y), FP = sum(w p (1 - y)) and
    FN = sum(w (1 - p) y), the score is
    (1 + b^2) TP / ((1 + b^2) TP + b^2 FN + FP + eps). Rows with all-zero
    labels and probabilities score a loss of 0 and are counted as degenerate.
    """
    probs, labels = _rows(probs), _rows(labels)
    weights = np.ones_like(probs) if weights is None else _rows(weights)
    n = probs.shape[0]
    b2 = beta * beta
    tp = np.sum(weights * probs * labels, axis=1)
    fp = np.sum(weights * probs * (1 - labels), axis=1)
    fn = np.sum(weights * (1 - probs) * labels, axis=1)
    numerator = (1 + b2) * tp
    raw = numerator + b2 * fn + fp
    denominator = raw + EPSILON
    score = numerator / denominator

    degenerate = raw == 0
    losses = np.where(degenerate, 0.0, 1.0 - score)
    d_numerator = (1 + b2) * weights * labels
    d_score = (d_numerator * denominator[:, None] - numerator[:, None] * weights) / denominator[:, None] ** 2
    gradient = np.where(degenerate[:, None], 0.0, -d_score) / n
    return LossResult(float(np.mean(losses)), gradient, int(np.count_nonzero(degenerate)))


def fbeta_loss(probs, labels, beta: float, weights=None) -> float:
    return fbeta_loss_and_grad(probs, labels, beta, weights).loss


def example_weight(op: str, scheme: Weighting, counts: Mapping[str, int], clip: float = WEIGHT_CLIP) -> float:
    """Weight of a positive example of ``op``.

    MAX divides the count of the most frequent operation by the count of
    ``op``, MEAN divides the mean count. Weights are clipped at ``clip``.

    Raises:
        UnknownOpError: If ``op`` has no count
    """
    if op not in counts:
        raise UnknownOpError(op, list(counts))
    count = counts[op]
    if count < 1:
        raise ValueError(f"count of '{op}' must be at least 1, got {count}")
    if scheme is Weighting.NONE:
        return 1.0
    if scheme is Weighting.MAX:
        weight = max(counts.values()) / count
    else:
        weight = float(np.mean(list(counts.values()))) / count
    return min(weight, clip)


def op_weights(ops: Sequence[str], scheme: Weighting, counts: Mapping[str, int], clip: float = WEIGHT_CLIP) -> np.ndarray:
    """Positive-example weight of every operation; operations never seen get 1."""
    return np.array(
        [example_weight(op, scheme, counts, clip) if counts.get(op, 0) >= 1 else 1.0 for op in ops],
        dtype=np.float64,
    )


def label_weights(labels, weights_per_op: np.ndarray) -> np.ndarray:
    """Per-term weights: the operation's weight where the label is 1, else 1."""
    labels = _rows(labels)
    return np.where(labels > 0, weights_per_op[None, :], 1.0)
