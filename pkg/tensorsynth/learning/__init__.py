"""Offline pipelines: dataset generation, tensor model training, text model fitting."""

from .collapse import collapse_subtrees  # noqa: F401
from .datagen import DatasetExample, generate_dataset, split_dataset  # noqa: F401
from .fit_nl import CorpusRecord, fit_nl_models, read_corpus  # noqa: F401
from .losses import LossKind, Weighting, cross_entropy, example_weight, fbeta_loss  # noqa: F401
from .train import TrainConfig, Trainer, train_tensor_model  # noqa: F401
