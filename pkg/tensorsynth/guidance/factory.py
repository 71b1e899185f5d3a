"""Factory for creating guidance models from configuration and model files."""

import logging
import os
from typing import Any, List, Mapping, Optional, Sequence

from ..common.recording import read_json
from ..exceptions import ServiceConfigurationError
from ..registry.registry import OperationRegistry
from .base import GuidanceModel, PrioritizedOps
from .config import GuidanceConfig, GuidanceModelConfig
from .features import Featurizer

logger = logging.getLogger(__name__)


class GuidanceFactory:
    """Factory for instantiating the correct model based on its kind."""

    @staticmethod
    def create_model(
        model_config: GuidanceModelConfig, data: Mapping[str, Any], featurizer: Optional[Featurizer] = None
    ) -> GuidanceModel:
        """Create a model from its saved parameters.

        Args:
            model_config: Configuration naming the model kind and hyperparameters
            data: The model file's JSON document
            featurizer: Featurizer for tensor models

        Returns:
            Instance of a GuidanceModel subclass (TensorModel, TfIdfModel, NaiveBayesModel)

        Raises:
            ServiceConfigurationError: If the kind is not supported or the data is invalid
        """
        kind = model_config.kind

        if kind == "tensor":
            from .tensor_model import TensorModel, TensorModelParams

            return TensorModel(model_config, TensorModelParams.from_dict(data), featurizer or Featurizer())
        elif kind == "tfidf":
            from .tfidf import TfIdfModel

            return TfIdfModel.from_dict(model_config, data)
        elif kind == "naive_bayes":
            from .naive_bayes import NaiveBayesModel

            return NaiveBayesModel.from_dict(model_config, data)
        else:
            raise ServiceConfigurationError(
                f"Unsupported model kind: {kind}. Supported kinds: tensor, tfidf, naive_bayes"
            )


def model_path(models_dir: str, model_config: GuidanceModelConfig) -> str:
    return os.path.join(models_dir, model_config.file)


def load_guidance(
    guidance_config: GuidanceConfig,
    models_dir: str,
    registry: OperationRegistry,
    docstrings: Optional[Mapping[str, str]] = None,
    *,
    use_tensor_model: bool = True,
    use_nl_models: bool = True,
) -> List[GuidanceModel]:
    """Load every enabled guidance model.

    Missing TF-IDF or naive Bayes files are replaced by models fitted on the
    fly from the docstrings. A missing tensor model file disables that model
    with a warning.

    Raises:
        ServiceConfigurationError: If a model file is invalid or predicts unknown operations
    """
    featurizer = Featurizer(guidance_config.buckets)
    models: List[GuidanceModel] = []
    missing_nl: List[GuidanceModelConfig] = []
    for model_config in guidance_config.models.values():
        is_tensor = model_config.kind == "tensor"
        if (is_tensor and not use_tensor_model) or (not is_tensor and not use_nl_models):
            continue
        path = model_path(models_dir, model_config)
        if not os.path.exists(path):
            if is_tensor:
                logger.warning("Tensor model file %s not found, the tensor model is disabled", path)
            else:
                missing_nl.append(model_config)
            continue
        models.append(GuidanceFactory.create_model(model_config, read_json(path), featurizer))

    if missing_nl:
        models.extend(_fit_missing(guidance_config, missing_nl, registry, docstrings))

    for model in models:
        unknown = sorted(set(model.ops) - set(registry.names()))
        if unknown:
            raise ServiceConfigurationError(
                f"Guidance model '{model.config.name}' predicts unregistered operations: {', '.join(unknown)}"
            )
    return models


def _fit_missing(
    guidance_config: GuidanceConfig,
    missing: Sequence[GuidanceModelConfig],
    registry: OperationRegistry,
    docstrings: Optional[Mapping[str, str]],
) -> List[GuidanceModel]:
    # Import here to avoid circular dependency
    from ..learning.fit_nl import fit_nl_models

    if docstrings is None:
        docstrings = {op.name: op.docstring for op in registry}
    tfidf_config = guidance_config.of_kind("tfidf")
    nb_config = guidance_config.of_kind("naive_bayes")
    logger.info("Fitting %s from the operation docstrings", ", ".join(c.name for c in missing))
    tfidf, naive_bayes = fit_nl_models(
        docstrings, ops=registry.names(), tfidf_config=tfidf_config, nb_config=nb_config
    )
    fitted = {"tfidf": tfidf, "naive_bayes": naive_bayes}
    return [fitted[model_config.kind] for model_config in missing]


def prioritize(models: Sequence[GuidanceModel], task) -> List[PrioritizedOps]:
    """Predictions of every model for a task; models with nothing to say are dropped."""
    predictions = []
    for model in models:
        prediction = model.prioritize(task)
        logger.debug("%s prioritized %s", model.config.name, ", ".join(prediction.ops) or "nothing")
        if prediction.ops:
            predictions.append(prediction)
    return predictions
