"""The app module, containing the app factory function."""

import importlib
import logging
from typing import Any, Dict, List, Optional, Tuple

from .common.logging import configure_logging as configure_rich_logging
from .exceptions import MissingWeight
from .guidance import GuidanceModel, PrioritizedOps, load_guidance, load_guidance_config, prioritize, reweight
from .guidance.config import GuidanceConfig
from .registry import OperationRegistry, WeightTable, load_docstrings, load_weights, registry_build
from .search.task import TaskSpec

logger = logging.getLogger(__name__)


class Config(dict):
    """Configuration mapping filled from the UPPERCASE attributes of an object."""

    def from_object(self, obj: Any) -> None:
        """Copy settings from a module, a dotted module name or any object."""
        if isinstance(obj, str):
            obj = importlib.import_module(obj)
        for key in dir(obj):
            if key.isupper():
                self[key] = getattr(obj, key)


class Application:
    """Holds the configuration, the operation registry and the guidance models."""

    def __init__(self, name: str):
        self.name = name
        self.config = Config()
        self.registry: Optional[OperationRegistry] = None
        self.docstrings: Dict[str, str] = {}
        self.guidance_config: Optional[GuidanceConfig] = None
        self._guidance: Dict[Tuple[str, bool, bool], List[GuidanceModel]] = {}

    @property
    def weights(self) -> WeightTable:
        return self.registry.weights()

    def weight_table(self, path: Optional[str] = None) -> WeightTable:
        """Base weights, or the weights of another weight file.

        Raises:
            MissingWeight: If the file lacks a registered operation
        """
        if path is None:
            return self.weights
        table = load_weights(path)
        for name in self.registry.names():
            if name not in table:
                raise MissingWeight(name)
        return WeightTable({name: table[name] for name in self.registry.names()})

    def guidance(
        self, models_dir: Optional[str] = None, use_tensor_model: bool = True, use_nl_models: bool = True
    ) -> List[GuidanceModel]:
        """The enabled guidance models, loaded once per models directory."""
        models_dir = models_dir or self.config["MODELS_DIR"]
        key = (models_dir, use_tensor_model, use_nl_models)
        if key not in self._guidance:
            self._guidance[key] = load_guidance(
                self.guidance_config,
                models_dir,
                self.registry,
                self.docstrings,
                use_tensor_model=use_tensor_model,
                use_nl_models=use_nl_models,
            )
        return self._guidance[key]

    def prioritized_weights(
        self, task: TaskSpec, base: WeightTable, models: List[GuidanceModel]
    ) -> Tuple[WeightTable, List[PrioritizedOps]]:
        """Reweight ``base`` with the predictions of the models for ``task``."""
        predictions = prioritize(models, task)
        return reweight(base, predictions), predictions


def create_app(config_object="tensorsynth.settings") -> Application:
    """Create application factory.

    :param config_object: The configuration object to use.
    """
    app = Application(__name__.split(".")[0])
    app.config.from_object(config_object)
    configure_logging(app)
    configure_registry(app)
    configure_guidance(app)
    return app


def configure_registry(app: Application):
    """Build the operation registry from the weight table and docstring file."""
    app.docstrings = load_docstrings(app.config["OPDOCS_PATH"])
    app.registry = registry_build(load_weights(app.config["WEIGHTS_PATH"]), app.docstrings)
    logger.debug("Loaded %d operations", len(app.registry))


def configure_guidance(app: Application):
    """Load the guidance configuration; models are loaded on first use."""
    app.guidance_config = load_guidance_config(
        app.config["GUIDANCE_CONFIG_PATH"], app.config.get("PRIORITIZATION_MULTIPLIER", 0.75)
    )


def configure_logging(app: Application):
    """Configure logging."""
    configure_rich_logging(app.config.get("LOG_LEVEL", "INFO"))
