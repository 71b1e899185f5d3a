"""Operation prioritization from tensor features and task descriptions."""

from .base import GuidanceModel, ModelSource, PrioritizedOps, reweight  # noqa: F401
from .config import BucketConfig, GuidanceConfig, GuidanceModelConfig, load_guidance_config  # noqa: F401
from .factory import GuidanceFactory, load_guidance, prioritize  # noqa: F401
from .features import FeatureVector, Featurizer, featurize  # noqa: F401
from .naive_bayes import NaiveBayesModel, nb_rank  # noqa: F401
from .tensor_model import TensorModel, TensorModelParams, tensor_model_predict  # noqa: F401
from .tfidf import TfIdfModel, tfidf_rank  # noqa: F401
