"""Application configuration.

Most configuration is set via environment variables.

For local development, use a .env file to set
environment variables.
"""

import os

from environs import Env

env = Env()
env.read_env()

HERE = os.path.dirname(__file__)

# Shipped data files
WEIGHTS_PATH = env.str("TENSORSYNTH_WEIGHTS", default=os.path.join(HERE, "weights.conf"))
OPDOCS_PATH = env.str("TENSORSYNTH_OPDOCS", default=os.path.join(HERE, "opdocs.txt"))
GUIDANCE_CONFIG_PATH = env.str(
    "TENSORSYNTH_GUIDANCE_CONFIG", default=os.path.join(HERE, "guidance.yaml")
)
BENCHMARKS_DIR = env.str("TENSORSYNTH_BENCHMARKS", default=os.path.join(HERE, "benchmarks"))
MODELS_DIR = env.str("TENSORSYNTH_MODELS", default=os.path.join(HERE, "models"))

# Search defaults
SEARCH_TIMEOUT = env.float("SEARCH_TIMEOUT", 300.0)
SEARCH_MAX_WEIGHT = env.int("SEARCH_MAX_WEIGHT", 200)
SEARCH_MAX_SOLUTIONS = env.int("SEARCH_MAX_SOLUTIONS", 1)
SEARCH_REQUIRE_ALL_INPUTS = env.bool("SEARCH_REQUIRE_ALL_INPUTS", True)
SEARCH_REL_TOL = env.float("SEARCH_REL_TOL", 1e-4)
SEARCH_ABS_TOL = env.float("SEARCH_ABS_TOL", 1e-8)

# Weights of initial values by origin
ORIGIN_WEIGHTS = {
    "input": env.int("WEIGHT_INPUT", 8),
    "constant": env.int("WEIGHT_USER_CONSTANT", 7),
    "common_constant": env.int("WEIGHT_COMMON_CONSTANT", 8),
    "axis": env.int("WEIGHT_AXIS", 8),
    "dimension": env.int("WEIGHT_DIMENSION", 12),
    "output_shape": env.int("WEIGHT_OUTPUT_SHAPE", 12),
}

PRIORITIZATION_MULTIPLIER = env.float("PRIORITIZATION_MULTIPLIER", 0.75)

LOG_LEVEL = env.str("LOG_LEVEL", "INFO").upper()
LOG_SEARCH_PROGRESS = env.bool("LOG_SEARCH_PROGRESS", False)
