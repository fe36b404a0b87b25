"""Deterministic squared-error training of symmetric two-layer mappings.

The package trains RBM-shaped models (shared weights between a visible and
a hidden layer) by minimizing the squared reconstruction error on the
visible side, either with exact gradients or with the derivative-free
finite-difference scheme, and ships the experiment drivers exposed through
the `fdrbm` command line tool.
"""

from .activations import ActivationMap
from .estimators import GreedyRBMStack, SquaredErrorRBM
from .exceptions import ConfigError, DataFormatError, DivergenceError
from .feedforward import FeedForwardLayer
from .metrics import ErrorCurve, log_adjusted, mse
from .rbm import RbmParams, RbmState, TrainConfig
from .rng import SplitMix64
from .stack import LayerSpec, RbmStack

__version__ = "0.1.0"

__all__ = [
    "ActivationMap",
    "ConfigError",
    "DataFormatError",
    "DivergenceError",
    "ErrorCurve",
    "FeedForwardLayer",
    "GreedyRBMStack",
    "LayerSpec",
    "RbmParams",
    "RbmStack",
    "RbmState",
    "SplitMix64",
    "SquaredErrorRBM",
    "TrainConfig",
    "log_adjusted",
    "mse",
    "__version__",
]
