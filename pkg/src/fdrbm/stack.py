"""Greedy layer-wise training and composition of stacked models.

Layer k + 1 is trained on the hidden outputs of the already-trained layer k;
encode composes projections bottom-up, decode composes reconstructions
top-down in reverse order, each layer applying its own visible activation.
"""

from dataclasses import dataclass, field

import numpy as np

from . import rbm
from .exceptions import ConfigError
from .rng import SplitMix64


@dataclass
class LayerSpec:
    """Architecture of one layer in a stack."""

    n_hidden: int
    act_h: object = "identity"
    act_v: object = "identity"


@dataclass
class RbmStack:
    layers: list = field(default_factory=list)

    def __post_init__(self):
        if not self.layers:
            raise ConfigError("a stack needs at least one layer")
        for lower, upper in zip(self.layers, self.layers[1:]):
            if upper.n_visible != lower.n_hidden:
                raise ConfigError(
                    f"layer sizes do not chain: {lower.n_hidden} hidden feeds "
                    f"{upper.n_visible} visible"
                )
            if upper.node_width != lower.node_width:
                raise ConfigError("all layers must share the node width d")

    @property
    def n_visible(self):
        return self.layers[0].n_visible

    @property
    def n_hidden(self):
        return self.layers[-1].n_hidden


def specs_from_sizes(sizes, act_h="identity", act_v="identity"):
    """Layer specs for a size chain like (784, 784, 196, 49).

    `act_v` applies to the first (data-facing) visible layer only; deeper
    visible layers use the identity.  `act_h` applies to every hidden layer.
    """
    if len(sizes) < 2:
        raise ConfigError("a stack needs at least two sizes (visible, hidden, ...)")
    specs = []
    for i, n_hidden in enumerate(sizes[1:]):
        specs.append(LayerSpec(n_hidden, act_h=act_h, act_v=act_v if i == 0 else "identity"))
    return sizes[0], specs


def train_greedy(n_visible, specs, dataset, config, node_width=1, callback=None):
    """Train layers bottom-up, each on the previous layer's hidden outputs.

    `callback(layer_index, epoch, mean_energy)` is invoked per epoch.
    Returns (RbmStack, list of per-layer energy traces).
    """
    if not specs:
        raise ConfigError("a stack needs at least one layer spec")
    current = [np.asarray(x, dtype=np.float64) for x in dataset]
    if not current:
        raise ValueError("empty dataset")
    layers = []
    traces = []
    width = current[0].shape[1] if current[0].ndim == 2 else node_width
    size_in = n_visible
    for index, spec in enumerate(specs):
        params = rbm.init_params(
            size_in, spec.n_hidden, node_width=width,
            act_h=spec.act_h, act_v=spec.act_v,
            rng=SplitMix64(config.seed + index),
        )
        hook = None
        if callback is not None:
            hook = lambda epoch, e, _p, i=index: callback(i, epoch, e)
        params, trace = rbm.train(params, current, config, callback=hook)
        layers.append(params)
        traces.append(trace)
        current = [rbm.project(params, x)[1] for x in current]
        size_in = spec.n_hidden
    return RbmStack(layers), traces


def encode(stack, x):
    """Compose projections bottom-up; returns the top hidden representation."""
    for params in stack.layers:
        _, x = rbm.project(params, x)
    return x


def decode(stack, y):
    """Compose reconstructions top-down, reversing the layer order."""
    for params in reversed(stack.layers):
        _, y = rbm.reconstruct(params, y)
    return y
