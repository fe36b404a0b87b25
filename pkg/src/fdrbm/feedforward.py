"""Directed-graph (feedforward) layer with gradient and finite-difference updates.

One layer maps an input X (m x d) to act(W X + B) and is pulled toward a
fixed target Y0 (n x d) under the energy 0.5 * ||act(W X + B) - Y0||^2.
The layer may also update its *input* (the mid-stack case), controlled by
the `update_input` flag.

gd_update applies the exact gradients; fd_update drops the derivative
factor and is therefore defined even where the gradient is not (relu at a
pre-activation of exactly 0).  For the identity activation the two updates
coincide exactly.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .activations import ActivationMap, as_activation_map
from .exceptions import ConfigError, DivergenceError


@dataclass
class FeedForwardLayer:
    weights: np.ndarray  # (n, m)
    bias: np.ndarray     # (n, d)
    act: ActivationMap   # n rows

    def __post_init__(self):
        self.weights = linalg.as_matrix(self.weights, "weights")
        self.bias = linalg.as_matrix(self.bias, "bias")
        if self.bias.shape[0] != self.weights.shape[0]:
            raise ConfigError(
                f"bias has {self.bias.shape[0]} rows, weights have {self.weights.shape[0]}"
            )
        self.act = as_activation_map(self.act, self.weights.shape[0])

    @property
    def n_out(self):
        return self.weights.shape[0]

    @property
    def n_in(self):
        return self.weights.shape[1]


def _check_input(layer, x0):
    if x0.shape != (layer.n_in, layer.bias.shape[1]):
        raise ValueError(
            f"input shape {x0.shape} does not match layer "
            f"({layer.n_in}, {layer.bias.shape[1]})"
        )


def forward(layer, x0):
    """act(W X + B)."""
    _check_input(layer, x0)
    return layer.act.apply(linalg.matmul(layer.weights, x0) + layer.bias)


def energy(layer, x0, y_target):
    """0.5 * ||forward(layer, x0) - y_target||^2."""
    out = forward(layer, x0)
    linalg.require_same_shape(out, y_target, "feedforward energy")
    return 0.5 * linalg.frob_sq(out - y_target)


def _rates(rate):
    """Split `rate` into (input rate, output rate).

    A scalar applies everywhere; a pair (rate_x, rate_y) carries separate
    rates for the input update (visible shape) and the bias/weight updates
    (output shape); either element may be a positive array.
    """
    if isinstance(rate, (tuple, list)):
        if len(rate) != 2:
            raise ConfigError("rate pair must be (rate_x, rate_y)")
        rx, ry = (np.asarray(r, dtype=np.float64) for r in rate)
    else:
        rx = ry = np.asarray(rate, dtype=np.float64)
    if not ((rx > 0).all() and (ry > 0).all()):
        raise ConfigError("learning rates must be strictly positive")
    return rx, ry


def _finish(layer, new_w, new_b, x1):
    for name, arr in (("weights", new_w), ("bias", new_b)):
        if not np.isfinite(arr).all():
            raise DivergenceError(name)
    if x1 is not None and not np.isfinite(x1).all():
        raise DivergenceError("input")
    return replace(layer, weights=new_w, bias=new_b), x1


def gd_update(layer, x0, y_target, rate, update_input=False):
    """One exact-gradient update toward y_target.

    Returns (updated layer, updated input or None).  The input update is
    X1 = X0 - rate * W' [act'(out) ⊙ (out - Y0)], i.e. the derivative factor
    is applied in output space before propagating through W'.
    """
    rx, ry = _rates(rate)
    out = forward(layer, x0)
    linalg.require_same_shape(out, y_target, "gd_update")
    s = linalg.hadamard(layer.act.deriv_from_output(out), out - y_target)
    new_b = layer.bias - ry * s
    new_w = layer.weights - (ry * s) @ x0.T
    x1 = x0 - rx * linalg.matmul_at_b(layer.weights, s) if update_input else None
    return _finish(layer, new_w, new_b, x1)


def fd_update(layer, x0, y_target, rate, update_input=False):
    """One finite-difference update toward y_target; no derivatives used.

    B1 = B0 - rate ⊙ (out - Y0); W1 = W0 - [rate ⊙ (out - Y0)] X0';
    X1 = X0 - rate ⊙ (W0' (out - Y0)) when update_input is set.
    """
    rx, ry = _rates(rate)
    out = forward(layer, x0)
    linalg.require_same_shape(out, y_target, "fd_update")
    diff = out - y_target
    new_b = layer.bias - ry * diff
    new_w = layer.weights - (ry * diff) @ x0.T
    x1 = x0 - rx * linalg.matmul_at_b(layer.weights, diff) if update_input else None
    return _finish(layer, new_w, new_b, x1)
