"""Symmetric two-layer mapping trained on squared reconstruction error.

A model holds weights W (n x m), hidden bias B_h (n x d) and visible bias
B_v (m x d).  One data sample is an m x d matrix X0 (d = 1 for plain
vectors; d > 1 carries a vector value per node).  The forward pair is

    projection:      Y  = W X0 + B_h,        Yp = act_h(Y)
    reconstruction:  X  = W' Yp + B_v,       Xp = act_v(X)

and training minimizes the energy 0.5 * ||Xp - X0||^2 (the "plain" variant)
or 0.5 * ||Xp - act_v(X0)||^2 (the "recirculation" variant).

Two update schemes are provided with identical calling conventions:

* gd_step: exact gradient descent on the energy.
* fd_step: the derivative-free finite-difference scheme built from a second
  round of projection; it agrees with gd_step to first order in (Xp - X0)
  and coincides with it exactly when both activations are the identity.

fdl_step implements the linear-case update formulas directly; it exists so
tests can cross-check that gd_step collapses to it under identity
activations.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .activations import ActivationMap, as_activation_map
from .exceptions import ConfigError, DivergenceError
from .rng import SplitMix64

ENERGY_VARIANTS = ("plain", "recirculation")
SCHEMES = ("gd", "fd")


@dataclass
class RbmParams:
    """Model parameters; arrays are float64 and treated as immutable."""

    weights: np.ndarray       # (n, m)
    hidden_bias: np.ndarray   # (n, d)
    visible_bias: np.ndarray  # (m, d)
    act_h: ActivationMap      # n rows
    act_v: ActivationMap      # m rows

    def __post_init__(self):
        self.weights = linalg.as_matrix(self.weights, "weights")
        self.hidden_bias = linalg.as_matrix(self.hidden_bias, "hidden_bias")
        self.visible_bias = linalg.as_matrix(self.visible_bias, "visible_bias")
        n, m = self.weights.shape
        if self.hidden_bias.shape[0] != n:
            raise ConfigError(
                f"hidden_bias has {self.hidden_bias.shape[0]} rows, weights have {n}"
            )
        if self.visible_bias.shape[0] != m:
            raise ConfigError(
                f"visible_bias has {self.visible_bias.shape[0]} rows, weights have {m} columns"
            )
        if self.hidden_bias.shape[1] != self.visible_bias.shape[1]:
            raise ConfigError("hidden and visible biases disagree on node width d")
        self.act_h = as_activation_map(self.act_h, n)
        self.act_v = as_activation_map(self.act_v, m)

    @property
    def n_hidden(self):
        return self.weights.shape[0]

    @property
    def n_visible(self):
        return self.weights.shape[1]

    @property
    def node_width(self):
        return self.hidden_bias.shape[1]


@dataclass
class RbmState:
    """All intermediate quantities of one projection/reconstruction round."""

    y_pre: np.ndarray   # W X0 + B_h
    y_post: np.ndarray  # act_h(y_pre)
    x_pre: np.ndarray   # W' y_post + B_v
    x_post: np.ndarray  # act_v(x_pre)
    delta_x: np.ndarray  # x_post - X0


@dataclass
class TrainConfig:
    """Training knobs shared by gd_step/fd_step/train.

    `rate` is a positive scalar; for the fd scheme it may instead be a
    triple (rate_v, rate_h, rate_w) of per-element arrays with the shapes
    of visible_bias, hidden_bias and weights.
    """

    scheme: str = "gd"
    rate: object = 0.01
    energy_variant: str = "plain"
    epochs: int = 100
    seed: int = 42
    shuffle: bool = True

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme '{self.scheme}'; expected one of {SCHEMES}")
        if self.energy_variant not in ENERGY_VARIANTS:
            raise ConfigError(
                f"unknown energy variant '{self.energy_variant}'; "
                f"expected one of {ENERGY_VARIANTS}"
            )
        if self.epochs < 0:
            raise ConfigError("epochs must be non-negative")
        if isinstance(self.rate, (tuple, list)):
            if self.scheme != "fd":
                raise ConfigError("per-element rates are only defined for the fd scheme")
            if len(self.rate) != 3:
                raise ConfigError("per-element rate must be (rate_v, rate_h, rate_w)")
            rv, rh, rw = (np.asarray(r, dtype=np.float64) for r in self.rate)
            if not ((rv > 0).all() and (rh > 0).all() and (rw > 0).all()):
                raise ConfigError("learning rates must be strictly positive")
            self.rate = (rv, rh, rw)
        elif not self.rate > 0:
            raise ConfigError(f"learning rate must be strictly positive, got {self.rate}")


def init_params(n_visible, n_hidden, node_width=1, act_h="identity",
                act_v="identity", rng=None, seed=0):
    """Fresh parameters: W uniform in (-1/sqrt(m), 1/sqrt(m)), biases zero."""
    rng = rng if rng is not None else SplitMix64(seed)
    bound = 1.0 / np.sqrt(n_visible)
    w = rng.uniform(-bound, bound, n_hidden * n_visible).reshape(n_hidden, n_visible)
    return RbmParams(
        weights=w,
        hidden_bias=np.zeros((n_hidden, node_width)),
        visible_bias=np.zeros((n_visible, node_width)),
        act_h=act_h,
        act_v=act_v,
    )


def _check_sample(params, x0):
    if x0.shape != (params.n_visible, params.node_width):
        raise ValueError(
            f"sample shape {x0.shape} does not match model "
            f"({params.n_visible}, {params.node_width})"
        )


def project(params, x0):
    """Visible-to-hidden map: returns (y_pre, y_post)."""
    _check_sample(params, x0)
    y_pre = linalg.matmul(params.weights, x0) + params.hidden_bias
    return y_pre, params.act_h.apply(y_pre)


def reconstruct(params, y_post):
    """Hidden-to-visible map through the shared weights: (x_pre, x_post)."""
    if y_post.shape != (params.n_hidden, params.node_width):
        raise ValueError(
            f"hidden shape {y_post.shape} does not match model "
            f"({params.n_hidden}, {params.node_width})"
        )
    x_pre = linalg.matmul_at_b(params.weights, y_post) + params.visible_bias
    return x_pre, params.act_v.apply(x_pre)


def roundtrip(params, x0):
    """One full projection + reconstruction round."""
    y_pre, y_post = project(params, x0)
    x_pre, x_post = reconstruct(params, y_post)
    return RbmState(y_pre, y_post, x_pre, x_post, x_post - x0)


def _residual(params, state, x0, variant):
    if variant == "plain":
        return state.delta_x
    return state.x_post - params.act_v.apply(x0)


def energy(params, x0, variant="plain"):
    """0.5 * ||x_post - target||^2 with target X0 (plain) or act_v(X0)."""
    if variant not in ENERGY_VARIANTS:
        raise ConfigError(f"unknown energy variant '{variant}'")
    state = roundtrip(params, x0)
    return 0.5 * linalg.frob_sq(_residual(params, state, x0, variant))


def gradients(params, x0):
    """Exact gradients of the plain energy wrt (W, B_h, B_v).

    With s = act_v'(x_post) ⊙ (x_post - X0):
        dE/dB_v = s
        dE/dB_h = act_h'(y_post) ⊙ (W s)
        dE/dW   = y_post s' + [act_h'(y_post) ⊙ (W s)] X0'
    For d > 1 the outer products are matrix products summing over columns.
    """
    state = roundtrip(params, x0)
    g_w, g_bh, g_bv = _gradient_blocks(params, state, state.delta_x, x0)
    return g_w, g_bh, g_bv


def _gradient_blocks(params, state, residual, x0):
    s = linalg.hadamard(params.act_v.deriv_from_output(state.x_post), residual)
    ws = linalg.matmul(params.weights, s)
    h = linalg.hadamard(params.act_h.deriv_from_output(state.y_post), ws)
    g_w = linalg.matmul_a_bt(state.y_post, s) + linalg.matmul_a_bt(h, x0)
    return g_w, h, s


def _apply_update(params, new_w, new_bh, new_bv):
    # Guard before reconstructing the dataclass so a blow-up surfaces as a
    # DivergenceError naming the block, not a generic validation failure.
    for name, arr in (("weights", new_w), ("hidden_bias", new_bh),
                      ("visible_bias", new_bv)):
        if not np.isfinite(arr).all():
            raise DivergenceError(name)
    return replace(params, weights=new_w, hidden_bias=new_bh, visible_bias=new_bv)


def gd_step(params, x0, config):
    """One gradient-descent update; returns (new params, energy before)."""
    if config.scheme != "gd":
        raise ConfigError("gd_step requires config.scheme == 'gd'")
    state = roundtrip(params, x0)
    residual = _residual(params, state, x0, config.energy_variant)
    e_before = 0.5 * linalg.frob_sq(residual)
    g_w, g_bh, g_bv = _gradient_blocks(params, state, residual, x0)
    rate = config.rate
    out = _apply_update(
        params,
        params.weights - rate * g_w,
        params.hidden_bias - rate * g_bh,
        params.visible_bias - rate * g_bv,
    )
    return out, e_before


def fd_step(params, x0, config):
    """One finite-difference update from two rounds of the mapping.

    The second round projects the reconstruction: y1 = act_h(W x_post + B_h).
    Updates compensate the observed differences (x_post - X0), (y1 - y_post)
    and the product difference y1 x_post' - y_post X0', with no derivatives.
    """
    if config.scheme != "fd":
        raise ConfigError("fd_step requires config.scheme == 'fd'")
    state = roundtrip(params, x0)
    residual = _residual(params, state, x0, config.energy_variant)
    e_before = 0.5 * linalg.frob_sq(residual)
    _, y1_post = project(params, state.x_post)
    if isinstance(config.rate, tuple):
        rate_v, rate_h, rate_w = config.rate
    else:
        rate_v = rate_h = rate_w = config.rate
    dv = state.delta_x
    dh = y1_post - state.y_post
    dw = linalg.matmul_a_bt(y1_post, state.x_post) - linalg.matmul_a_bt(state.y_post, x0)
    out = _apply_update(
        params,
        params.weights - rate_w * dw,
        params.hidden_bias - rate_h * dh,
        params.visible_bias - rate_v * dv,
    )
    return out, e_before


def fdl_step(params, x0, rate):
    """The linear-case update formulas, written out without derivative terms.

    Only meaningful with identity activations, where it equals gd_step;
    kept as an independent code path for cross-checking.
    """
    state = roundtrip(params, x0)
    e_before = 0.5 * linalg.frob_sq(state.delta_x)
    d = state.delta_x
    wd = linalg.matmul(params.weights, d)
    g_w = linalg.matmul_a_bt(state.y_post, d) + linalg.matmul_a_bt(wd, x0)
    out = _apply_update(
        params,
        params.weights - rate * g_w,
        params.hidden_bias - rate * wd,
        params.visible_bias - rate * d,
    )
    return out, e_before


def train(params, dataset, config, callback=None):
    """Sequential per-sample training over `dataset` for config.epochs passes.

    Sample order is reshuffled each epoch from config.seed when
    config.shuffle is set.  Returns (params, per-epoch mean energy trace).
    A non-finite update aborts with the offending epoch and sample attached.
    """
    samples = [linalg.as_matrix(x, f"sample {i}") for i, x in enumerate(dataset)]
    if not samples:
        raise ValueError("empty dataset")
    for i, x in enumerate(samples):
        _check_sample(params, x)
    step = gd_step if config.scheme == "gd" else fd_step
    order_rng = SplitMix64(config.seed)
    trace = []
    for epoch in range(config.epochs):
        order = order_rng.permutation(len(samples)) if config.shuffle else range(len(samples))
        total = 0.0
        for idx in order:
            try:
                params, e_before = step(params, samples[idx], config)
            except DivergenceError as err:
                raise err.with_context(epoch, int(idx)) from None
            total += e_before
        trace.append(total / len(samples))
        if callback is not None:
            callback(epoch, trace[-1], params)
    return params, trace
