"""Experiment drivers behind the CLI subcommands.

Kept separate from the argument parsing so the test suite can run the same
sweeps in-process.
"""

import numpy as np

from . import rbm
from .datasets import generate_sequences, standardize_rows, window
from .exceptions import DivergenceError
from .metrics import ErrorCurve, mse
from .rng import SplitMix64

COLLINEARITY_NODE_COUNTS = tuple(range(1, 13))
FEATURE_DIMS = (25, 30, 35, 40, 45, 50, 55, 60)

# Scan defaults; chosen so 100 epochs converge on the standardized corpus
# without overstepping (the windows carry ~600 entries per sample).
COLLINEARITY_RATE = 0.002
FEATURE_RATE = 0.002


def dataset_mse(params, samples):
    """Mean reconstruction MSE of `params` over a sample list."""
    return float(np.mean([
        mse(rbm.roundtrip(params, x).x_post, x) for x in samples
    ]))


def _train_one(samples, n_visible, n_hidden, node_width, config):
    params = rbm.init_params(
        n_visible, n_hidden, node_width=node_width,
        rng=SplitMix64(config.seed),
    )
    params, trace = rbm.train(params, samples, config)
    return params, trace


def _windowed_sequences(seed, standardize, layout):
    seqs = generate_sequences(seed).sequences
    if standardize:
        seqs, _, _ = standardize_rows(seqs)
    return window(seqs, layout=layout).samples


def collinearity_curve(seed=42, epochs=100, rate=COLLINEARITY_RATE, scheme="gd",
                       standardize=True, node_counts=COLLINEARITY_NODE_COUNTS,
                       on_result=None):
    """Reconstruction error of the 12-node windowed corpus vs hidden size.

    Each hidden size trains from its own derived seed.  A diverging run is
    recorded as a NaN row instead of aborting the sweep.  Returns
    (ErrorCurve, list of diverged node counts).
    """
    samples = _windowed_sequences(seed, standardize, "node-rows")
    curve = ErrorCurve("hidden_nodes")
    diverged = []
    for n_hidden in node_counts:
        config = rbm.TrainConfig(scheme=scheme, rate=rate, epochs=epochs,
                                 seed=seed + n_hidden)
        try:
            params, _ = _train_one(samples, 12, n_hidden, 50, config)
            value = dataset_mse(params, samples)
        except DivergenceError:
            diverged.append(n_hidden)
            value = float("nan")
        curve.add(n_hidden, value)
        if on_result is not None:
            on_result(n_hidden, value)
    return curve, diverged


def feature_curve(seed=42, epochs=100, rate=FEATURE_RATE, scheme="gd",
                  standardize=True, dims=FEATURE_DIMS, on_result=None):
    """Reconstruction error vs per-node feature dimension, shared weights."""
    samples = _windowed_sequences(seed, standardize, "node-columns")
    curve = ErrorCurve("feature_dim")
    diverged = []
    for dim in dims:
        config = rbm.TrainConfig(scheme=scheme, rate=rate, epochs=epochs,
                                 seed=seed + dim)
        try:
            params, _ = _train_one(samples, 50, dim, 12, config)
            value = dataset_mse(params, samples)
        except DivergenceError:
            diverged.append(dim)
            value = float("nan")
        curve.add(dim, value)
        if on_result is not None:
            on_result(dim, value)
    return curve, diverged
