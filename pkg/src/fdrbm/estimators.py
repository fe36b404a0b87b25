"""Scikit-learn style estimators wrapping the functional core.

Both estimators follow the fit/transform/get_params contract so they
compose with `sklearn.pipeline` and `sklearn.base.clone`.  `X` is either a
2-D array (n_samples, n_features) or, for matrix-valued nodes, a 3-D array
(n_samples, n_features, node_width).
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import rbm, stack as stack_mod
from .exceptions import ConfigError
from .metrics import mse
from .rng import SplitMix64

DEFAULT_RATES = {"gd": 0.01, "fd": 0.005}


def _as_sample_list(X, name="X"):
    a = np.asarray(X, dtype=np.float64)
    if a.ndim == 2:
        return [row.reshape(-1, 1) for row in a], 1
    if a.ndim == 3:
        return list(a), a.shape[2]
    raise ValueError(f"{name} must be 2-D or 3-D, got {a.ndim}-D")


def _restack(samples, width):
    out = np.stack(samples)
    return out[:, :, 0] if width == 1 else out


def resolve_rate(rate, scheme):
    return DEFAULT_RATES[scheme] if rate is None else rate


class SquaredErrorRBM(TransformerMixin, BaseEstimator):
    """Symmetric two-layer mapping fit by squared-error descent.

    Parameters
    ----------
    n_hidden : hidden layer size.
    act_hidden, act_visible : activation name or per-row name list.
    scheme : "gd" (exact gradients) or "fd" (finite differences).
    rate : learning rate; None picks the per-scheme default.
    energy : "plain" or "recirculation".
    epochs, seed, shuffle : training loop controls.
    """

    def __init__(self, n_hidden=16, act_hidden="identity", act_visible="identity",
                 scheme="gd", rate=None, energy="plain", epochs=100, seed=42,
                 shuffle=True):
        self.n_hidden = n_hidden
        self.act_hidden = act_hidden
        self.act_visible = act_visible
        self.scheme = scheme
        self.rate = rate
        self.energy = energy
        self.epochs = epochs
        self.seed = seed
        self.shuffle = shuffle

    def _config(self):
        return rbm.TrainConfig(
            scheme=self.scheme,
            rate=resolve_rate(self.rate, self.scheme),
            energy_variant=self.energy,
            epochs=self.epochs,
            seed=self.seed,
            shuffle=self.shuffle,
        )

    def fit(self, X, y=None):
        samples, width = _as_sample_list(X)
        if not samples:
            raise ValueError("cannot fit on an empty dataset")
        m = samples[0].shape[0]
        params = rbm.init_params(
            m, self.n_hidden, node_width=width,
            act_h=self.act_hidden, act_v=self.act_visible,
            rng=SplitMix64(self.seed),
        )
        self.params_, self.training_trace_ = rbm.train(params, samples, self._config())
        self.n_features_in_ = m
        self.node_width_ = width
        return self

    def _require_fitted(self):
        if not hasattr(self, "params_"):
            raise NotFittedError("this estimator is not fitted yet; call fit first")

    def transform(self, X):
        """Hidden representation of each sample."""
        self._require_fitted()
        samples, width = _as_sample_list(X)
        return _restack([rbm.project(self.params_, x)[1] for x in samples], width)

    def inverse_transform(self, H):
        """Reconstruction from hidden representations."""
        self._require_fitted()
        codes, width = _as_sample_list(H, "H")
        return _restack([rbm.reconstruct(self.params_, h)[1] for h in codes], width)

    def reconstruct(self, X):
        """Full roundtrip act_v(W' act_h(W X + B_h) + B_v) per sample."""
        self._require_fitted()
        samples, width = _as_sample_list(X)
        return _restack(
            [rbm.roundtrip(self.params_, x).x_post for x in samples], width
        )

    def reconstruction_mse(self, X):
        samples, _ = _as_sample_list(X)
        recon = self.reconstruct(X)
        flat, _ = _as_sample_list(recon)
        return float(np.mean([mse(a, b) for a, b in zip(flat, samples)]))

    def score(self, X, y=None):
        """Negative mean reconstruction MSE (larger is better)."""
        return -self.reconstruction_mse(X)


class GreedyRBMStack(TransformerMixin, BaseEstimator):
    """Stack of SquaredErrorRBM layers trained greedily bottom-up.

    `layer_sizes` lists the hidden sizes, e.g. (784, 196, 49) on 784-wide
    input builds 784->784->196->49.  The visible activation applies to the
    first layer only; all hidden layers share `act_hidden`.
    """

    def __init__(self, layer_sizes=(16,), act_hidden="identity",
                 act_visible="identity", scheme="gd", rate=None, energy="plain",
                 epochs=100, seed=42, shuffle=True):
        self.layer_sizes = layer_sizes
        self.act_hidden = act_hidden
        self.act_visible = act_visible
        self.scheme = scheme
        self.rate = rate
        self.energy = energy
        self.epochs = epochs
        self.seed = seed
        self.shuffle = shuffle

    def fit(self, X, y=None):
        samples, width = _as_sample_list(X)
        if not samples:
            raise ValueError("cannot fit on an empty dataset")
        if not self.layer_sizes:
            raise ConfigError("layer_sizes must name at least one hidden size")
        m = samples[0].shape[0]
        _, specs = stack_mod.specs_from_sizes(
            (m, *self.layer_sizes), act_h=self.act_hidden, act_v=self.act_visible
        )
        config = rbm.TrainConfig(
            scheme=self.scheme,
            rate=resolve_rate(self.rate, self.scheme),
            energy_variant=self.energy,
            epochs=self.epochs,
            seed=self.seed,
            shuffle=self.shuffle,
        )
        self.stack_, self.training_traces_ = stack_mod.train_greedy(
            m, specs, samples, config, node_width=width
        )
        self.n_features_in_ = m
        self.node_width_ = width
        return self

    def _require_fitted(self):
        if not hasattr(self, "stack_"):
            raise NotFittedError("this estimator is not fitted yet; call fit first")

    def transform(self, X):
        self._require_fitted()
        samples, width = _as_sample_list(X)
        return _restack([stack_mod.encode(self.stack_, x) for x in samples], width)

    def inverse_transform(self, H):
        self._require_fitted()
        codes, width = _as_sample_list(H, "H")
        return _restack([stack_mod.decode(self.stack_, h) for h in codes], width)

    def reconstruct(self, X):
        self._require_fitted()
        samples, width = _as_sample_list(X)
        return _restack(
            [stack_mod.decode(self.stack_, stack_mod.encode(self.stack_, x)) for x in samples],
            width,
        )

    def reconstruction_mse(self, X):
        samples, _ = _as_sample_list(X)
        flat, _ = _as_sample_list(self.reconstruct(X))
        return float(np.mean([mse(a, b) for a, b in zip(flat, samples)]))

    def score(self, X, y=None):
        return -self.reconstruction_mse(X)
