"""Elementwise activations with derivatives expressed in the output value.

Each layer row (node) may carry its own activation.  Derivatives are
evaluated from the activation *output*, for which all four supported kinds
have a closed form:

    identity: f(x) = x            f' = 1
    sigmoid:  f(x) = 1/(1+e^-x)   f' = y(1-y)
    relu:     f(x) = max(x, 0)    f' = 1 if y > 0 else 0
    softsign: f(x) = x/(1+|x|)    f' = (1-|y|)^2

The relu derivative at an output of exactly 0 is defined as 0 (subgradient
choice), so update rules are reproducible at the kink.
"""

import numpy as np

from .exceptions import ConfigError

ACTIVATION_NAMES = ("identity", "sigmoid", "relu", "softsign")

# Stable codes used by the DMFD serialization format.
ACTIVATION_CODES = {"identity": 0, "sigmoid": 1, "relu": 2, "softsign": 3}
ACTIVATION_FROM_CODE = {v: k for k, v in ACTIVATION_CODES.items()}


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


_FORWARD = {
    "identity": lambda x: x.copy(),
    "sigmoid": _sigmoid,
    "relu": lambda x: np.maximum(x, 0.0),
    "softsign": lambda x: x / (1.0 + np.abs(x)),
}

_DERIV_FROM_OUTPUT = {
    "identity": lambda y: np.ones_like(y),
    "sigmoid": lambda y: y * (1.0 - y),
    "relu": lambda y: (y > 0.0).astype(np.float64),
    "softsign": lambda y: (1.0 - np.abs(y)) ** 2,
}


def check_activation_name(name):
    if name not in ACTIVATION_NAMES:
        raise ConfigError(
            f"unknown activation '{name}'; expected one of {ACTIVATION_NAMES}"
        )
    return name


class ActivationMap:
    """Per-row activation assignment for one layer.

    Built from a single name (broadcast to every row) or a sequence of names,
    one per row.  The row count is fixed at construction and checked against
    every matrix the map is applied to.
    """

    def __init__(self, kinds, rows=None):
        if isinstance(kinds, str):
            check_activation_name(kinds)
            if rows is None:
                raise ConfigError("rows is required when a single kind is given")
            self.kinds = (kinds,) * int(rows)
        else:
            self.kinds = tuple(check_activation_name(k) for k in kinds)
            if rows is not None and rows != len(self.kinds):
                raise ConfigError(
                    f"activation list has {len(self.kinds)} entries for {rows} rows"
                )
        if not self.kinds:
            raise ConfigError("activation map must cover at least one row")

    @property
    def rows(self):
        return len(self.kinds)

    @property
    def uniform_kind(self):
        """The single kind shared by all rows, or None if rows differ."""
        first = self.kinds[0]
        return first if all(k == first for k in self.kinds) else None

    def _check(self, a):
        if a.shape[0] != self.rows:
            raise ValueError(
                f"activation map covers {self.rows} rows, matrix has {a.shape[0]}"
            )

    def _per_row(self, table, a):
        out = np.empty_like(a)
        for kind in set(self.kinds):
            mask = np.array([k == kind for k in self.kinds])
            out[mask] = table[kind](a[mask])
        return out

    def apply(self, pre):
        """Activate `pre` row by row."""
        self._check(pre)
        kind = self.uniform_kind
        if kind is not None:
            return _FORWARD[kind](pre)
        return self._per_row(_FORWARD, pre)

    def deriv_from_output(self, out):
        """Derivative of each row's activation, evaluated from its output."""
        self._check(out)
        kind = self.uniform_kind
        if kind is not None:
            return _DERIV_FROM_OUTPUT[kind](out)
        return self._per_row(_DERIV_FROM_OUTPUT, out)

    def __eq__(self, other):
        return isinstance(other, ActivationMap) and self.kinds == other.kinds

    def __repr__(self):
        kind = self.uniform_kind
        if kind is not None:
            return f"ActivationMap({kind!r}, rows={self.rows})"
        return f"ActivationMap({list(self.kinds)!r})"


def as_activation_map(spec, rows):
    """Coerce a name, name list, or ActivationMap to a map with `rows` rows."""
    if isinstance(spec, ActivationMap):
        if spec.rows != rows:
            raise ConfigError(f"activation map covers {spec.rows} rows, need {rows}")
        return spec
    return ActivationMap(spec, rows=rows)
