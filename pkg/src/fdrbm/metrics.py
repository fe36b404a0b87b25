"""Error metrics for reconstruction quality charts."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg


def mse(a, b):
    """Mean squared entrywise difference."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    linalg.require_same_shape(a, b, "mse")
    d = a - b
    return float(np.mean(d * d))


def log_adjusted(value):
    """Monotone chart transform -1/ln(mse) for errors in (0, 1).

    Extensions outside the domain are by convention, not formula:
    0 maps to 0.0 (the continuous limit) and exactly 1 maps to nan;
    values above 1 return the literal formula result, which is negative --
    a negative or nan output therefore flags an out-of-domain error.
    """
    if value < 0:
        raise ValueError(f"mse must be non-negative, got {value}")
    if value == 0.0:
        return 0.0
    if value == 1.0:
        return math.nan
    return -1.0 / math.log(value)


@dataclass
class ErrorCurve:
    """Reconstruction error as a function of one swept integer parameter."""

    param_name: str = "param"
    points: list = field(default_factory=list)  # (param, mse, log_adjusted)

    def add(self, param, mse_value):
        self.points.append((int(param), float(mse_value), log_adjusted(mse_value)))

    def rows(self):
        return [(p, m, la) for p, m, la in self.points]

    def header(self):
        return (self.param_name, "mse", "log_adjusted")

    def mse_at(self, param):
        for p, m, _ in self.points:
            if p == param:
                return m
        raise KeyError(f"no curve point at {self.param_name}={param}")
