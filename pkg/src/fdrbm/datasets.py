"""Synthetic collinear sequence generation and windowing.

Twelve sequences of length 2000: six independent sources drawn from fixed
distributions, six exact linear mixtures of them.  Training samples are
sliding windows (length 50, stride 20 -> 98 windows) arranged under one of
two layouts:

* "node-rows":    each sample is 12 x 50 -- one row per sequence, the window
                  as that node's vector value (collinearity analysis).
* "node-columns": each sample is 50 x 12 -- one column per sequence, so a
                  single weight matrix is shared across the sequences
                  (feature extraction).
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError
from .rng import SplitMix64, sample

SEQUENCE_COUNT = 12
SOURCE_COUNT = 6
SEQUENCE_LENGTH = 2000

SOURCE_DISTS = (
    ("poisson", 3.0),
    ("binomial", 10, 0.6),
    ("laplace", -1.0, 1.0),
    ("normal", 0.5, 1.0),
    ("exponential", 2.0),
    ("uniform", -2.0, 2.0),
)

# Mixture rows 6..11 as (target, ((source, coefficient), ...)).
MIXING = (
    (6, ((0, 0.25), (1, 0.75), (2, 0.50))),
    (7, ((1, 0.30), (2, 0.70), (3, 0.50))),
    (8, ((2, 0.45), (3, 0.55), (4, 0.35))),
    (9, ((3, 0.60), (4, 0.40), (5, 0.20))),
    (10, ((4, 0.50), (5, 0.35), (0, 0.45))),
    (11, ((5, 0.40), (0, 0.10), (1, 0.60))),
)

WINDOW_LAYOUTS = ("node-rows", "node-columns")


@dataclass
class SequenceSet:
    sequences: np.ndarray  # (12, length)
    source_count: int = SOURCE_COUNT
    mixing: tuple = MIXING

    @property
    def length(self):
        return self.sequences.shape[1]


@dataclass
class WindowedDataset:
    samples: list          # list of (m, d) arrays
    window_len: int
    stride: int
    layout: str


def generate_sequences(seed, length=SEQUENCE_LENGTH):
    """The 12-sequence corpus: 6 sources + 6 exact mixtures."""
    rng = SplitMix64(seed)
    rows = np.empty((SEQUENCE_COUNT, length))
    for i, spec in enumerate(SOURCE_DISTS):
        rows[i] = sample(rng, spec, length)
    for target, terms in MIXING:
        rows[target] = sum(coeff * rows[source] for source, coeff in terms)
    return SequenceSet(rows)


def standardize_rows(a):
    """Shift/scale each row to zero mean, unit variance.

    Returns (standardized, means, stds); rows with zero spread are left
    centered but unscaled.
    """
    a = np.asarray(a, dtype=np.float64)
    means = a.mean(axis=1, keepdims=True)
    stds = a.std(axis=1, keepdims=True)
    safe = np.where(stds > 0, stds, 1.0)
    return (a - means) / safe, means.ravel(), stds.ravel()


def window(sequences, window_len=50, stride=20, layout="node-rows"):
    """Cut each full-length window position into one training sample."""
    if layout not in WINDOW_LAYOUTS:
        raise ConfigError(f"unknown window layout '{layout}'; expected {WINDOW_LAYOUTS}")
    seqs = np.asarray(sequences, dtype=np.float64)
    length = seqs.shape[1]
    if not (0 < window_len <= length):
        raise ConfigError(f"window length {window_len} not in (0, {length}]")
    if stride < 1:
        raise ConfigError(f"stride must be >= 1, got {stride}")
    samples = []
    for start in range(0, length - window_len + 1, stride):
        block = seqs[:, start:start + window_len]
        samples.append(block.copy() if layout == "node-rows" else block.T.copy())
    return WindowedDataset(samples, window_len, stride, layout)
