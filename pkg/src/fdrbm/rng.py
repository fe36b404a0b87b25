"""Deterministic, platform-independent random number generation.

The generator is a counter-based SplitMix64.  Output i (counting from 1) is

    z = (seed + i * 0x9E3779B97F4A7C15) mod 2^64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    out = z ^ (z >> 31)

which matches the classic SplitMix64 stream for the same seed.  Because each
output is a pure function of (seed, i), blocks of outputs are produced with
vectorized uint64 arithmetic; the stream is bit-identical across platforms.

Uniform doubles use the top 53 bits: u = (out >> 11) * 2^-53 in [0, 1).
Where a value of exactly 0 would be fatal (Laplace inverse CDF), the
centered variant ((out >> 11) + 0.5) * 2^-53 in (0, 1) is used instead.

Samplers, each consuming a fixed, documented number of raw outputs per
variate (Poisson excepted, which consumes until Knuth's product test stops):

* uniform(lo, hi):    one output, affine map of u.
* normal(mu, sigma):  Box-Muller pairs; an odd count discards the spare.
* exponential(scale): inverse CDF, -scale * ln(1 - u).
* laplace(mu, b):     inverse CDF on the centered uniform.
* poisson(lam):       Knuth's product-of-uniforms method.
* binomial(n, p):     n Bernoulli trials (u < p).
"""

import numpy as np

from .exceptions import ConfigError

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

DISTRIBUTIONS = ("poisson", "binomial", "laplace", "normal", "exponential", "uniform")


class SplitMix64:
    """Seeded counter-based SplitMix64 stream."""

    def __init__(self, seed):
        self.seed = int(seed) & _MASK64
        self.counter = 0

    def next_u64(self):
        """Next raw 64-bit output as a Python int."""
        self.counter += 1
        z = (self.seed + self.counter * _GAMMA) & _MASK64
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def u64_block(self, count):
        """Next `count` raw outputs as a uint64 array (vectorized)."""
        if count < 0:
            raise ConfigError("sample count must be non-negative")
        start = self.counter + 1
        self.counter += count
        idx = np.arange(start, start + count, dtype=np.uint64)
        z = np.uint64(self.seed) + idx * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def uniform01(self, count):
        """`count` doubles in [0, 1)."""
        return (self.u64_block(count) >> np.uint64(11)) * 2.0**-53

    def uniform01_open(self, count):
        """`count` doubles in the open interval (0, 1)."""
        return ((self.u64_block(count) >> np.uint64(11)) + np.float64(0.5)) * 2.0**-53

    def uniform(self, lo, hi, count):
        if not (hi > lo):
            raise ConfigError(f"uniform requires hi > lo, got [{lo}, {hi}]")
        return lo + self.uniform01(count) * (hi - lo)

    def normal(self, mu, sigma, count):
        if sigma <= 0:
            raise ConfigError(f"normal requires sigma > 0, got {sigma}")
        pairs = (count + 1) // 2
        u1 = self.uniform01(pairs)
        u2 = self.uniform01(pairs)
        r = np.sqrt(-2.0 * np.log1p(-u1))
        theta = 2.0 * np.pi * u2
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        return mu + sigma * z[:count]

    def exponential(self, scale, count):
        if scale <= 0:
            raise ConfigError(f"exponential requires scale > 0, got {scale}")
        return -scale * np.log1p(-self.uniform01(count))

    def laplace(self, mu, b, count):
        if b <= 0:
            raise ConfigError(f"laplace requires scale > 0, got {b}")
        u = self.uniform01_open(count) - 0.5
        return mu - b * np.sign(u) * np.log1p(-2.0 * np.abs(u))

    def poisson(self, lam, count):
        if lam <= 0:
            raise ConfigError(f"poisson requires lambda > 0, got {lam}")
        limit = np.exp(-lam)
        out = np.empty(count)
        # Buffered scalar loop: each variate consumes its own uniforms in
        # sequence, so the stream does not depend on how calls are batched.
        buf = self.uniform01(4096)
        pos = 0
        for i in range(count):
            k = 0
            p = 1.0
            while True:
                if pos == len(buf):
                    buf = self.uniform01(4096)
                    pos = 0
                p *= buf[pos]
                pos += 1
                if p <= limit:
                    break
                k += 1
            out[i] = k
        # Rewind the counter past the unused tail of the buffer.
        self.counter -= len(buf) - pos
        return out

    def binomial(self, n, p, count):
        if n < 0 or int(n) != n:
            raise ConfigError(f"binomial requires integer n >= 0, got {n}")
        if not (0.0 <= p <= 1.0):
            raise ConfigError(f"binomial requires 0 <= p <= 1, got {p}")
        n = int(n)
        if n == 0:
            self.u64_block(0)
            return np.zeros(count)
        u = self.uniform01(n * count).reshape(count, n)
        return (u < p).sum(axis=1).astype(np.float64)

    def permutation(self, count):
        """Deterministic permutation of range(count) via key sorting."""
        return np.argsort(self.u64_block(count), kind="stable")


def sample(rng, spec, count):
    """Draw `count` values from the distribution described by `spec`.

    `spec` is a (name, *params) tuple using the names in DISTRIBUTIONS,
    e.g. ("poisson", 3.0) or ("uniform", -2.0, 2.0).
    """
    name, *params = spec
    if name not in DISTRIBUTIONS:
        raise ConfigError(f"unknown distribution '{name}'")
    return getattr(rng, name)(*params, count)
