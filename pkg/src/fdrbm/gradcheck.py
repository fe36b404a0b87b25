"""Central-difference verification of the analytic gradients.

The numeric side perturbs one parameter at a time and differences the
energy; it never touches the analytic formulas, so the two routes are
independent.  Relu rows are nudged away from activation kinks before
checking, since the derivative is not defined there; the number of nudged
entries is reported per cell.
"""

from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from . import rbm
from .rng import SplitMix64

DEFAULT_SHAPES = ((7, 5, 1), (6, 4, 3))
DEFAULT_ACTIVATIONS = ("identity", "sigmoid", "relu", "softsign")
KINK_MARGIN = 1e-2


def numeric_gradients(params, x0, step=1e-5, variant="plain"):
    """Gradients of the energy by central differences, one entry at a time."""

    def diff_block(name):
        base = getattr(params, name)
        grad = np.empty_like(base)
        for idx in np.ndindex(base.shape):
            bumped = base.copy()
            bumped[idx] = base[idx] + step
            e_plus = rbm.energy(replace(params, **{name: bumped}), x0, variant)
            bumped[idx] = base[idx] - step
            e_minus = rbm.energy(replace(params, **{name: bumped}), x0, variant)
            grad[idx] = (e_plus - e_minus) / (2.0 * step)
        return grad

    return diff_block("weights"), diff_block("hidden_bias"), diff_block("visible_bias")


def relative_error(analytic, numeric):
    """Norm-wise relative disagreement of one gradient block."""
    num = np.linalg.norm(analytic - numeric)
    den = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-300)
    return float(num / den)


def nudge_off_kinks(params, x0, margin=KINK_MARGIN):
    """Push relu pre-activations at least `margin` away from zero.

    Bias entries whose row is relu and whose pre-activation is within the
    margin get bumped upward; repeated until stable (visible pre-activations
    depend on the hidden ones).  Returns (params, number of nudged entries).
    """
    repairs = 0
    for _ in range(8):
        state = rbm.roundtrip(params, x0)
        moved = False
        for bias_name, pre, act in (
            ("hidden_bias", state.y_pre, params.act_h),
            ("visible_bias", state.x_pre, params.act_v),
        ):
            relu_rows = np.array([k == "relu" for k in act.kinds])
            if not relu_rows.any():
                continue
            close = (np.abs(pre) < margin) & relu_rows[:, None]
            if close.any():
                bias = getattr(params, bias_name).copy()
                bias[close] += 2.0 * margin
                params = replace(params, **{bias_name: bias})
                repairs += int(close.sum())
                moved = True
        if not moved:
            return params, repairs
    return params, repairs


@dataclass
class GradcheckCell:
    act_h: str
    act_v: str
    shape: tuple
    max_error: float
    repairs: int

    @property
    def label(self):
        m, n, d = self.shape
        return f"h={self.act_h:<8} v={self.act_v:<8} (m={m}, n={n}, d={d})"


def check_cell(act_h, act_v, shape, seeds, step=1e-5, variant="plain"):
    """Worst relative error over `seeds` random instances of one cell."""
    m, n, d = shape
    worst = 0.0
    repairs = 0
    for seed in seeds:
        rng = SplitMix64(seed)
        params = rbm.init_params(m, n, node_width=d, act_h=act_h, act_v=act_v, rng=rng)
        params = replace(
            params,
            hidden_bias=rng.normal(0.0, 0.3, n * d).reshape(n, d),
            visible_bias=rng.normal(0.0, 0.3, m * d).reshape(m, d),
        )
        x0 = rng.normal(0.0, 1.0, m * d).reshape(m, d)
        params, fixed = nudge_off_kinks(params, x0)
        repairs += fixed
        analytic = rbm.gradients(params, x0)
        numeric = numeric_gradients(params, x0, step=step, variant=variant)
        worst = max(worst, *(relative_error(a, g) for a, g in zip(analytic, numeric)))
    return GradcheckCell(act_h, act_v, shape, worst, repairs)


def run_gradcheck(shapes=DEFAULT_SHAPES, activations=DEFAULT_ACTIVATIONS,
                  n_seeds=20, step=1e-5, seed0=1000):
    """The full activation x activation x shape matrix of gradient checks."""
    seeds = [seed0 + i for i in range(n_seeds)]
    return [
        check_cell(act_h, act_v, shape, seeds, step=step)
        for act_h, act_v, shape in product(activations, activations, shapes)
    ]
