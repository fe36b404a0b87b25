"""Dense matrix helpers and input validation.

All data in this package travels as 2-D float64 numpy arrays ("matrices").
The helpers here validate shape and finiteness at module boundaries; the
arithmetic itself is delegated to numpy.
"""

import numpy as np


def as_matrix(a, name="matrix"):
    """Validate and return `a` as a 2-D float64 array with finite entries."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {m.ndim}-D")
    if m.size and not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def require_finite(a, context):
    """Raise if `a` holds NaN or infinity."""
    if not np.isfinite(a).all():
        raise ValueError(f"non-finite result in {context}")
    return a


def require_same_shape(a, b, context):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch in {context}: {a.shape} vs {b.shape}")


def matmul(a, b):
    """Matrix product A·B."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch in matmul: {a.shape} x {b.shape}")
    return require_finite(a @ b, "matmul")


def matmul_at_b(a, b):
    """Aᵀ·B without materializing the transpose."""
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch in matmul_at_b: {a.shape} x {b.shape}")
    return require_finite(a.T @ b, "matmul_at_b")


def matmul_a_bt(a, b):
    """A·Bᵀ; for column vectors this is the outer product a bᵀ."""
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch in matmul_a_bt: {a.shape} x {b.shape}")
    return require_finite(a @ b.T, "matmul_a_bt")


def hadamard(a, b):
    """Elementwise product."""
    require_same_shape(a, b, "hadamard")
    return a * b


def frob_sq(a):
    """Squared Frobenius norm: the sum of squared entries."""
    a = np.asarray(a)
    return float(np.einsum("ij,ij->", a, a)) if a.ndim == 2 else float(np.sum(a * a))
