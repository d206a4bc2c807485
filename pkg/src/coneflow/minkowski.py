"""Flat indefinite inner product and the graph embedding.

Vectors in the ambient space are plain float arrays of length n+1; the
last component is the timelike direction.
"""

import numpy as np

from .errors import LightConeError


def minkowski_dot(a, b):
    """Indefinite inner product: spatial components count +, the last -."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a[:-1], b[:-1]) - a[-1] * b[-1])


def time_axis(n):
    """Unit vector along the timelike axis of R^{n+1}."""
    e = np.zeros(n + 1)
    e[n] = 1.0
    return e


def embed(x, u):
    """Map a chart point x (|x| < 1) at height u to the ambient point.

    The image P satisfies minkowski_dot(P, P) = -u^2; the ray through P
    meets the height-1 hyperplane at (x, 1).
    """
    x = np.asarray(x, dtype=float)
    r2 = float(np.dot(x, x))
    if r2 >= 1.0:
        raise LightConeError(f"chart point |x|={np.sqrt(r2):.6g} >= 1")
    if u <= 0.0:
        raise ValueError(f"height u={u:.6g} must be positive")
    s = u / np.sqrt(1.0 - r2)
    out = np.empty(x.size + 1)
    out[:-1] = s * x
    out[-1] = s
    return out
