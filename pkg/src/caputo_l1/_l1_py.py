"""Pure-Python/NumPy L1 history sums, used when the compiled core is absent.

Each sum is rounded once via :func:`math.fsum`, so every node is computed
identically whether it is requested alone or as part of a full sweep.
"""

from __future__ import annotations

import math

import numpy as np


def history_sum(b: np.ndarray, d: np.ndarray, n: int) -> float:
    """Return ``sum_{j<n} b[j] * d[n-1-j]``."""
    return math.fsum(b[:n] * d[n - 1 :: -1] if n > 0 else ())


def history_sums(b: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Return ``history_sum(b, d, n)`` for ``n = 1..len(d)``."""
    out = np.empty(len(d))
    for n in range(1, len(d) + 1):
        out[n - 1] = math.fsum(b[:n] * d[n - 1 :: -1])
    return out
