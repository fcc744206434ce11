"""Select the compiled L1 core when it is built, else the NumPy fallback."""

from __future__ import annotations

try:
    from caputo_l1 import _l1_ext as kernel
except ImportError:  # pragma: no cover - depends on the build
    from caputo_l1 import _l1_py as kernel

    BACKEND = "python"
else:
    BACKEND = "cython"

history_sum = kernel.history_sum
history_sums = kernel.history_sums

__all__ = ["BACKEND", "history_sum", "history_sums"]
