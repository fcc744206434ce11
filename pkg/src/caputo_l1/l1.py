"""The L1 discretization of the Caputo derivative on a uniform grid."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from caputo_l1 import _backend
from caputo_l1.special_fn import gamma

#: Default cap on the node count accepted by :func:`l1_apply_all`.
MAX_NODES = 2**14


@dataclass(frozen=True)
class UniformGrid:
    """Nodes ``t_n = n * tau`` for ``n = 0, ..., n_max``."""

    tau: float
    n_max: int

    def __post_init__(self) -> None:
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValueError(f"step must be positive and finite: tau = {self.tau!r}")
        if self.n_max < 1:
            raise ValueError(f"grid needs at least one step: n_max = {self.n_max!r}")

    @classmethod
    def from_horizon(cls, T: float, n_max: int) -> UniformGrid:
        return cls(T / n_max, n_max)

    @property
    def T(self) -> float:
        return self.n_max * self.tau

    def node(self, n: int) -> float:
        return n * self.tau

    def nodes(self) -> np.ndarray:
        return np.arange(self.n_max + 1) * self.tau


@dataclass(frozen=True)
class L1Weights:
    """Weights ``b_i = (i + 1)^(1 - alpha) - i^(1 - alpha)``."""

    alpha: float
    b: np.ndarray

    def __len__(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class SampledFunction:
    """Function values ``values[n] = y(t_n)`` on a :class:`UniformGrid`."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.n_max + 1,):
            raise ValueError(
                f"expected {self.grid.n_max + 1} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("samples must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(
        cls, f: Callable[[np.ndarray], np.ndarray], grid: UniformGrid
    ) -> SampledFunction:
        return cls(grid, np.asarray(f(grid.nodes()), dtype=np.float64))


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1): alpha = {alpha!r}")


def weights(alpha: float, count: int) -> L1Weights:
    """Closed-form L1 weights ``b_0, ..., b_{count-1}`` for order ``alpha``."""
    _check_alpha(alpha)
    if count < 1:
        raise ValueError(f"count must be at least 1: count = {count!r}")
    i = np.arange(count, dtype=np.float64)
    p = 1.0 - alpha
    b = (i + 1.0) ** p - i**p
    b.flags.writeable = False
    return L1Weights(alpha, b)


def _scale(alpha: float, tau: float) -> float:
    return tau**-alpha / gamma(2.0 - alpha)


def l1_apply(samples: SampledFunction, alpha: float, n: int) -> float:
    r"""L1 approximation of the Caputo derivative at the node ``t_n``.

    Evaluated in difference form,

    .. math::

        \delta^\alpha_\tau y(t_n) = \frac{\tau^{-\alpha}}{\Gamma(2-\alpha)}
            \sum_{j=0}^{n-1} b_j \left(y(t_{n-j}) - y(t_{n-j-1})\right).
    """
    _check_alpha(alpha)
    grid = samples.grid
    if not 1 <= n <= grid.n_max:
        raise ValueError(f"node index must lie in [1, {grid.n_max}]: n = {n!r}")
    b = weights(alpha, n).b
    d = np.diff(samples.values[: n + 1])
    return _scale(alpha, grid.tau) * _backend.history_sum(b, d, n)


def l1_apply_all(
    samples: SampledFunction, alpha: float, *, max_nodes: int = MAX_NODES
) -> np.ndarray:
    """L1 approximation at every node ``t_1, ..., t_N``; entry ``n - 1`` is node ``n``.

    Agrees bit for bit with :func:`l1_apply` called node by node. The cost is
    quadratic in the node count, which is capped at ``max_nodes``.
    """
    _check_alpha(alpha)
    grid = samples.grid
    if grid.n_max > max_nodes:
        raise ValueError(
            f"grid has {grid.n_max} steps, more than max_nodes = {max_nodes}"
        )
    b = weights(alpha, grid.n_max).b
    d = np.diff(samples.values)
    return _scale(alpha, grid.tau) * _backend.history_sums(b, d)


def interpolate(samples: SampledFunction, t):
    """Piecewise-linear interpolant of the samples, evaluated at ``t``.

    Accepts a scalar or an array. Interior nodes are assigned to the interval
    on their right; ``t = T`` uses the last interval.
    """
    grid = samples.grid
    ts = np.asarray(t, dtype=np.float64)
    if np.any(ts < 0.0) or np.any(ts > grid.T) or np.any(np.isnan(ts)):
        raise ValueError(f"interpolation points must lie in [0, {grid.T}]")
    y = samples.values
    j = np.minimum(np.floor(ts / grid.tau).astype(np.int64), grid.n_max - 1)
    left = j * grid.tau
    right = (j + 1) * grid.tau
    result = ((ts - left) * y[j + 1] + (right - ts) * y[j]) / grid.tau
    # nodes reproduce the samples exactly
    on_node = ts == left
    result = np.where(on_node, y[j], result)
    on_right = ts == right
    result = np.where(on_right, y[np.minimum(j + 1, grid.n_max)], result)
    return float(result) if result.ndim == 0 else result
