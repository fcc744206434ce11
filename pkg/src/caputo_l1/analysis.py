"""Error constants, truncation and interpolation bounds, and order estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from caputo_l1.errors import DegenerateDifferenceError, DomainError
from caputo_l1.l1 import SampledFunction, UniformGrid, l1_apply_all
from caputo_l1.special_fn import gamma, riemann_zeta
from caputo_l1.testbed import HolderFunction

#: Differences below this are treated as zero by :func:`estimate_order`.
DEGENERATE_DIFFERENCE = 1e-14


@dataclass(frozen=True)
class ErrorConstantParams:
    alpha: float
    beta: float
    k: int
    n: int

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1): alpha = {self.alpha!r}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1]: beta = {self.beta!r}")
        if self.k not in (0, 1):
            raise ValueError(f"k must be 0 or 1: k = {self.k!r}")
        if self.n < 1:
            raise ValueError(f"n must be at least 1: n = {self.n!r}")
        if self.k == 0 and not self.beta > self.alpha:
            raise ValueError(
                f"k = 0 requires beta > alpha: beta = {self.beta}, alpha = {self.alpha}"
            )
        if not self.k + self.beta > self.alpha:
            raise ValueError("k + beta must exceed alpha")


@dataclass(frozen=True)
class OrderEstimate:
    alpha: float
    k: int
    beta: float
    tau_base: float
    estimated_order: float
    max_diffs: tuple[float, float]


def error_constant(p: ErrorConstantParams) -> float:
    """The constant ``C_{alpha,beta,k,n}`` of the L1 truncation bound."""
    a, b, n = p.alpha, p.beta, p.n
    g1 = gamma(1.0 - a)
    head = -math.expm1(-a * math.log(n))  # 1 - n^-alpha
    if p.k == 0:
        return (
            head / (2.0**b * g1)
            + a / (g1 * (b - a) * (1.0 + b - a))
            + a * gamma(1.0 + b) / gamma(2.0 + b - a)
        )
    return head / (4.0 * (b + 1.0) * g1) + a / gamma(3.0 - a)


def truncation_bound(p: ErrorConstantParams, tau: float, seminorm: float) -> float:
    """Upper bound ``C * seminorm * tau^(k + beta - alpha)`` on the L1 error at ``t_n``."""
    if not tau > 0.0:
        raise ValueError(f"tau must be positive: tau = {tau!r}")
    if seminorm < 0.0:
        raise ValueError(f"seminorm must be nonnegative: {seminorm!r}")
    return error_constant(p) * seminorm * tau ** (p.k + p.beta - p.alpha)


Weight = Union[float, Callable[[float], float]]


def interpolation_bound(
    k: int, beta: float, t: float, t_j: float, tau: float, weight: Weight
) -> float:
    """Pointwise bound on ``|I_tau y(t) - y(t)|`` for ``t`` in ``[t_j, t_j + tau)``.

    ``weight`` is the Hölder seminorm of ``y^(k)`` when ``beta > 0``. For
    ``beta = 0`` it is the modulus of continuity: a callable ``delta ->
    Lambda(delta)`` when ``k = 0`` (it is needed at two distances), or the
    single value ``Lambda_{y'}(tau)`` when ``k = 1``.
    """
    if k not in (0, 1):
        raise ValueError(f"k must be 0 or 1: k = {k!r}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1]: beta = {beta!r}")
    t_next = t_j + tau
    if not t_j <= t < t_next:
        raise ValueError(f"t = {t!r} is outside [{t_j!r}, {t_next!r})")
    left, right = t - t_j, t_next - t
    if k == 0 and beta == 0.0:
        if not callable(weight):
            raise TypeError("k = 0, beta = 0 needs a modulus of continuity callable")
        return (left * weight(right) + right * weight(left)) / tau
    w = float(weight(tau) if callable(weight) else weight)
    if k == 0:
        return (left * right**beta + right * left**beta) * w / tau
    if beta == 0.0:
        return left * right * w / tau
    return left * right * tau ** (beta - 1.0) * w / (beta + 1.0)


def caputo_wellposed_bound(alpha: float, beta: float, t: float, seminorm: float) -> float:
    """Bound on ``|D^alpha y(t)|`` for ``y`` in ``C^{0,beta}``, ``beta > alpha``."""
    if not beta > alpha:
        raise ValueError(f"beta must exceed alpha: beta = {beta}, alpha = {alpha}")
    if not t > 0.0:
        raise ValueError(f"t must be positive: t = {t!r}")
    g1 = gamma(1.0 - alpha)
    tp = t ** (beta - alpha)
    return seminorm * (tp / g1 + alpha / g1 * tp / (beta - alpha))


def asymptotic_optimal_constant(alpha: float) -> float:
    """Asymptotic best constant ``-zeta(alpha - 1) / Gamma(2 - alpha)`` for ``C^2`` data."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1): alpha = {alpha!r}")
    return -riemann_zeta(alpha - 1.0) / gamma(2.0 - alpha)


def estimate_order(
    f: HolderFunction, alpha: float, tau_base: float, T: float = 1.0
) -> OrderEstimate:
    """Empirical convergence order from three nested grids.

    With ``D_h`` the L1 values on the grid of step ``h``, returns

        log2( max |D_tau - D_tau/2| / max |D_tau/2 - D_tau/4| ),

    where each maximum runs over the nodes of the coarser grid in its pair.
    """
    n = int(round(T / tau_base))
    if n < 1 or abs(n * tau_base - T) > 1e-9 * T:
        raise ValueError(f"tau_base = {tau_base!r} does not divide T = {T!r}")
    sweeps = []
    for m in (1, 2, 4):
        grid = UniformGrid(tau_base / m, n * m)
        sweeps.append(l1_apply_all(SampledFunction.from_function(f, grid), alpha))
    coarse, mid, fine = sweeps
    # entry i is node i + 1; node 2i of the finer grid is entry 2i - 1
    d1 = float(np.max(np.abs(coarse - mid[1::2])))
    d2 = float(np.max(np.abs(mid - fine[1::2])))
    if d1 < DEGENERATE_DIFFERENCE or d2 < DEGENERATE_DIFFERENCE:
        raise DegenerateDifferenceError(
            f"grid differences too small to estimate an order: {d1:.3e}, {d2:.3e}"
        )
    return OrderEstimate(alpha, f.k, f.beta, tau_base, math.log2(d1 / d2), (d1, d2))
