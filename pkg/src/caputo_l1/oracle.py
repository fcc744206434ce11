"""Reference values of the Caputo derivative by quadrature.

The derivative-free representation

.. math::

    D^\\alpha y(t) = \\frac{y(t) - y(0)}{\\Gamma(1-\\alpha) t^\\alpha}
        + \\frac{\\alpha}{\\Gamma(1-\\alpha)}
          \\int_0^t \\frac{y(t) - y(s)}{(t - s)^{1+\\alpha}} \\, ds

only needs ``y`` to be Hölder continuous. The integral is split into

* a terminal piece ``s ∈ [t - eps, t]`` handled by a Gauss-Jacobi rule whose
  weight carries the power-law singularity at ``s = t``;
* the remainder, covered by Gauss-Legendre panels that are graded
  geometrically towards kinks of ``y`` and towards the terminal piece, and
  refined by bisection until the panel error estimates meet the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from caputo_l1.errors import DomainError, NoConvergenceError
from caputo_l1.l1 import SampledFunction
from caputo_l1.special_fn import gamma
from caputo_l1.testbed import HolderFunction

_MAX_ROUNDS = 60
_CHUNK = 128


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_panel_depth: int = 52
    nodes_per_panel: int = 16

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not 10 <= self.max_panel_depth <= 60:
            raise ValueError("max_panel_depth must lie in [10, 60]")
        if not 4 <= self.nodes_per_panel <= 64:
            raise ValueError("nodes_per_panel must lie in [4, 64]")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def _jacobi(n: int, gam: float) -> tuple[np.ndarray, np.ndarray]:
    # weight u^gam on [0, 1]
    x, w = roots_jacobi(n, 0.0, gam)
    return 0.5 * (x + 1.0), w * 0.5 ** (gam + 1.0)


def _graded(a: float, b: float, toward_a: bool, levels: int) -> list[tuple[float, float]]:
    """Panels on ``[a, b]`` shrinking geometrically towards one end."""
    L = b - a
    panels = []
    for j in range(levels):
        hi, lo = L * 2.0**-j, L * 2.0 ** -(j + 1)
        panels.append((a + lo, a + hi) if toward_a else (b - hi, b - lo))
    last = L * 2.0**-levels
    panels.append((a, a + last) if toward_a else (b - last, b))
    return panels


def _levels(L: float, w_min: float, cap: int) -> int:
    if L <= w_min:
        return 0
    return min(cap, int(math.ceil(math.log2(L / w_min))))


def _too_narrow(t, eps):
    return eps <= 64 * np.spacing(t)


def _panels_for(f: HolderFunction, t: float, depth: int):
    """Initial panels on ``[0, t - eps]`` plus the terminal width ``eps``."""
    kinks = sorted(c for c in f.kinks if 0.0 < c < t)
    above = [c for c in f.kinks if c > t]
    lower = kinks[-1] if kinks else 0.0
    reach = t - lower
    if above:
        reach = min(reach, min(above) - t)
    eps = 0.5 * reach
    if _too_narrow(t, eps):
        raise NoConvergenceError(
            f"t = {t!r} lies within rounding distance of a kink and cannot be resolved"
        )
    right = t - eps

    points = [0.0] + kinks + [right]
    graded0 = 0.0 in f.kinks
    panels: list[tuple[float, float]] = []
    for i, (p, q) in enumerate(zip(points[:-1], points[1:])):
        lo_kink = graded0 if i == 0 else True
        hi_end = i == len(points) - 2
        # toward the kink: fixed depth; toward s = t - eps: down to width eps
        lo_levels = depth if lo_kink else 0
        hi_levels = _levels(q - p, eps, depth) if hi_end else depth
        if lo_levels and hi_levels:
            m = 0.5 * (p + q)
            panels += _graded(p, m, True, lo_levels)
            panels += _graded(m, q, False, max(0, hi_levels - 1))
        elif lo_levels:
            panels += _graded(p, q, True, lo_levels)
        elif hi_levels:
            panels += _graded(p, q, False, hi_levels)
        else:
            panels.append((p, q))
    return panels, eps


class _Problem:
    """Integrand bookkeeping for a batch of evaluation times."""

    def __init__(self, f: HolderFunction, alpha: float, ts: np.ndarray, cfg):
        self.f = f
        self.alpha = alpha
        self.ts = ts
        self.yt = np.asarray(f(ts), dtype=np.float64)
        self.n = cfg.nodes_per_panel
        self.half = max(2, cfg.nodes_per_panel // 2)
        kink_t = np.isin(ts, np.asarray(f.kinks, dtype=np.float64))
        # terminal-piece mode: exponent q of the leading power of y(t) - y(t - u)
        self.linear_part = np.zeros(len(ts))
        self.power = np.ones(len(ts))
        if f.k == 0:
            self.power[kink_t] = f.beta
        elif f.derivative_eval is not None and np.any(kink_t):
            self.power[kink_t] = 1.0 + f.beta
            self.linear_part[kink_t] = np.asarray(f.derivative_eval(ts[kink_t]))

    def panel_sums(self, a, b, owner):
        """Gauss-Legendre values and error estimates of each panel."""
        out = []
        for m in (self.n, self.half):
            x, w = _legendre(m)
            s = a[:, None] + (b - a)[:, None] * x[None, :]
            u = self.ts[owner][:, None] - s
            F = (self.yt[owner][:, None] - self.f(s)) / u ** (1.0 + self.alpha)
            out.append((F @ w) * (b - a))
        return out[0], np.abs(out[0] - out[1])

    def terminal(self, eps, idx):
        """Gauss-Jacobi value and error estimate of ``∫_0^eps g(u) u^(-1-α) du``."""
        vals, errs = np.empty(len(idx)), np.empty(len(idx))
        for q in np.unique(self.power[idx]):
            sel = self.power[idx] == q
            ii = idx[sel]
            e = eps[sel]
            lin = self.linear_part[ii]
            gam = q - 1.0 - self.alpha
            res = []
            for m in (self.n, self.half):
                x, w = _jacobi(m, float(gam))
                u = e[:, None] * x[None, :]
                g = self.yt[ii][:, None] - self.f(self.ts[ii][:, None] - u)
                h = (g - lin[:, None] * u) / u**q
                res.append((h @ w) * e ** (gam + 1.0))
            analytic = lin * e ** (1.0 - self.alpha) / (1.0 - self.alpha)
            vals[sel] = res[0] + analytic
            errs[sel] = np.abs(res[0] - res[1])
        return vals, errs


def _integrate(prob: _Problem, cfg: QuadratureConfig):
    """Singular integral for every time in the batch, with error estimates."""
    ts = prob.ts
    n_t = len(ts)
    a_l, b_l, o_l = [], [], []
    eps = np.empty(n_t)
    for i, t in enumerate(ts):
        panels, eps[i] = _panels_for(prob.f, float(t), cfg.max_panel_depth)
        a_l += [p for p, _ in panels]
        b_l += [q for _, q in panels]
        o_l += [i] * len(panels)
    a = np.array(a_l)
    b = np.array(b_l)
    owner = np.array(o_l, dtype=np.int64)

    c = prob.alpha / gamma(1.0 - prob.alpha)
    boundary = (prob.yt - float(prob.f(0.0))) / (gamma(1.0 - prob.alpha) * ts**prob.alpha)

    vals, errs = prob.panel_sums(a, b, owner)
    tvals, terrs = prob.terminal(eps, np.arange(n_t))
    for _ in range(_MAX_ROUNDS):
        integral = np.bincount(owner, vals, n_t) + tvals
        panel_err = np.bincount(owner, errs, n_t)
        if not (np.all(np.isfinite(integral)) and np.all(np.isfinite(panel_err))):
            break
        total = boundary + c * integral
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(total)) / c
        bad = panel_err + terrs > tol
        if not np.any(bad):
            return integral, panel_err + terrs

        # shrink the terminal piece where it dominates, handing [eps/2, eps] to a panel
        shrink = np.flatnonzero(bad & (terrs > 0.5 * tol))
        if np.any(_too_narrow(ts[shrink], 0.5 * eps[shrink])):
            break
        if len(shrink):
            lo = ts[shrink] - eps[shrink]
            eps[shrink] *= 0.5
            new_a, new_b = lo, ts[shrink] - eps[shrink]
            nv, ne = prob.panel_sums(new_a, new_b, shrink)
            a, b = np.concatenate([a, new_a]), np.concatenate([b, new_b])
            owner = np.concatenate([owner, shrink])
            vals, errs = np.concatenate([vals, nv]), np.concatenate([errs, ne])
            tv, te = prob.terminal(eps[shrink], shrink)
            tvals[shrink], terrs[shrink] = tv, te

        counts = np.bincount(owner, minlength=n_t)
        share = (tol / (2.0 * np.maximum(counts, 1)))[owner]
        split = bad[owner] & (errs > share)
        if not np.any(split) and not len(shrink):
            break
        if np.any(split):
            mid = 0.5 * (a[split] + b[split])
            keep = ~split
            new_a = np.concatenate([a[split], mid])
            new_b = np.concatenate([mid, b[split]])
            new_o = np.concatenate([owner[split], owner[split]])
            nv, ne = prob.panel_sums(new_a, new_b, new_o)
            a = np.concatenate([a[keep], new_a])
            b = np.concatenate([b[keep], new_b])
            owner = np.concatenate([owner[keep], new_o])
            vals = np.concatenate([vals[keep], nv])
            errs = np.concatenate([errs[keep], ne])

    with np.errstate(invalid="ignore"):
        score = np.where(np.isfinite(panel_err + terrs), (panel_err + terrs) / tol, np.inf)
    worst = int(np.argmax(score))
    raise NoConvergenceError(
        f"quadrature did not reach tolerance at t = {ts[worst]!r}: "
        f"error estimate {(panel_err + terrs)[worst] * c:.3e}"
    )


def _check(f: HolderFunction, alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1): alpha = {alpha!r}")
    if not f.k + f.beta > alpha:
        raise NoConvergenceError(
            f"Caputo derivative of order {alpha} is not guaranteed for a "
            f"C^{{{f.k},{f.beta}}} function"
        )


def caputo_reference_many(
    f: HolderFunction,
    alpha: float,
    ts,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> tuple[np.ndarray, np.ndarray]:
    """Caputo derivative of ``f`` at each of ``ts`` with error estimates."""
    _check(f, alpha)
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    if np.any(~(ts > 0.0)):
        raise DomainError("evaluation times must be positive")
    values = np.empty(len(ts))
    errors = np.empty(len(ts))
    c = alpha / gamma(1.0 - alpha)
    for start in range(0, len(ts), _CHUNK):
        sl = slice(start, start + _CHUNK)
        prob = _Problem(f, alpha, ts[sl], cfg)
        integral, err = _integrate(prob, cfg)
        boundary = (prob.yt - float(f(0.0))) / (gamma(1.0 - alpha) * ts[sl] ** alpha)
        values[sl] = boundary + c * integral
        errors[sl] = c * err
    return values, errors


def caputo_reference(
    f: HolderFunction,
    alpha: float,
    t: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    full_output: bool = False,
):
    """Caputo derivative of order ``alpha`` of ``f`` at ``t > 0``.

    With ``full_output=True`` returns ``(value, error_estimate)``.

    Raises :class:`NoConvergenceError` when ``k + beta <= alpha`` or the
    tolerance cannot be met.
    """
    if not t > 0.0:
        raise DomainError(f"evaluation time must be positive: t = {t!r}")
    values, errors = caputo_reference_many(f, alpha, [t], cfg)
    if full_output:
        return float(values[0]), float(errors[0])
    return float(values[0])


def caputo_of_interpolant(
    samples: SampledFunction,
    alpha: float,
    n: int,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Caputo derivative at ``t_n`` of the piecewise-linear interpolant.

    On ``[t_j, t_{j+1}]`` the numerator ``y(t_n) - I y(s)`` is affine in
    ``u = t_n - s``, so each piece integrates in closed form against
    ``u^(-1-alpha)``. ``cfg`` is accepted for signature symmetry with
    :func:`caputo_reference`; no quadrature is involved.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1): alpha = {alpha!r}")
    grid = samples.grid
    if not 1 <= n <= grid.n_max:
        raise ValueError(f"node index must lie in [1, {grid.n_max}]: n = {n!r}")
    tau = grid.tau
    y = samples.values[: n + 1]
    yn = y[n]
    j = np.arange(n)
    slope = (y[1:] - y[:-1]) / tau
    u_hi = (n - j) * tau
    u_lo = (n - j - 1) * tau
    # y_n - I y(s) = offset + slope * u on piece j
    offset = (yn - y[:-1]) - slope * u_hi
    offset[-1] = 0.0

    p = 1.0 - alpha
    u_lo_safe = np.where(u_lo > 0, u_lo, 1.0)
    inv = np.where(u_lo > 0, u_lo_safe**-alpha - u_hi**-alpha, 0.0) / alpha
    terms = offset * inv + slope * (u_hi**p - u_lo**p) / p
    integral = math.fsum(terms)
    t_n = n * tau
    g = gamma(1.0 - alpha)
    return (yn - y[0]) / (g * t_n**alpha) + alpha / g * integral
