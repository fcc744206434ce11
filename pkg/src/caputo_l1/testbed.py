"""Hölder test functions and sampled estimators of their regularity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

ArrayFunction = Callable[[np.ndarray], np.ndarray]

#: Location of the kink of the test family.
KINK = 0.5


@dataclass(frozen=True)
class HolderFunction:
    """A vectorized function on ``[0, T]`` tagged with its class ``C^{k,beta}``.

    ``known_seminorm`` is the seminorm of the ``k``-th derivative when it is
    known analytically. ``kinks`` lists points where the function is not
    smooth; quadrature routines refine towards them.
    """

    eval: ArrayFunction
    k: int
    beta: float
    known_seminorm: Optional[float] = None
    derivative_eval: Optional[ArrayFunction] = None
    T: float = 1.0
    kinks: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.k not in (0, 1):
            raise ValueError(f"k must be 0 or 1: k = {self.k!r}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1]: beta = {self.beta!r}")
        if self.k + self.beta <= 0.0:
            raise ValueError("k + beta must be positive")
        if self.known_seminorm is not None and self.known_seminorm < 0.0:
            raise ValueError("known_seminorm must be nonnegative")
        if not self.T > 0.0:
            raise ValueError(f"horizon must be positive: T = {self.T!r}")

    def __call__(self, t):
        return self.eval(np.asarray(t, dtype=np.float64))

    def derivative(self) -> HolderFunction:
        """The first derivative as a ``C^{0,beta}`` function (``k = 1`` only)."""
        if self.k != 1 or self.derivative_eval is None:
            raise ValueError("no derivative available for this function")
        return HolderFunction(
            self.derivative_eval,
            0,
            self.beta,
            known_seminorm=self.known_seminorm,
            T=self.T,
            kinks=self.kinks,
        )


@dataclass(frozen=True)
class TestFunctionSpec:
    """Parameters ``(k, beta)`` of ``y(t) = (t - 1/2)^k |t - 1/2|^beta``."""

    __test__ = False

    k: int
    beta: float

    def __post_init__(self) -> None:
        if self.k not in (0, 1):
            raise ValueError(f"k must be 0 or 1: k = {self.k!r}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1]: beta = {self.beta!r}")

    @classmethod
    def from_kbeta(cls, value: float) -> TestFunctionSpec:
        """Split a smoothness index ``k + beta`` in ``(0, 2]``.

        Values up to 1 map to ``k = 0``; larger ones to ``k = 1``.
        """
        if not 0.0 < value <= 2.0:
            raise ValueError(f"k + beta must lie in (0, 2]: {value!r}")
        if value <= 1.0:
            return cls(0, value)
        return cls(1, round(value - 1.0, 12))


def y_test(spec: TestFunctionSpec, t):
    """Evaluate ``(t - 1/2)^k |t - 1/2|^beta``."""
    x = np.asarray(t, dtype=np.float64) - KINK
    y = np.abs(x) ** spec.beta
    if spec.k == 1:
        y = x * y
    return float(y) if y.ndim == 0 else y


def make_test_function(spec: TestFunctionSpec) -> HolderFunction:
    """Wrap :func:`y_test` with its regularity data.

    The seminorm of ``|t - 1/2|^beta`` is 1; the derivative for ``k = 1`` is
    ``(1 + beta)|t - 1/2|^beta`` with seminorm ``1 + beta``.
    """
    beta = spec.beta

    def f(t: np.ndarray) -> np.ndarray:
        return np.asarray(y_test(spec, t))

    if spec.k == 0:
        return HolderFunction(f, 0, beta, known_seminorm=1.0, kinks=(KINK,))

    def df(t: np.ndarray) -> np.ndarray:
        return (1.0 + beta) * np.abs(np.asarray(t, dtype=np.float64) - KINK) ** beta

    return HolderFunction(
        f, 1, beta, known_seminorm=1.0 + beta, derivative_eval=df, kinks=(KINK,)
    )


def constant_function(c: float = 0.0, T: float = 1.0) -> HolderFunction:
    """A constant, with zero seminorm in every class."""
    return HolderFunction(
        lambda t: np.full(np.shape(t), c, dtype=np.float64),
        1,
        1.0,
        known_seminorm=0.0,
        derivative_eval=lambda t: np.zeros(np.shape(t)),
        T=T,
    )


def _kink_offsets(T: float, depth: int) -> np.ndarray:
    return T * 2.0 ** -np.arange(depth + 1)


def modulus_of_continuity(
    f: HolderFunction, delta: float, samples_per_interval: int = 64
) -> float:
    """Sampled lower estimate of ``sup_{|t - s| <= delta} |f(t) - f(s)|``.

    Pairs are taken on a uniform grid of spacing ``delta / samples_per_interval``
    plus pairs at distance ``delta`` anchored at and centred on each kink.
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive: delta = {delta!r}")
    if samples_per_interval < 2:
        raise ValueError("samples_per_interval must be at least 2")
    T = f.T
    delta = min(delta, T)
    h = delta / samples_per_interval
    n = int(np.ceil(T / h))
    x = np.linspace(0.0, T, n + 1)
    y = f(x)
    best = 0.0
    # the grid is a little finer than h, so shifts up to floor(delta / step)
    m_max = int(np.floor(delta / (T / n) * (1 + 1e-12)))
    for m in range(1, min(m_max, n) + 1):
        best = max(best, float(np.max(np.abs(y[m:] - y[:-m]))))

    anchors = []
    for c in f.kinks:
        anchors += [(c, c + delta), (c - delta, c), (c - delta / 2, c + delta / 2)]
    anchors.append((T - delta, T))
    for a, b in anchors:
        if 0.0 <= a and b <= T:
            best = max(best, abs(float(f(b)) - float(f(a))))
    return best


def holder_seminorm(f: HolderFunction, beta: float, pair_samples: int = 2000) -> float:
    """Sampled lower estimate of ``sup |f(t) - f(s)| / |t - s|^beta``.

    Combines all pairs of a uniform grid with pairs at separations ``2^-j``
    (``j <= 40``) touching and straddling each kink.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1]: beta = {beta!r}")
    if pair_samples < 2:
        raise ValueError("pair_samples must be at least 2")
    T = f.T
    x = np.linspace(0.0, T, pair_samples)
    y = f(x)
    best = 0.0
    for m in range(1, pair_samples):
        q = np.abs(y[m:] - y[:-m]) / (x[m:] - x[:-m]) ** beta
        best = max(best, float(np.max(q)))

    h = _kink_offsets(T, 40)
    for c in f.kinks:
        for a, b in ((c, c + h), (c - h, c), (c - h, c + h), (c - h / 2, c + h / 2)):
            a, b = np.broadcast_arrays(a, b)
            ok = (a >= 0.0) & (b <= T) & (b > a)
            if np.any(ok):
                q = np.abs(f(b[ok]) - f(a[ok])) / (b[ok] - a[ok]) ** beta
                best = max(best, float(np.max(q)))
    return best
