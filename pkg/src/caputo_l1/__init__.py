"""L1 discretization of the Caputo derivative with Hölder-space error bounds."""

from caputo_l1._backend import BACKEND
from caputo_l1.analysis import (
    ErrorConstantParams,
    OrderEstimate,
    asymptotic_optimal_constant,
    caputo_wellposed_bound,
    error_constant,
    estimate_order,
    interpolation_bound,
    truncation_bound,
)
from caputo_l1.errors import DegenerateDifferenceError, DomainError, NoConvergenceError
from caputo_l1.l1 import (
    L1Weights,
    SampledFunction,
    UniformGrid,
    interpolate,
    l1_apply,
    l1_apply_all,
    weights,
)
from caputo_l1.oracle import (
    QuadratureConfig,
    caputo_of_interpolant,
    caputo_reference,
    caputo_reference_many,
)
from caputo_l1.special_fn import gamma, riemann_zeta
from caputo_l1.testbed import (
    HolderFunction,
    TestFunctionSpec,
    holder_seminorm,
    make_test_function,
    modulus_of_continuity,
    y_test,
)

__all__ = [
    "BACKEND",
    "DegenerateDifferenceError",
    "DomainError",
    "ErrorConstantParams",
    "HolderFunction",
    "L1Weights",
    "NoConvergenceError",
    "OrderEstimate",
    "QuadratureConfig",
    "SampledFunction",
    "TestFunctionSpec",
    "UniformGrid",
    "asymptotic_optimal_constant",
    "caputo_of_interpolant",
    "caputo_reference",
    "caputo_reference_many",
    "caputo_wellposed_bound",
    "error_constant",
    "estimate_order",
    "gamma",
    "holder_seminorm",
    "interpolate",
    "interpolation_bound",
    "l1_apply",
    "l1_apply_all",
    "make_test_function",
    "modulus_of_continuity",
    "riemann_zeta",
    "truncation_bound",
    "weights",
    "y_test",
]
