# modules/chebyshev.py
# This module implements the Chebyshev machinery of the Extremal Polynomial Suite.
# It evaluates T_n and all of its derivatives, produces exact endpoint derivative
# values, and locates the zeros of T_n^(k+1) that every downstream estimate uses.

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy import optimize

from modules.shared_utils import ConvergenceError, ParameterRangeError, require, sigma_n

logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 1: MODULE-SPECIFIC CONSTANTS
# ====================================================================================================

# 1.1 Root isolation
ROOT_GRID_FACTOR = 8      # sign-change scan uses 8n Chebyshev nodes
ROOT_XTOL = 1e-13         # bisection tolerance before the Newton polish

# 1.2 Checks
RECURRENCE_TOL = 1e-8
DOMAIN_SLACK = 1e-12

# 1.3 Named constants of the classical estimates
ERDOS_SZEGO_RATIO = 0.25               # |T_n'(omega_1)| <= T_n'(1)/4, n >= 5
SECOND_DERIVATIVE_RATIO = 8.0 / 55.0   # |T_n''(omega_2)| <= (8/55) T_n''(1), n >= 10
SCHUR_P3_LIMIT = 3.0 * (math.pi ** 2 - 6.0) / (math.pi ** 2 * (15.0 - math.pi ** 2))


# ====================================================================================================
# SECTION 2: DOMAIN TYPES
# ====================================================================================================

@dataclass(frozen=True)
class ChebDerivVector:
    """All derivative values a_m = T_n^(m)(x), m = 0..n, at a single point x."""

    n: int
    x: float
    values: Tuple[float, ...]

    def __getitem__(self, m: int) -> float:
        # T_n^(m) vanishes identically past m = n.
        return self.values[m] if 0 <= m <= self.n else 0.0

    def recurrence_residuals(self) -> List[float]:
        """
        Relative residuals of (x^2-1)a_{m+2} + (2m+1)x a_{m+1} - (n^2-m^2)a_m for m = 0..n-2.
        """
        a, x, n = self.values, self.x, self.n
        residuals = []
        for m in range(n - 1):
            terms = ((x * x - 1.0) * a[m + 2], (2 * m + 1) * x * a[m + 1], -(n * n - m * m) * a[m])
            scale = max(abs(t) for t in terms) or 1.0
            residuals.append(abs(sum(terms)) / scale)
        return residuals


@dataclass(frozen=True)
class EndpointDerivative:
    """Exact value of T_n^(k)(1) as an arbitrary-precision integer."""

    n: int
    k: int
    value: int

    def __float__(self) -> float:
        return float(self.value)


# ====================================================================================================
# SECTION 3: EVALUATION
# ====================================================================================================

def _basis(n: int) -> np.ndarray:
    """Chebyshev coefficient vector of T_n: zeros with a single 1 in position n."""
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return coeffs


def cheb_poly(n: int) -> C.Chebyshev:
    """T_n as a numpy Chebyshev series (the n-th basis vector)."""
    require(n >= 0, f"Degree must be non-negative, got {n}.")
    return C.Chebyshev.basis(n)


def cheb_eval(n: int, x: float) -> float:
    """
    Evaluates T_n(x) by Clenshaw summation; outside [-1,1] this is the plain
    polynomial extension.
    """
    require(n >= 0, f"Degree must be non-negative, got {n}.")
    return float(C.chebval(x, _basis(n)))


def cheb_deriv_vector(n: int, x: float) -> ChebDerivVector:
    """
    Computes every derivative T_n^(m)(x), m = 0..n, by differentiating the
    Chebyshev coefficient vector. The ODE recurrence divides by x^2-1 and is only
    used as a residual check.

    Args:
        n (int): Degree, n >= 1.
        x (float): Point in [-1, 1].

    Returns:
        ChebDerivVector: The derivative values, with a_n set to the exact sigma_n.
    """
    require(n >= 1, f"cheb_deriv_vector needs n >= 1, got {n}.")
    require(abs(x) <= 1.0 + DOMAIN_SLACK, f"x must lie in [-1, 1], got {x}.")
    coeffs = _basis(n)
    values = []
    for _ in range(n + 1):
        values.append(float(C.chebval(x, coeffs)))
        coeffs = C.chebder(coeffs)
    values[n] = float(sigma_n(n))
    return ChebDerivVector(n=n, x=float(x), values=tuple(values))


@lru_cache(maxsize=None)
def endpoint_deriv(n: int, k: int) -> EndpointDerivative:
    """
    Exact T_n^(k)(1) = prod_{j<k} (n^2 - j^2)/(2j + 1). Every partial product is an
    integer, so the running division is exact.
    """
    require(n >= 0 and k >= 0, f"endpoint_deriv needs n, k >= 0, got ({n}, {k}).")
    if k > n:
        return EndpointDerivative(n=n, k=k, value=0)
    value = 1
    for j in range(k):
        value = value * (n * n - j * j) // (2 * j + 1)
    return EndpointDerivative(n=n, k=k, value=value)


def endpoint_value(n: int, k: int) -> int:
    """Shorthand for endpoint_deriv(n, k).value."""
    return endpoint_deriv(n, k).value


def endpoint_ratio_beta(n: int, k: int) -> float:
    """T_{n-1}^(k)(1) / T_n^(k)(1) = ((n-1)/n) * ((n-k)/(n-1+k))."""
    require(n >= 2 and 1 <= k <= n, f"endpoint_ratio_beta needs 1 <= k <= n, got ({n}, {k}).")
    return (n - 1) / n * (n - k) / (n - 1 + k)


def lk_chebyshev_ratio(n: int, k: int) -> float:
    """T_{n,k} = T_n^(k)(1) / sigma_n^(k/n), the homogeneous Landau-Kolmogorov ratio of T_n."""
    require(n >= 1 and 0 <= k <= n, f"lk_chebyshev_ratio needs 0 <= k <= n, got ({n}, {k}).")
    log_ratio = math.log(endpoint_value(n, k)) - (k / n) * math.log(sigma_n(n))
    return math.exp(log_ratio)


# ====================================================================================================
# SECTION 4: DERIVATIVE ZEROS
# Sign changes on a Chebyshev-node grid isolate each zero; bisection narrows it and
# one Newton step polishes it.
# ====================================================================================================

@lru_cache(maxsize=None)
def deriv_zeros(n: int, k: int) -> Tuple[float, ...]:
    """
    Sorted zeros of T_n^(k+1) in (-1, 1).

    Args:
        n (int): Degree.
        k (int): Order, 0 <= k <= n-2 (T_n^(k+1) then has n-k-1 simple real zeros).

    Returns:
        Tuple[float, ...]: The zeros in increasing order.
    """
    require(n >= 2 and 0 <= k <= n - 2,
            f"T_n^(k+1) has no zeros unless 0 <= k <= n-2, got (n={n}, k={k}).")
    coeffs = C.chebder(_basis(n), k + 1)
    slope = C.chebder(coeffs)
    expected = n - k - 1

    nodes = ROOT_GRID_FACTOR * n
    grid = np.sort(np.cos((np.arange(nodes) + 0.5) * np.pi / nodes))
    values = C.chebval(grid, coeffs)

    def f(t: float) -> float:
        return float(C.chebval(t, coeffs))

    zeros = []
    for left, right, f_left, f_right in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_left == 0.0:
            zeros.append(float(left))
            continue
        if f_left * f_right < 0.0:
            root = optimize.bisect(f, left, right, xtol=ROOT_XTOL)
            d = float(C.chebval(root, slope))
            if d != 0.0:
                root -= f(root) / d
            zeros.append(float(root))

    if len(zeros) != expected:
        raise ConvergenceError(
            f"Found {len(zeros)} zeros of T_{n}^({k + 1}), expected {expected}",
            residual=float(abs(len(zeros) - expected)), iterations=nodes)
    logger.debug(f"Zeros of T_{n}^({k + 1}): {zeros}")
    return tuple(zeros)


def omega(n: int, k: int) -> float:
    """Rightmost zero omega_k of T_n^(k+1); undefined for k = n-1 (constant derivative)."""
    if k == n - 1:
        raise ParameterRangeError(f"T_{n}^({n}) is constant; omega is undefined for k = n-1.")
    require(1 <= k <= n - 2, f"omega needs 1 <= k <= n-2, got (n={n}, k={k}).")
    return deriv_zeros(n, k)[-1]


def deriv_zero_gap(n: int, k: int) -> float:
    """
    delta_k, the maximal distance between consecutive zeros of T_n^(k+1).
    Raises ParameterRangeError when there are fewer than two zeros.
    """
    require(1 <= k <= n - 2, f"deriv_zero_gap needs 1 <= k <= n-2, got (n={n}, k={k}).")
    zeros = deriv_zeros(n, k)
    if len(zeros) < 2:
        raise ParameterRangeError(f"T_{n}^({k + 1}) has a single zero; the gap is undefined.")
    return float(np.max(np.diff(zeros)))


def local_maxima_abs_deriv(n: int, k: int) -> List[Tuple[float, float]]:
    """All (xi_i, |T_n^(k)(xi_i)|) with T_n^(k+1)(xi_i) = 0, sorted by xi_i."""
    require(1 <= k <= n - 2, f"local_maxima_abs_deriv needs 1 <= k <= n-2, got (n={n}, k={k}).")
    coeffs = C.chebder(_basis(n), k)
    return [(xi, abs(float(C.chebval(xi, coeffs)))) for xi in deriv_zeros(n, k)]


def abs_deriv_at_omega(n: int, k: int) -> float:
    """|T_n^(k)(omega_k)|, the largest interior local maximum of |T_n^(k)|."""
    return local_maxima_abs_deriv(n, k)[-1][1]


# ====================================================================================================
# SECTION 5: CLASSICAL ESTIMATES
# ====================================================================================================

def eriksson_weight(k: int, x: float) -> float:
    """Refinement weight F_k(x) = 2(1+x)^2 / ((2k+5)x + 2); at most 1 on [0, 1]."""
    return 2.0 * (1.0 + x) ** 2 / ((2 * k + 5) * x + 2.0)


def schur_p3_constant(n: int, k: int) -> float:
    """
    Endpoint constant of the stretched-Chebyshev construction with xi = cos(pi/n):
    r = T_n - c (x+1) T_n' with r^(k+1)(xi) = 0, mapped from [-1, xi] onto [-1, 1].
    Returns |p^(k)(1)| / T_n^(k)(1). For k = 1 this is (1+xi)/(2(2+xi)); for k = 2 it stays
    below SCHUR_P3_LIMIT, its limit as n grows.
    """
    require(n >= 3 and 1 <= k <= n - 2, f"schur_p3_constant needs 1 <= k <= n-2, got (n={n}, k={k}).")
    xi = math.cos(math.pi / n)
    a = cheb_deriv_vector(n, xi)
    numerator = (1.0 + xi) * a[k + 1] + k * a[k]
    denominator = (1.0 + xi) * a[k + 2] + (k + 1) * a[k + 1]
    r_k = a[k] - numerator / denominator * a[k + 1]
    p_k = ((1.0 + xi) / 2.0) ** k * r_k
    return abs(p_k) / endpoint_value(n, k)


def schur_p3_closed_form(n: int) -> float:
    """Closed form c(n, xi) of the k = 2 endpoint constant."""
    xi = math.cos(math.pi / n)
    s = 1.0 - xi * xi
    ratio = (6.0 * xi + 3.0 * xi * xi) / ((2.0 * xi * xi + 9.0 * xi + 4.0) - n * n * s)
    return ((1.0 + xi) / 2.0) ** 2 * (ratio - 1.0) / s * 3.0 / (n * n - 1)
