# modules/halfline.py
# This module provides the half-line lower bounds of the Extremal Polynomial Suite.
# The witness g_{n,m} = phi * T_{n+m} is built exactly over the rationals, its n-th
# derivative is certified to peak at x = 1 by sampling with an explicit error bound,
# and the resulting gamma_{n,k} constants reproduce the printed gamma table.

import logging
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Tuple

import numpy as np
import sympy as sp
from numpy.polynomial import chebyshev as C
from scipy import optimize

from modules.chebyshev import endpoint_value
from modules.shared_utils import WitnessError, require

logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 1: MODULE-SPECIFIC CONSTANTS
# ====================================================================================================

CERTIFICATE_GRID = 20001      # samples of the angle variable on [0, pi]
REFINE_TOL = 1e-12            # golden-section tolerance for interior maxima
FALSIFY_SLACK = 1e-12         # a sample must beat the endpoint by this relative amount to falsify

STATUS_TRUE = "true"
STATUS_FALSE = "false"
STATUS_INCONCLUSIVE = "inconclusive"

X = sp.Symbol("x")


# ====================================================================================================
# SECTION 2: DOMAIN TYPES
# ====================================================================================================

@dataclass(frozen=True, eq=False)
class HalfLineWitness:
    """
    g_{n,m} = phi * T_{n+m} on [-1, 1], extended by zero to (-inf, -1].

    Attributes:
        n (int): Smoothness order.
        m (int): Degree excess.
        c_n (sp.Rational): Normalization with phi(1) = 1.
        g (sp.Poly): Exact witness polynomial over QQ.
        g_deriv_at_1 (Tuple): Exact g^(k)(1) for k = 0..n+1.
        g_deriv_at_minus_1 (Tuple): Exact g^(j)(-1) for j = 0..n.
        gn_coeffs (np.ndarray): Chebyshev coefficients of g^(n), rounded from exact values.
        sup_gn (float): Largest sampled and refined |g^(n)| on [-1, 1].
        argmax (float): Where that maximum sits.
    """

    n: int
    m: int
    c_n: sp.Rational
    g: sp.Poly = field(repr=False)
    g_deriv_at_1: Tuple[sp.Rational, ...] = field(repr=False)
    g_deriv_at_minus_1: Tuple[sp.Rational, ...] = field(repr=False)
    gn_coeffs: np.ndarray = field(repr=False)
    sup_gn: float
    argmax: float

    @property
    def degree(self) -> int:
        return self.g.degree()


@dataclass(frozen=True)
class MaxCertificate:
    """Outcome of the endpoint-maximum certificate for |g^(n)| on [-1, 1]."""

    n: int
    m: int
    status: str
    endpoint_value: float
    best_interior: float
    best_interior_x: float
    margin: float
    error_bound: float
    near_zone: float
    far_sample_max: float
    grid_size: int
    lipschitz: float

    @property
    def verified(self) -> bool:
        return self.status == STATUS_TRUE

    def diagnostics(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class GammaEntry:
    n: int
    k: int
    m: int
    gamma: float
    floor: float
    status: str


# ====================================================================================================
# SECTION 3: EXACT WITNESS CONSTRUCTION
# ====================================================================================================

def _to_chebyshev(poly: sp.Poly) -> List[sp.Rational]:
    """Exact Chebyshev coefficients, peeling the leading term with T_j = 2^(j-1) x^j + ..."""
    remainder = poly
    coeffs = [sp.Rational(0)] * (poly.degree() + 1)
    for j in range(poly.degree(), -1, -1):
        lead = remainder.coeff_monomial(X ** j)
        if lead == 0:
            continue
        c_j = lead / 2 ** (j - 1) if j > 0 else lead
        coeffs[j] = c_j
        remainder -= sp.chebyshevt_poly(j, X, polys=True).set_domain(sp.QQ) * c_j
    return coeffs


def _derivative_values(poly: sp.Poly, point: int, count: int) -> Tuple[sp.Rational, ...]:
    values, current = [], poly
    for _ in range(count):
        values.append(current.eval(point))
        current = current.diff(X)
    return tuple(values)


@lru_cache(maxsize=None)
def build_witness(n: int, m: int) -> HalfLineWitness:
    """
    Builds g_{n,m}(x) = phi(x) T_{n+m}(x) with phi(x) = c_n * int_{-1}^x (1-t^2)^n dt.

    Args:
        n (int): Smoothness order, n >= 2.
        m (int): Degree excess, m >= 1.

    Returns:
        HalfLineWitness: Exact polynomial, endpoint derivatives and the sampled sup of |g^(n)|.
    """
    require(n >= 2 and m >= 1, f"build_witness needs n >= 2 and m >= 1, got (n={n}, m={m}).")
    # Wallis: int_{-1}^{1} (1-t^2)^n dt = 2^(2n+1) (n!)^2 / (2n+1)!
    c_n = sp.Rational(math.factorial(2 * n + 1), 2 ** (2 * n + 1) * math.factorial(n) ** 2)
    antiderivative = sp.Poly((1 - X ** 2) ** n, X, domain=sp.QQ).integrate()
    phi = (antiderivative - antiderivative.eval(-1)) * c_n
    g = phi * sp.chebyshevt_poly(n + m, X, polys=True).set_domain(sp.QQ)

    gn = g
    for _ in range(n):
        gn = gn.diff(X)
    gn_coeffs = np.array([float(c) for c in _to_chebyshev(gn)])
    gn_coeffs.setflags(write=False)

    sup_gn, argmax = _refined_sup(gn_coeffs)
    witness = HalfLineWitness(
        n=n, m=m, c_n=c_n, g=g,
        g_deriv_at_1=_derivative_values(g, 1, n + 2),
        g_deriv_at_minus_1=_derivative_values(g, -1, n + 1),
        gn_coeffs=gn_coeffs, sup_gn=sup_gn, argmax=argmax,
    )
    logger.debug(f"Witness g_({n},{m}) built: degree {witness.degree}, sup|g^(n)| = {sup_gn:.10g} at x = {argmax:.6f}")
    return witness


# ====================================================================================================
# SECTION 4: ENDPOINT-MAXIMUM CERTIFICATE
# Work in the angle variable q(phi) = g^(n)(cos phi), a trigonometric polynomial of degree d.
# Bernstein gives |q''| <= d^2 max|q|, so a cell of width h can exceed its sampled ends by
# at most h^2 d^2 max|q| / 8. Near phi = 0 a fourth-order Taylor bound keeps q below q(0).
# ====================================================================================================

def _angle_samples(coeffs: np.ndarray, grid_size: int) -> Tuple[np.ndarray, np.ndarray]:
    angles = np.linspace(0.0, math.pi, grid_size)
    return angles, C.chebval(np.cos(angles), coeffs)


def _refine_local_maxima(coeffs: np.ndarray, angles: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """Largest |q| over interior local maxima (index >= 1), refined by golden-section search."""
    magnitude = np.abs(values)
    peaks = np.flatnonzero((magnitude[1:-1] > magnitude[:-2]) & (magnitude[1:-1] >= magnitude[2:])) + 1
    if magnitude[-1] > magnitude[-2]:
        peaks = np.append(peaks, len(magnitude) - 1)

    best_value, best_angle = 0.0, math.pi
    for j in peaks:
        value, angle = float(magnitude[j]), float(angles[j])
        if j + 1 < len(angles):
            try:
                result = optimize.minimize_scalar(
                    lambda a: -abs(float(C.chebval(math.cos(a), coeffs))),
                    bracket=(angles[j - 1], angles[j], angles[j + 1]),
                    method="golden", tol=REFINE_TOL)
                if -result.fun > value and angles[j - 1] <= result.x <= angles[j + 1]:
                    value, angle = float(-result.fun), float(result.x)
            except ValueError:
                pass
        if value > best_value:
            best_value, best_angle = value, angle
    return best_value, best_angle


def _refined_sup(coeffs: np.ndarray, grid_size: int = CERTIFICATE_GRID) -> Tuple[float, float]:
    angles, values = _angle_samples(coeffs, grid_size)
    endpoint = abs(float(values[0]))
    interior, angle = _refine_local_maxima(coeffs, angles, values)
    if endpoint >= interior:
        return endpoint, 1.0
    return interior, math.cos(angle)


def verify_max_at_endpoint(w: HalfLineWitness, grid_size: int = CERTIFICATE_GRID) -> MaxCertificate:
    """
    Certifies that max |g^(n)| on [-1, 1] is attained at x = 1.

    Returns:
        MaxCertificate: status "true" when the sampled far-zone maximum plus the cell error
        stays below g^(n)(1), "false" when some sample beats g^(n)(1), else "inconclusive".
    """
    coeffs = w.gn_coeffs
    d = len(coeffs) - 1
    angles, values = _angle_samples(coeffs, grid_size)
    h = math.pi / (grid_size - 1)
    endpoint = float(values[0])
    sampled_max = float(np.max(np.abs(values)))

    shrink = 1.0 - (h * d) ** 2 / 8.0
    m_upper = sampled_max / shrink
    error_bound = (h * d) ** 2 * m_upper / 8.0

    slope_at_1 = float(w.g_deriv_at_1[w.n + 1])
    near_zone = 0.0
    if slope_at_1 > 0.0 and endpoint > 0.0:
        taylor_zone = math.sqrt(12.0 * slope_at_1 / (d ** 4 * m_upper))
        # q stays above q(0) - d^2 M phi^2 / 2, hence positive, on this zone.
        sign_zone = math.sqrt(endpoint / (d ** 2 * m_upper))
        near_zone = min(taylor_zone, sign_zone)
    first_far = int(math.floor(near_zone / h))
    far_sample_max = float(np.max(np.abs(values[first_far:]))) if first_far > 0 else sampled_max

    best_interior, best_angle = _refine_local_maxima(coeffs, angles, values)
    margin = endpoint - best_interior

    if endpoint <= 0.0 or best_interior > endpoint * (1.0 + FALSIFY_SLACK) or sampled_max > abs(endpoint) * (1.0 + FALSIFY_SLACK):
        status = STATUS_FALSE
    elif first_far > 0 and far_sample_max + error_bound < endpoint:
        status = STATUS_TRUE
    else:
        status = STATUS_INCONCLUSIVE

    certificate = MaxCertificate(
        n=w.n, m=w.m, status=status, endpoint_value=endpoint,
        best_interior=best_interior, best_interior_x=math.cos(best_angle), margin=margin,
        error_bound=error_bound, near_zone=near_zone, far_sample_max=far_sample_max,
        grid_size=grid_size, lipschitz=d * m_upper,
    )
    if status == STATUS_INCONCLUSIVE:
        logger.warning(f"Endpoint-maximum certificate inconclusive for (n={w.n}, m={w.m}): "
                       f"margin {margin:.3e}, error bound {error_bound:.3e}")
    else:
        logger.debug(f"Certificate (n={w.n}, m={w.m}): {status}, margin {margin:.3e}")
    return certificate


@lru_cache(maxsize=None)
def certificate_for(n: int, m: int) -> MaxCertificate:
    return verify_max_at_endpoint(build_witness(n, m))


# ====================================================================================================
# SECTION 5: GAMMA CONSTANTS
# ====================================================================================================

def witness_degree_excess(n: int) -> int:
    """m = 1 for 3 <= n <= 6, 2 for 7 <= n <= 10, 3 for 11 <= n <= 15."""
    if 3 <= n <= 6:
        return 1
    if 7 <= n <= 10:
        return 2
    if 11 <= n <= 15:
        return 3
    raise WitnessError(f"No witness degree excess is tabulated for n = {n}.", {"n": n})


def _gamma_ratio(n: int, k: int, m: int) -> float:
    log_value = (math.log(endpoint_value(n + m, k)) - math.log(endpoint_value(n, k))
                 + (k / n) * (math.log(endpoint_value(n, n)) - math.log(endpoint_value(n + m, n))))
    return math.exp(log_value)


def gamma_gT(n: int, k: int, m: int) -> float:
    """
    gamma_{n,k} = T_{n+m}^(k)(1)/T_n^(k)(1) * (T_n^(n)(1)/T_{n+m}^(n)(1))^(k/n), valid once the
    witness g_{n,m} is certified to peak at x = 1.

    Raises:
        WitnessError: If the certificate is not "true"; carries its diagnostics.
    """
    require(n >= 2 and 1 <= k <= n - 1 and m >= 1, f"gamma_gT needs 1 <= k <= n-1, got (n={n}, k={k}, m={m}).")
    certificate = certificate_for(n, m)
    if not certificate.verified:
        raise WitnessError(f"Witness g_({n},{m}) is not certified ({certificate.status}).",
                           certificate.diagnostics())
    return _gamma_ratio(n, k, m)


def gamma_floor(n: int, k: int) -> float:
    """Stechkin-based floor 2^(-k/n) ((2n)!)^(k/n) / prod_{j<k} (n^2 - j^2), always above (2/e)^(2k)."""
    require(1 <= k <= n - 1, f"gamma_floor needs 1 <= k <= n-1, got (n={n}, k={k}).")
    product = 1
    for j in range(k):
        product *= n * n - j * j
    log_value = (k / n) * (math.lgamma(2 * n + 1) - math.log(2.0)) - math.log(product)
    return math.exp(log_value)


def gamma_table(n_values: Iterable[int]) -> List[GammaEntry]:
    """gamma_{n,k} for k = 1..n-2 with the witness status of each column."""
    entries = []
    for n in n_values:
        m = witness_degree_excess(n)
        status = certificate_for(n, m).status
        if status != STATUS_TRUE:
            logger.warning(f"gamma column n={n} reported without a certified witness ({status}).")
        for k in range(1, n - 1):
            entries.append(GammaEntry(n=n, k=k, m=m, gamma=_gamma_ratio(n, k, m),
                                      floor=gamma_floor(n, k), status=status))
    return entries
