# modules/bounds.py
# This module collects the closed-form constants that bound the pointwise extremal values
# m_k(x, sigma), and the comparisons that decide the endpoint conjecture on a parameter grid:
# the polynomial case sigma <= sigma_n and the spline case normalized at sigma = sigma_n.

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from modules import chebyshev, halfline
from modules.shared_utils import leq_with_slack, require, sigma_n

logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 1: MODULE-SPECIFIC CONSTANTS
# ====================================================================================================

SPLINE_CASE = "spline-case"

# 1.1 Interior-bound tags carried by BoundReport
INTERIOR_A = "A"
INTERIOR_AA = "AA"
INTERIOR_BETA = "beta"

# 1.2 Verdict labels
VERDICT_TRUE = "true"
VERDICT_FALSE = "false"
VERDICT_UNPROVEN = "unproven"

BETA_INTERIOR_FROM = 16          # beta_{n,2} closed form holds from this degree on
BETA_INTERIOR_SMALL_N = 0.6      # 3/5 below it
TANGENT_GRID = 1001


# ====================================================================================================
# SECTION 2: DOMAIN TYPES
# ====================================================================================================

@dataclass(frozen=True)
class BoundReport:
    """
    One comparison max(A, A*) <= B.

    Attributes:
        n, k (int): Degree and derivative order.
        sigma (Union[float, str]): sigma, or "spline-case" for the sigma_n normalization.
        A (float): Interior bound.
        Astar (float): Near-endpoint bound.
        B (float): Endpoint lower bound.
        interior_kind (str): Which estimate produced A.
        in_proven_range (bool): False marks comparisons outside every proven range.
    """

    n: int
    k: int
    sigma: Union[float, str]
    A: float
    Astar: float
    B: float
    interior_kind: str = INTERIOR_A
    in_proven_range: bool = True

    @property
    def verdict(self) -> bool:
        return leq_with_slack(max(self.A, self.Astar), self.B)

    @property
    def verdict_label(self) -> str:
        if not self.in_proven_range:
            return VERDICT_UNPROVEN
        return VERDICT_TRUE if self.verdict else VERDICT_FALSE


@dataclass(frozen=True)
class TangentCheck:
    n: int
    k: int
    at_eta: Tuple[float, float]   # (tangent, chord) at t = eta_k
    at_one: Tuple[float, float]   # (tangent, chord) at t = 1
    min_gap: float                # min over [eta_k, 1] of tangent - f

    @property
    def holds(self) -> bool:
        return (leq_with_slack(*self.at_eta) and leq_with_slack(*self.at_one)
                and self.min_gap >= -1e-12)


# ====================================================================================================
# SECTION 3: ELEMENTARY CONSTANTS
# ====================================================================================================

def _top(n: int, k: int) -> float:
    return float(chebyshev.endpoint_value(n, k))


def _check_sigma(n: int, sigma: float) -> float:
    sig = float(sigma_n(n))
    require(0.0 <= sigma <= sig * (1.0 + 1e-12), f"sigma must lie in [0, sigma_{n} = {sig}], got {sigma}.")
    return min(sigma, sig) / sig


def eta(n: int, k: int) -> float:
    """eta_k = (n-k-1) / (2(2n-k-1))."""
    require(1 <= k <= n - 1, f"eta needs 1 <= k <= n-1, got (n={n}, k={k}).")
    return (n - k - 1) / (2.0 * (2 * n - k - 1))


def lam(n: int, k: int) -> float:
    """lambda_k = (1/(k+1)) (n-1)/(n-1+k)."""
    require(1 <= k <= n - 1, f"lam needs 1 <= k <= n-1, got (n={n}, k={k}).")
    return (n - 1) / ((k + 1) * (n - 1 + k))


def beta_ratio(n: int, k: int) -> float:
    return chebyshev.endpoint_ratio_beta(n, k)


# ====================================================================================================
# SECTION 4: POLYNOMIAL-CASE BOUNDS (0 <= sigma <= sigma_n)
# ====================================================================================================

def lower_B(n: int, k: int, sigma: float) -> float:
    """Endpoint lower bound (1 - s) T_{n-1}^(k)(1) + s T_n^(k)(1), s = sigma/sigma_n."""
    require(n >= 2 and 1 <= k <= n - 1, f"lower_B needs 1 <= k <= n-1, got (n={n}, k={k}).")
    s = _check_sigma(n, sigma)
    return (1.0 - s) * _top(n - 1, k) + s * _top(n, k)


def upper_Astar(n: int, k: int, sigma: float) -> float:
    """
    Near-endpoint bound: T_{n-1}^(k)(1) up to s = eta_k, then
    lambda_k T_n^(k)(1) (s/eta_k)^(k/n). The branches need not meet at s = eta_k.
    """
    require(n >= 3 and 1 <= k <= n - 2, f"upper_Astar is not available for k = n-1 (n={n}, k={k}).")
    s = _check_sigma(n, sigma)
    e = eta(n, k)
    if s <= e:
        return _top(n - 1, k)
    return lam(n, k) * _top(n, k) * (s / e) ** (k / n)


def upper_A(n: int, k: int, sigma: float) -> float:
    """Interior bound (3/(2k+1)) T_{n-1}^(k)(1) + (2/(2k+1)) (2(k+1)/(n+k)) T_n^(k)(1) s."""
    require(n >= 2 and 1 <= k <= n - 1, f"upper_A needs 1 <= k <= n-1, got (n={n}, k={k}).")
    s = _check_sigma(n, sigma)
    return (3.0 / (2 * k + 1)) * _top(n - 1, k) + (2.0 / (2 * k + 1)) * (2.0 * (k + 1) / (n + k)) * _top(n, k) * s


def upper_AA(n: int, k: int, closed_form: bool = False) -> float:
    """
    |T_n^(k)(omega_k)| / (1 - delta_k/2)^k, bounding m_k(x, sigma_n) on [0, omega_k].

    Args:
        n (int): Degree.
        k (int): Order, 1 <= k <= n-2.
        closed_form (bool): Use delta_k/2 = sin(pi(k+1)/(2n)) instead of the measured zero gap.
            The closed form is also used when T_n^(k+1) has a single zero.
    """
    require(n >= 3 and 1 <= k <= n - 2, f"upper_AA needs 1 <= k <= n-2, got (n={n}, k={k}).")
    if closed_form or k == n - 2:
        half_gap = math.sin(math.pi * (k + 1) / (2 * n))
    else:
        half_gap = chebyshev.deriv_zero_gap(n, k) / 2.0
    return chebyshev.abs_deriv_at_omega(n, k) / (1.0 - half_gap) ** k


def tangent_line_check(n: int, k: int, points: int = TANGENT_GRID) -> TangentCheck:
    """
    With everything divided by T_n^(k)(1): f(t) = lambda_k (t/eta_k)^(k/n) is concave, so its
    tangent l at t = 2 eta_k dominates it on [eta_k, 1]; the chord g(t) = beta(1-t) + t must in
    turn dominate l at t = eta_k and t = 1.
    """
    require(n >= 3 and 1 <= k <= n - 2, f"tangent_line_check needs 1 <= k <= n-2, got (n={n}, k={k}).")
    e, l, b, r = eta(n, k), lam(n, k), beta_ratio(n, k), k / n

    def tangent(t):
        return l * 2.0 ** r * (1.0 + r * (t - 2.0 * e) / (2.0 * e))

    def chord(t):
        return b * (1.0 - t) + t

    ts = np.linspace(e, 1.0, points)
    gap = tangent(ts) - l * (ts / e) ** r
    return TangentCheck(n=n, k=k, at_eta=(tangent(e), chord(e)), at_one=(tangent(1.0), chord(1.0)),
                        min_gap=float(np.min(gap)))


def karlin_polynomial_check(n: int, k: int, sigma_grid: Sequence[float]) -> List[BoundReport]:
    """
    For each sigma on the grid: A = upper_A, A* = upper_Astar, B = lower_B. For k = 1 the
    interior bound is min(upper_A, upper_AA), since T_n'(omega_1)/(1 - delta_1/2) stays
    below T_{n-1}'(1) = ((n-1)/n)^2 T_n'(1).

    Raises:
        ParameterRangeError: For n <= 3 (the classical range) or k outside 1..n-2.
    """
    require(n >= 4 and 1 <= k <= n - 2, f"karlin_polynomial_check needs n >= 4 and 1 <= k <= n-2, got (n={n}, k={k}).")
    interior_aa = upper_AA(n, 1) if k == 1 else None
    reports = []
    for sigma in sigma_grid:
        a = upper_A(n, k, sigma)
        kind = INTERIOR_A
        if interior_aa is not None and interior_aa < a:
            a, kind = interior_aa, INTERIOR_AA
        reports.append(BoundReport(n=n, k=k, sigma=float(sigma), A=a, Astar=upper_Astar(n, k, sigma),
                                   B=lower_B(n, k, sigma), interior_kind=kind))
    failures = [r for r in reports if not r.verdict]
    if failures:
        logger.warning(f"Polynomial-case comparison failed for (n={n}, k={k}) at sigma = {[r.sigma for r in failures]}")
    return reports


# ====================================================================================================
# SECTION 5: SPLINE-CASE CONSTANTS (sigma = sigma_n normalization)
# ====================================================================================================

def alpha_table(n: int, k: int) -> float:
    """alpha_{n,k} = lambda_k (2(2n-k-1)/(n-k-1))^(k/n), the near-endpoint constant at sigma_n."""
    require(n >= 3 and 1 <= k <= n - 2, f"alpha_table needs 1 <= k <= n-2, got (n={n}, k={k}).")
    return lam(n, k) * (1.0 / eta(n, k)) ** (k / n)


def alpha_schur(n: int, k: int) -> float:
    """
    Near-endpoint constant built on the stretched-Chebyshev endpoint estimate:
    k = 1: (1/3) (2(2n-2)/(n-2))^(1/n); k = 2: c* (2(2n-3)/(n-3))^(2/n) with
    c* = 3(pi^2-6)/(pi^2(15-pi^2)), the supremum over n of the k = 2 endpoint constant.
    """
    if k == 1:
        require(n >= 3, f"alpha_schur(k=1) needs n >= 3, got {n}.")
        return (1.0 / 3.0) * (1.0 / eta(n, 1)) ** (1.0 / n)
    if k == 2:
        require(n >= 4, f"alpha_schur(k=2) needs n >= 4, got {n}.")
        return chebyshev.SCHUR_P3_LIMIT * (1.0 / eta(n, 2)) ** (2.0 / n)
    require(False, f"alpha_schur is defined for k in {{1, 2}}, got k = {k}.")


def beta_interior(n: int, k: int = 2) -> float:
    """beta_{n,2} = (8/55) / (1 - sin(3 pi/(2n)))^2 for n >= 16, and 3/5 below that."""
    require(k == 2 and n >= 4, f"beta_interior is defined for k = 2 and n >= 4, got (n={n}, k={k}).")
    if n < BETA_INTERIOR_FROM:
        return BETA_INTERIOR_SMALL_N
    return chebyshev.SECOND_DERIVATIVE_RATIO / (1.0 - math.sin(3.0 * math.pi / (2 * n))) ** 2


def stechkin_lower_C(n: int, k: int) -> float:
    """Larger of k!/(2k)! ((2n)!/n!)^(k/n) and ((2n)!)^(1-k/n)/(n-k)!, in log space."""
    require(1 <= k <= n - 1, f"stechkin_lower_C needs 1 <= k <= n-1, got (n={n}, k={k}).")
    r = k / n
    first = math.lgamma(k + 1) - math.lgamma(2 * k + 1) + r * (math.lgamma(2 * n + 1) - math.lgamma(n + 1))
    second = (1.0 - r) * math.lgamma(2 * n + 1) - math.lgamma(n - k + 1)
    return math.exp(max(first, second))


def stechkin_growth(n: int, k: int) -> Tuple[int, float]:
    """(p, (n/p)^p) with p = min(k, n-k), the growth envelope of the half-line constants."""
    require(1 <= k <= n - 1, f"stechkin_growth needs 1 <= k <= n-1, got (n={n}, k={k}).")
    p = min(k, n - k)
    return p, (n / p) ** p


def in_theorem3_range(n: int, k: int) -> bool:
    """n = 5, 6 with k <= n-2; n = 7, 8, 9 with k <= n-3; n = 10, 11 with k <= 6."""
    if k < 1:
        return False
    if n in (5, 6):
        return k <= n - 2
    if n in (7, 8, 9):
        return k <= n - 3
    if n in (10, 11):
        return k <= 6
    return False


def spline_gamma(n: int, k: int) -> Tuple[float, str]:
    """gamma_{n,k} from a certified witness for 4 <= n <= 15, else the Stechkin floor."""
    if 4 <= n <= 15:
        return halfline.gamma_gT(n, k, halfline.witness_degree_excess(n)), "witness-verified"
    return halfline.gamma_floor(n, k), "closed-form"


def karlin_spline_check(n: int, k: int) -> BoundReport:
    """
    Spline-case comparison at the sigma_n normalization. Interior: upper_AA(n, 1) for k = 1,
    min(upper_A(sigma_n), beta_{n,2} T_n''(1)) for k = 2 and upper_A(sigma_n) beyond. Near the
    endpoint: alpha_{n,k} T_n^(k)(1), sharpened by alpha_schur for k <= 2. Endpoint: gamma_{n,k} T_n^(k)(1).
    Outside the proven ranges the numbers are still reported, labelled "unproven".
    For n < 4 or k = n-1 no estimate applies; the report carries NaN bounds, labelled "unproven".
    """
    require(n >= 2 and 1 <= k <= n - 1, f"karlin_spline_check needs 1 <= k <= n-1, got (n={n}, k={k}).")
    if n < 4 or k == n - 1:
        logger.info(f"Spline case (n={n}, k={k}) lies outside every estimate; reporting it unproven.")
        return BoundReport(n=n, k=k, sigma=SPLINE_CASE, A=math.nan, Astar=math.nan, B=math.nan,
                           in_proven_range=False)
    top = _top(n, k)
    sig = float(sigma_n(n))

    if k == 1:
        interior, kind = upper_AA(n, 1), INTERIOR_AA
    elif k == 2:
        interior, kind = upper_A(n, 2, sig), INTERIOR_A
        beta_bound = beta_interior(n, 2) * top
        if beta_bound < interior:
            interior, kind = beta_bound, INTERIOR_BETA
    else:
        interior, kind = upper_A(n, k, sig), INTERIOR_A

    alpha = alpha_table(n, k)
    if k <= 2:
        alpha = min(alpha, alpha_schur(n, k))
    gamma, _ = spline_gamma(n, k)

    report = BoundReport(n=n, k=k, sigma=SPLINE_CASE, A=interior, Astar=alpha * top, B=gamma * top,
                         interior_kind=kind, in_proven_range=k <= 2 or in_theorem3_range(n, k))
    logger.debug(f"Spline case (n={n}, k={k}): A={report.A:.6g} A*={report.Astar:.6g} B={report.B:.6g} -> {report.verdict_label}")
    return report


def theorem2_table(n_values: Iterable[int]) -> List[Dict[str, Optional[float]]]:
    """Rows (n, alpha_{n,2}, beta_{n,2}, gamma_{n,2}, verdict) of the k = 2 spline comparison."""
    rows = []
    for n in n_values:
        require(n >= 4, f"theorem2_table needs n >= 4, got {n}.")
        alpha = alpha_schur(n, 2)
        beta = None if n == 4 else beta_interior(n, 2)
        gamma, provenance = spline_gamma(n, 2)
        verdict = leq_with_slack(max(alpha, beta or 0.0), gamma)
        rows.append({"n": n, "alpha": alpha, "beta": beta, "gamma": gamma,
                     "verdict": verdict, "provenance": provenance})
    return rows


def proven_table_cell(n: int, k: int) -> bool:
    """alpha_{n,k} <= gamma_{n,k}, the shaded cells of the printed spline tables."""
    gamma, _ = spline_gamma(n, k)
    return leq_with_slack(alpha_table(n, k), gamma)
